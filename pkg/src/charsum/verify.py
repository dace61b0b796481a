"""Verification checks: identity and bound sweeps packaged as reports.

Every check walks a family of cases, records one row per tested statement
(worst-case witness parameters included so any row can be replayed), and
aggregates into a VerificationReport.  Reports are deterministic: seeded
draws derive a private subseed per (check, modulus, trial) cell, so results
do not depend on sweep order or on the CHARSUM_THREADS setting.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from charsum.arith import divisors, factorize, multiplicative_profile
from charsum.character import (
    DirichletCharacter,
    character_group,
    enumerate_characters,
    evaluate,
    is_primitive,
    parity_flags,
    parse_character_label,
    product_character,
)
from charsum.rng import SplitMix64, derive_seed
from charsum.sums import (
    BilinearInstance,
    IntervalSpec,
    WeightVector,
    bilinear_form,
    character_value_table,
    complete_lambda,
    complete_lambda_table,
    gauss_sum,
    gauss_sum_all,
    incomplete_lambda,
    orthogonality_average,
    character_pair_sum,
    quadratic_expsum,
    second_moment,
    tolerance,
    unit_root_char_sum,
    weighted_second_moment,
    _modulus_tables,
)

_TAG_BOUND5 = 101
_TAG_LEMMA4 = 102
_TAG_T2_CHI = 103
_TAG_T2_LAM = 104
_TAG_BIL_Q = 105
_TAG_BIL_SIZE = 106
_TAG_BIL_CHI = 107
_TAG_BIL_COEFF = 108

_LEMMA4_SAMPLES = 200
_LEMMA4_EXHAUSTIVE_LIMIT = 100
_WITNESS_COUNT = 3


class UsageError(ValueError):
    """Bad or empty request (maps to CLI exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared knobs for seeded sweeps; identical configs give identical reports."""

    q_lo: int = 3
    q_hi: int = 30
    seed: int = 0
    trials: int = 4
    coeff_model: str = "unit-disc"
    epsilon: float = 0.1
    gamma: float = 2.0

    def to_dict(self) -> dict:
        return {
            "q_lo": self.q_lo,
            "q_hi": self.q_hi,
            "seed": self.seed,
            "trials": self.trials,
            "coeff_model": self.coeff_model,
            "epsilon": self.epsilon,
            "gamma": self.gamma,
        }


CSV_COLUMNS = [
    "check",
    "q",
    "chi_index",
    "chi_label",
    "kind",
    "params",
    "value_re",
    "value_im",
    "defect",
    "ratio",
    "passed",
]


def _fmt_scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class CaseRecord:
    """One tested statement, with enough parameters to replay its value."""

    check: str
    q: int
    chi_index: int
    chi_label: str
    kind: str
    params: dict
    value_re: float
    value_im: float
    defect: float
    ratio: float
    passed: bool

    def params_string(self) -> str:
        return ";".join(f"{k}={_fmt_scalar(v)}" for k, v in self.params.items())

    def to_json_obj(self) -> dict:
        return {
            "check": self.check,
            "q": self.q,
            "chi_index": self.chi_index,
            "chi_label": self.chi_label,
            "kind": self.kind,
            "params": self.params,
            "value_re": self.value_re,
            "value_im": self.value_im,
            "defect": self.defect,
            "ratio": self.ratio,
            "passed": self.passed,
        }

    def to_csv_row(self) -> list[str]:
        return [
            self.check,
            str(self.q),
            str(self.chi_index),
            self.chi_label,
            self.kind,
            self.params_string(),
            repr(self.value_re),
            repr(self.value_im),
            repr(self.defect),
            repr(self.ratio),
            "true" if self.passed else "false",
        ]


def _case(
    check: str,
    q: int,
    chi: DirichletCharacter | None,
    kind: str,
    params: dict,
    value: complex,
    defect: float,
    ratio: float,
    passed: bool,
) -> CaseRecord:
    return CaseRecord(
        check=check,
        q=q,
        chi_index=chi.index if chi is not None else -1,
        chi_label=chi.label if chi is not None else "",
        kind=kind,
        params=params,
        value_re=float(value.real),
        value_im=float(value.imag),
        defect=float(defect),
        ratio=float(ratio),
        passed=bool(passed),
    )


@dataclass
class VerificationReport:
    check: str
    descriptor: str
    config: ExperimentConfig | None
    cases: list[CaseRecord]
    notes: list[str] = field(default_factory=list)

    @property
    def cases_tested(self) -> int:
        return len(self.cases)

    @property
    def cases_passed(self) -> int:
        return sum(c.passed for c in self.cases)

    @property
    def max_abs_defect(self) -> float:
        return max((c.defect for c in self.cases), default=0.0)

    @property
    def max_ratio(self) -> float:
        return max((c.ratio for c in self.cases), default=0.0)

    @property
    def passed_all(self) -> bool:
        return all(c.passed for c in self.cases)

    def witnesses(self, k: int = _WITNESS_COUNT) -> list[CaseRecord]:
        order = sorted(
            range(len(self.cases)),
            key=lambda i: (-self.cases[i].defect, -self.cases[i].ratio, i),
        )
        return [self.cases[i] for i in order[:k]]

    def to_json_obj(self) -> dict:
        return {
            "check": self.check,
            "descriptor": self.descriptor,
            "config": self.config.to_dict() if self.config else None,
            "cases": [c.to_json_obj() for c in self.cases],
            "summary": {
                "tested": self.cases_tested,
                "passed": self.cases_passed,
                "max_defect": self.max_abs_defect,
                "max_ratio": self.max_ratio,
                "witnesses": [c.to_json_obj() for c in self.witnesses()],
                "notes": list(self.notes),
            },
        }


# ---------------------------------------------------------------------------
# per-modulus workers
# ---------------------------------------------------------------------------


def _profile(q: int):
    return multiplicative_profile(factorize(q))


def _theorem1_q(q: int) -> tuple[list[CaseRecord], list[str]]:
    group = character_group(q)
    prof = _profile(q)
    phi, omega = prof.phi, prof.omega
    envelope = q * phi * phi * 2**omega
    tol = 2.0**-40 * q**3
    cases: list[CaseRecord] = []
    for chi in enumerate_characters(group):
        if not parity_flags(chi).is_completely_even:
            continue
        if not is_primitive(chi):
            continue
        moment = second_moment(chi, "reduced")
        s = unit_root_char_sum(chi)
        target = q * phi * phi * s
        defect = abs(moment - target)
        ok = defect <= tol
        if q % 8 == 0:
            ok = ok and moment <= tol
        else:
            ok = ok and (q * phi * phi - tol <= moment <= envelope + tol)
        cases.append(
            _case(
                "theorem1",
                q,
                chi,
                kind="theorem1",
                params={"S": s},
                value=complex(moment),
                defect=defect,
                ratio=moment / envelope,
                passed=ok,
            )
        )
    notes = [] if cases else [f"q={q}: no primitive completely even character"]
    return cases, notes


def _bound4_q(q: int) -> tuple[list[CaseRecord], list[str]]:
    prof = _profile(q)
    bound = math.sqrt(q) * 2**prof.omega
    tol_ratio = tolerance(prof.phi) / bound
    cases = []
    notes = []
    for chi in enumerate_characters(character_group(q)):
        if chi.is_trivial:
            continue
        table = complete_lambda_table(chi)
        magnitudes = np.abs(table)
        m, n = divmod(int(magnitudes.argmax()), q)
        value = complete_lambda(chi, m, n)
        primitive = is_primitive(chi)
        passed = float(magnitudes.max()) <= bound * (1.0 + tol_ratio)
        if not passed and not primitive:
            notes.append(
                f"q={q}: envelope exceeded only by the imprimitive character "
                f"{chi.label} (|value|={abs(value):.6g} > {bound:.6g})"
            )
        cases.append(
            _case(
                "bound4",
                q,
                chi,
                kind="bound4",
                params={"m": m, "n": n, "primitive": primitive},
                value=value,
                defect=max(0.0, float(magnitudes.max()) - bound),
                ratio=abs(value) / bound,
                passed=passed,
            )
        )
    return cases, notes


def _lemma1_q(q: int) -> tuple[list[CaseRecord], list[str]]:
    root_q = math.sqrt(q)
    cases = []
    for chi in enumerate_characters(character_group(q)):
        if not is_primitive(chi):
            continue
        all_twists = gauss_sum_all(chi)
        g1 = complex(all_twists[1 % q])
        tab = character_value_table(chi)
        defect_mod = abs(abs(g1) - root_q)
        cases.append(
            _case(
                "lemma1",
                q,
                chi,
                kind="gauss_modulus",
                params={},
                value=g1,
                defect=defect_mod,
                ratio=abs(g1) / root_q,
                passed=defect_mod <= tolerance(q),
            )
        )
        twist_defects = np.abs(all_twists - np.conj(tab) * g1)
        n_star = int(twist_defects.argmax())
        value = gauss_sum(chi, n_star)
        defect_twist = float(twist_defects.max())
        cases.append(
            _case(
                "lemma1",
                q,
                chi,
                kind="gauss_twist",
                params={"n": n_star},
                value=value,
                defect=defect_twist,
                ratio=0.0,
                passed=defect_twist <= tolerance(2 * q),
            )
        )
        sign = evaluate(chi, q - 1).to_complex()
        conj_defect = abs(np.conj(g1) - sign * gauss_sum(chi.conjugate(), 1))
        cases.append(
            _case(
                "lemma1",
                q,
                chi,
                kind="gauss_conj",
                params={},
                value=g1,
                defect=conj_defect,
                ratio=0.0,
                passed=conj_defect <= tolerance(2 * q),
            )
        )
    return cases, []


def _lambda_terms(chi: DirichletCharacter, m: int, n: int) -> np.ndarray:
    """chi(m*a + n*abar) for a in [0, q), zero off the units."""
    q = chi.group.modulus
    _, inv, unit_mask, _ = _modulus_tables(q)
    tab = character_value_table(chi)
    a = np.arange(q, dtype=np.int64)
    values = tab[(m % q * a + n % q * inv[a]) % q].copy()
    values[~unit_mask] = 0
    return values


def _bound5_q(q: int, cfg: ExperimentConfig) -> tuple[list[CaseRecord], list[str]]:
    denom = q ** (0.5 + cfg.epsilon)
    cases = []
    for chi in enumerate_characters(character_group(q)):
        if chi.is_trivial:
            continue
        for trial in range(cfg.trials):
            rng = SplitMix64(derive_seed(cfg.seed, _TAG_BOUND5, q, chi.index, trial))
            m = rng.randrange(q)
            n = rng.randrange(q)
            terms = _lambda_terms(chi, m, n)
            prefix = np.concatenate(([0j], np.cumsum(np.concatenate([terms, terms]))))
            windows = np.lib.stride_tricks.sliding_window_view(prefix, q + 1)[:q]
            deltas = np.abs(windows - prefix[:q, None])
            start, length = divmod(int(deltas.argmax()), q + 1)
            start, length = int(start), int(length)
            value = incomplete_lambda(chi, m, n, IntervalSpec(start, length))
            cases.append(
                _case(
                    "bound5",
                    q,
                    chi,
                    kind="bound5",
                    params={"m": m, "n": n, "start": start, "length": length, "trial": trial},
                    value=value,
                    defect=0.0,
                    ratio=abs(value) / denom,
                    passed=True,
                )
            )
    return cases, []


def unit_average_coefficient(c: int, q: int) -> float:
    """Closed-form scale: unit average of chi(c*a+b) equals this times chi(b).

    Equals prod over p^alpha || q of (f(p^alpha) - f(p^(alpha-1))/p) times
    q/phi(q), where f(p^k) is 1 when p^k | c and 0 otherwise.  It collapses
    to 1 when q | c, and to 0 exactly when some p^alpha || q has
    p^(alpha-1) not dividing c.
    """
    prof = _profile(q)
    w = 1.0
    for p, alpha in factorize(q).factors:
        f_hi = 1.0 if c % p**alpha == 0 else 0.0
        f_lo = 1.0 if c % p ** (alpha - 1) == 0 else 0.0
        w *= f_hi - f_lo / p
    return w * q / prof.phi


def _lemma3_q(q: int, parts: tuple[str, ...]) -> tuple[list[CaseRecord], list[str]]:
    group = character_group(q)
    units, _, _, _ = _modulus_tables(q)
    phi = len(units)
    b_all = np.arange(q, dtype=np.int64)
    divs = divisors(q)
    coeffs = np.array([unit_average_coefficient(c, q) for c in range(q)])
    cases = []
    for chi in enumerate_characters(group):
        if not is_primitive(chi):
            continue
        tab = character_value_table(chi)
        if "lemma3" in parts:
            worst = (-1.0, 0, 0)
            for c in range(q):
                averages = tab[(c * units[:, None] + b_all[None, :]) % q].sum(axis=0) / phi
                defects = np.abs(averages - coeffs[c] * tab)
                b = int(defects.argmax())
                if float(defects[b]) > worst[0]:
                    worst = (float(defects[b]), c, b)
            defect, c, b = worst
            value = orthogonality_average(chi, c, b)
            cases.append(
                _case(
                    "lemma3",
                    q,
                    chi,
                    kind="lemma3",
                    params={"c": c, "b": b},
                    value=value,
                    defect=defect,
                    ratio=0.0,
                    passed=defect <= 2.0**-40,
                )
            )
        if "pairsum" in parts:
            worst = (-1.0, 0, divs[0])
            conj_units = np.conj(tab[units])
            for ell in divs:
                buckets = np.zeros(ell, dtype=np.complex128)
                np.add.at(buckets, units % ell, tab[units])
                grid = buckets[(units[:, None] * (b_all[None, :] % ell)) % ell]
                values = (conj_units[:, None] * grid).sum(axis=0)
                if ell == q:
                    target = tab * phi
                else:
                    target = np.zeros(q, dtype=np.complex128)
                defects = np.abs(values - target)
                y = int(defects.argmax())
                if float(defects[y]) > worst[0]:
                    worst = (float(defects[y]), y, ell)
            defect, y, ell = worst
            value = character_pair_sum(chi, y, ell)
            cases.append(
                _case(
                    "pairsum",
                    q,
                    chi,
                    kind="pairsum",
                    params={"y": y, "ell": ell},
                    value=value,
                    defect=defect,
                    ratio=0.0,
                    passed=defect <= tolerance(phi * phi),
                )
            )
    return cases, []


def _lemma4_q(q: int, cfg: ExperimentConfig) -> tuple[list[CaseRecord], list[str]]:
    prof = _profile(q)
    omega = prof.omega
    units, _, _, e_table = _modulus_tables(q)
    x_all = np.arange(q, dtype=np.int64)
    sq_all = x_all * x_all % q
    sq_units = units * units % q

    def envelopes(a: int) -> tuple[float, float]:
        g = math.gcd(a, q)
        korobov = math.sqrt(q * g)
        return korobov * 2**omega, korobov

    best_restricted = (-1.0, 0, 0)
    best_korobov = (-1.0, 0, 0)

    def scan_pair_block(a: int, b_values: np.ndarray) -> None:
        nonlocal best_restricted, best_korobov
        env_r, env_k = envelopes(a)
        r_vals = np.abs(
            e_table[(a * sq_units[None, :] + b_values[:, None] * units[None, :]) % q].sum(axis=1)
        )
        k_vals = np.abs(
            e_table[(a * sq_all[None, :] + b_values[:, None] * x_all[None, :]) % q].sum(axis=1)
        )
        i = int(r_vals.argmax())
        if float(r_vals[i]) / env_r > best_restricted[0]:
            best_restricted = (float(r_vals[i]) / env_r, a, int(b_values[i]))
        j = int(k_vals.argmax())
        if float(k_vals[j]) / env_k > best_korobov[0]:
            best_korobov = (float(k_vals[j]) / env_k, a, int(b_values[j]))

    if q <= _LEMMA4_EXHAUSTIVE_LIMIT:
        all_b = np.arange(q, dtype=np.int64)
        for a in range(q):
            scan_pair_block(a, all_b)
    else:
        rng = SplitMix64(derive_seed(cfg.seed, _TAG_LEMMA4, q))
        pairs: dict[int, list[int]] = {}
        for _ in range(_LEMMA4_SAMPLES):
            pairs.setdefault(rng.randrange(q), []).append(rng.randrange(q))
        for a in sorted(pairs):
            scan_pair_block(a, np.array(sorted(set(pairs[a])), dtype=np.int64))

    cases = []
    ratio_r, a_r, b_r = best_restricted
    value_r = quadratic_expsum(a_r, b_r, q, restricted=True)
    cases.append(
        _case(
            "lemma4",
            q,
            None,
            kind="lemma4_restricted",
            params={"a": a_r, "b": b_r},
            value=value_r,
            defect=max(0.0, ratio_r - 2.0),
            ratio=ratio_r,
            passed=ratio_r <= 2.0,
        )
    )
    ratio_k, a_k, b_k = best_korobov
    cases.append(
        _case(
            "lemma4",
            q,
            None,
            kind="lemma4_korobov",
            params={"a": a_k, "b": b_k},
            value=quadratic_expsum(a_k, b_k, q, restricted=False),
            defect=0.0,
            ratio=ratio_k,
            passed=True,
        )
    )
    if q % 2 == 1:
        # classical complete quadratic sums: |sum| = sqrt(q) exactly for unit a
        gauss_vals = np.abs(e_table[(units[:, None] * sq_all[None, :]) % q].sum(axis=1))
        ratios = gauss_vals / math.sqrt(q)
        worst = int(np.abs(ratios - 1.0).argmax())
        a_g = int(units[worst])
        defect_g = float(np.abs(ratios - 1.0).max())
        cases.append(
            _case(
                "lemma4",
                q,
                None,
                kind="lemma4_gauss",
                params={"a": a_g, "b": 0},
                value=quadratic_expsum(a_g, 0, q, restricted=False),
                defect=defect_g,
                ratio=float(ratios[worst]),
                passed=defect_g <= tolerance(q) / math.sqrt(q),
            )
        )
    return cases, []


def _theorem2_weights(cfg: ExperimentConfig, q: int, trial: int) -> WeightVector:
    rng = SplitMix64(derive_seed(cfg.seed, _TAG_T2_LAM, q, trial))
    units = [a for a in range(q) if math.gcd(a, q) == 1]
    return WeightVector(q, {a: rng.coefficient(cfg.coeff_model) for a in units})


def _theorem2_q(q: int, cfg: ExperimentConfig) -> tuple[list[CaseRecord], list[str]]:
    group = character_group(q)
    chars = enumerate_characters(group)
    prof = _profile(q)
    envelope = q * prof.phi**2 * 2**prof.omega
    cases = []
    for trial in range(cfg.trials):
        rng_chi = SplitMix64(derive_seed(cfg.seed, _TAG_T2_CHI, q, trial))
        chi = chars[rng_chi.randrange(len(chars))]
        weights = _theorem2_weights(cfg, q, trial)
        moment = weighted_second_moment(chi, weights)
        ratio = moment / envelope
        cases.append(
            _case(
                "theorem2",
                q,
                chi,
                kind="theorem2",
                params={"trial": trial},
                value=complex(moment),
                defect=max(0.0, ratio - 10.0),
                ratio=ratio,
                passed=ratio <= 10.0,
            )
        )
    return cases, []


def _coprime_splittings(q: int) -> list[tuple[int, int]]:
    """Proper splittings q = q1*q2, gcd(q1,q2) = 1, 2 <= q1 < q2."""
    pps = factorize(q).prime_powers()
    out = set()
    for mask in range(1, (1 << len(pps)) - 1):
        q1 = math.prod(pp for i, pp in enumerate(pps) if mask >> i & 1)
        q2 = q // q1
        if q1 < q2:
            out.add((q1, q2))
    return sorted(out)


def _vanishing_cases(q: int) -> list[CaseRecord]:
    prof = _profile(q)
    tol = tolerance(prof.phi)
    cases = []
    for chi in enumerate_characters(character_group(q)):
        if parity_flags(chi).is_completely_even:
            continue
        table = complete_lambda_table(chi)
        magnitudes = np.abs(table)
        m, n = divmod(int(magnitudes.argmax()), q)
        value = complete_lambda(chi, m, n)
        cases.append(
            _case(
                "vanishing",
                q,
                chi,
                kind="vanishing",
                params={"m": m, "n": n},
                value=value,
                defect=float(magnitudes.max()),
                ratio=0.0,
                passed=float(magnitudes.max()) <= tol,
            )
        )
    return cases


def _multiplicativity_cases(q1: int, q2: int) -> list[CaseRecord]:
    q = q1 * q2
    prof = _profile(q)
    tol = tolerance(3 * prof.phi)
    m_mod1 = np.arange(q, dtype=np.int64) % q1
    m_mod2 = np.arange(q, dtype=np.int64) % q2
    cases = []
    chars1 = enumerate_characters(character_group(q1))
    chars2 = enumerate_characters(character_group(q2))
    for chi1 in chars1:
        table1 = complete_lambda_table(chi1)
        lifted1 = table1[m_mod1[:, None], m_mod1[None, :]]
        for chi2 in chars2:
            table2 = complete_lambda_table(chi2)
            lifted2 = table2[m_mod2[:, None], m_mod2[None, :]]
            chi = product_character(chi1, chi2)
            table = complete_lambda_table(chi)
            defects = np.abs(table - lifted1 * lifted2)
            m, n = divmod(int(defects.argmax()), q)
            value = complete_lambda(chi, m, n)
            cases.append(
                _case(
                    "multiplicativity",
                    q,
                    chi,
                    kind="multiplicativity",
                    params={
                        "q1": q1,
                        "q2": q2,
                        "chi1_index": chi1.index,
                        "chi2_index": chi2.index,
                        "m": m,
                        "n": n,
                    },
                    value=value,
                    defect=float(defects.max()),
                    ratio=0.0,
                    passed=float(defects.max()) <= tol,
                )
            )
    return cases


def _vanish_mult_q(q: int, parts: tuple[str, ...]) -> tuple[list[CaseRecord], list[str]]:
    cases: list[CaseRecord] = []
    if "vanishing" in parts:
        cases.extend(_vanishing_cases(q))
    if "multiplicativity" in parts:
        for q1, q2 in _coprime_splittings(q):
            cases.extend(_multiplicativity_cases(q1, q2))
    return cases, []


# ---------------------------------------------------------------------------
# public check entry points
# ---------------------------------------------------------------------------

_ALL_PARTS = ("vanishing", "multiplicativity")


def check_theorem1(q: int) -> VerificationReport:
    """Second-moment identity, vanishing at 8 | q, and the envelope bounds."""
    _require_window("theorem1", q)
    cases, notes = _theorem1_q(q)
    return VerificationReport("theorem1", f"q={q}", None, cases, notes)


def check_bound_complete(q: int) -> VerificationReport:
    """Exhaustive max of |complete sum| against sqrt(q) * 2^omega(q)."""
    _require_window("bound4", q)
    cases, notes = _bound4_q(q)
    return VerificationReport("bound4", f"q={q}", None, cases, notes)


def check_lemma1(q: int) -> VerificationReport:
    """Gauss-sum modulus, twist, and conjugation identities for primitive chi."""
    _require_window("lemma1", q)
    cases, notes = _lemma1_q(q)
    return VerificationReport("lemma1", f"q={q}", None, cases, notes)


def check_incomplete_bound(cfg: ExperimentConfig) -> VerificationReport:
    """Observed |incomplete sum| / q^(1/2+eps) over all intervals (report only)."""
    return _sweep("bound5", cfg)


def check_lemma3_and_pair_sum(
    q: int, parts: tuple[str, ...] = ("lemma3", "pairsum")
) -> VerificationReport:
    """Unit averages against their divisor-product closed form, and the
    constrained pair sum against its vanishing rule, all shifts exhaustively."""
    _require_window("lemma3", q)
    cases, notes = _lemma3_q(q, parts)
    name = parts[0] if len(parts) == 1 else "lemma3"
    return VerificationReport(name, f"q={q}", None, cases, notes)


def check_lemma4(cfg: ExperimentConfig) -> VerificationReport:
    """Quadratic exponential sums against the Korobov-type envelopes."""
    return _sweep("lemma4", cfg)


def check_theorem2(cfg: ExperimentConfig) -> VerificationReport:
    """Weighted second moment under seeded bounded coefficients."""
    return _sweep("theorem2", cfg)


def check_vanishing_and_multiplicativity(
    q1: int, q2: int, parts: tuple[str, ...] = _ALL_PARTS
) -> VerificationReport:
    """Vanishing off completely even characters; component factorization."""
    if math.gcd(q1, q2) != 1:
        raise UsageError(f"moduli {q1} and {q2} are not coprime")
    q = q1 * q2
    _require_window("vanishing", q)
    cases: list[CaseRecord] = []
    if "vanishing" in parts:
        cases.extend(_vanishing_cases(q))
    if "multiplicativity" in parts and q1 > 1:
        lo, hi = sorted((q1, q2))
        cases.extend(_multiplicativity_cases(lo, hi))
    name = parts[0] if len(parts) == 1 else "vanishing"
    return VerificationReport(name, f"q={q1}*{q2}", None, cases, [])


def bilinear_experiment(
    cfg: ExperimentConfig,
    q: int | None = None,
    a_scale: int | None = None,
    m_scale: int | None = None,
    n_scale: int | None = None,
) -> VerificationReport:
    """Seeded bilinear instances: naive/optimized agreement plus envelope ratios.

    When q or the scales are not pinned they are drawn per trial: q uniform
    over the primes in the configured range, scales uniform over {4, 8, 16}
    (one draw applied to all unpinned scales).
    """
    primes = [
        p
        for p in range(max(cfg.q_lo, 3), cfg.q_hi + 1)
        if factorize(p).factors == ((p, 1),)
    ]
    if q is None and not primes:
        raise UsageError(f"no primes in q-range {cfg.q_lo}..{cfg.q_hi}")
    cases = []
    notes: list[str] = []
    for trial in range(cfg.trials):
        qq = q
        if qq is None:
            rng_q = SplitMix64(derive_seed(cfg.seed, _TAG_BIL_Q, trial))
            qq = primes[rng_q.randrange(len(primes))]
        if a_scale is None or m_scale is None or n_scale is None:
            rng_s = SplitMix64(derive_seed(cfg.seed, _TAG_BIL_SIZE, trial))
            drawn = (4, 8, 16)[rng_s.randrange(3)]
        a_sc = a_scale if a_scale is not None else drawn
        m_sc = m_scale if m_scale is not None else drawn
        n_sc = n_scale if n_scale is not None else drawn
        chars = enumerate_characters(character_group(qq))
        primitive = [c for c in chars if is_primitive(c)]
        if not primitive:
            notes.append(f"trial {trial}: no primitive character mod {qq}, skipped")
            continue
        rng_chi = SplitMix64(derive_seed(cfg.seed, _TAG_BIL_CHI, trial))
        chi = primitive[rng_chi.randrange(len(primitive))]
        inst = _bilinear_instance(cfg, trial, a_sc, m_sc, n_sc)
        optimized = bilinear_form(chi, inst, "optimized")
        naive = bilinear_form(chi, inst, "naive")
        defect = abs(optimized - naive)
        tol = tolerance(inst.term_count)
        norms = inst.alpha_norm * inst.beta_norm
        prof = _profile(qq)
        poly = qq**0.75 * prof.tau**2.5 * math.log(qq) ** 2
        env3 = norms * math.sqrt(n_sc) * poly
        env6 = norms * math.sqrt(m_sc * n_sc * qq) * qq**cfg.epsilon
        env_sym = norms * math.sqrt(min(m_sc, n_sc)) * poly
        magnitude = abs(optimized)
        hypothesis_ok = factorize(qq).smallest_prime >= math.log(n_sc) ** cfg.gamma
        cases.append(
            _case(
                "bilinear",
                qq,
                chi,
                kind="bilinear",
                params={
                    "trial": trial,
                    "a_scale": a_sc,
                    "m_scale": m_sc,
                    "n_scale": n_sc,
                    "ratio_eq6": magnitude / env6 if env6 > 0 else 0.0,
                    "ratio_sym": magnitude / env_sym if env_sym > 0 else 0.0,
                    "hypothesis_ok": hypothesis_ok,
                },
                value=optimized,
                defect=defect,
                ratio=magnitude / env3 if env3 > 0 else 0.0,
                passed=defect <= tol,
            )
        )
    descriptor = f"{cfg.trials} instances, q-range {cfg.q_lo}..{cfg.q_hi}"
    return VerificationReport("bilinear", descriptor, cfg, cases, notes)


def _bilinear_instance(
    cfg: ExperimentConfig, trial: int, a_scale: int, m_scale: int, n_scale: int
) -> BilinearInstance:
    rng = SplitMix64(derive_seed(cfg.seed, _TAG_BIL_COEFF, trial))
    alpha = tuple(rng.coefficient(cfg.coeff_model) for _ in range(m_scale))
    beta = tuple(rng.coefficient(cfg.coeff_model) for _ in range(n_scale))
    return BilinearInstance(a_scale, m_scale, n_scale, alpha, beta)


# ---------------------------------------------------------------------------
# sweep driver
# ---------------------------------------------------------------------------

_WINDOWS = {
    "theorem1": (3, 200),
    "bound4": (3, 150),
    "bound5": (3, 100),
    "lemma1": (1, 150),
    "lemma3": (1, 60),
    "pairsum": (1, 60),
    "lemma4": (1, 300),
    "theorem2": (3, 100),
    "vanishing": (1, 100),
    "multiplicativity": (1, 100),
}

ALL_CHECKS = (
    "theorem1",
    "bound4",
    "bound5",
    "lemma1",
    "lemma3",
    "pairsum",
    "lemma4",
    "theorem2",
    "vanishing",
    "multiplicativity",
)


def _require_window(name: str, q: int) -> None:
    lo, hi = _WINDOWS[name]
    if not lo <= q <= hi:
        raise UsageError(f"check {name} accepts {lo} <= q <= {hi}, got {q}")


def thread_count() -> int:
    """Worker count from CHARSUM_THREADS (0 or unset = automatic)."""
    raw = os.environ.get("CHARSUM_THREADS", "0")
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError(f"CHARSUM_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise UsageError(f"CHARSUM_THREADS must be >= 0, got {n}")
    if n == 0:
        n = min(os.cpu_count() or 1, 8)
    return max(n, 1)


def _map_over_q(worker, qs: list[int]) -> tuple[list[CaseRecord], list[str]]:
    workers = thread_count()
    if workers == 1 or len(qs) <= 1:
        results = {q: worker(q) for q in qs}
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {q: pool.submit(worker, q) for q in qs}
        results = {q: f.result() for q, f in futures.items()}
    cases: list[CaseRecord] = []
    notes: list[str] = []
    for q in sorted(results):
        qcases, qnotes = results[q]
        cases.extend(qcases)
        notes.extend(qnotes)
    return cases, notes


def _sweep(name: str, cfg: ExperimentConfig) -> VerificationReport:
    lo, hi = _WINDOWS[name]
    lo2, hi2 = max(cfg.q_lo, lo), min(cfg.q_hi, hi)
    if lo2 > hi2:
        raise UsageError(
            f"check {name}: q-range {cfg.q_lo}..{cfg.q_hi} is empty after clamping to {lo}..{hi}"
        )
    notes = []
    if (lo2, hi2) != (cfg.q_lo, cfg.q_hi):
        notes.append(f"q-range clamped to {lo2}..{hi2}")

    def worker(q: int):
        if name == "theorem1":
            return _theorem1_q(q)
        if name == "bound4":
            return _bound4_q(q)
        if name == "bound5":
            return _bound5_q(q, cfg)
        if name == "lemma1":
            return _lemma1_q(q)
        if name == "lemma3":
            return _lemma3_q(q, ("lemma3",))
        if name == "pairsum":
            return _lemma3_q(q, ("pairsum",))
        if name == "lemma4":
            return _lemma4_q(q, cfg)
        if name == "theorem2":
            return _theorem2_q(q, cfg)
        if name == "vanishing":
            return _vanish_mult_q(q, ("vanishing",))
        if name == "multiplicativity":
            return _vanish_mult_q(q, ("multiplicativity",))
        raise UsageError(f"unknown check {name!r}")

    cases, worker_notes = _map_over_q(worker, list(range(lo2, hi2 + 1)))
    return VerificationReport(
        name, f"q-range {lo2}..{hi2}", cfg, cases, notes + worker_notes
    )


def run_check(name: str, cfg: ExperimentConfig) -> VerificationReport:
    """One named check swept over the configured q-range."""
    if name not in ALL_CHECKS:
        raise UsageError(f"unknown check {name!r}; choose from {', '.join(ALL_CHECKS)}")
    return _sweep(name, cfg)


def run_all(cfg: ExperimentConfig) -> list[VerificationReport]:
    """Every check in canonical order under one configuration."""
    return [run_check(name, cfg) for name in ALL_CHECKS]


# ---------------------------------------------------------------------------
# witness replay
# ---------------------------------------------------------------------------


def replay_case(case: CaseRecord, config: ExperimentConfig | None = None) -> complex:
    """Recompute the value of a recorded case from its parameters."""
    p = case.params
    kind = case.kind
    if kind in ("bound4", "vanishing", "multiplicativity"):
        chi = parse_character_label(case.chi_label)
        return complete_lambda(chi, p["m"], p["n"])
    if kind == "theorem1":
        chi = parse_character_label(case.chi_label)
        return complex(second_moment(chi))
    if kind == "bound5":
        chi = parse_character_label(case.chi_label)
        return incomplete_lambda(chi, p["m"], p["n"], IntervalSpec(p["start"], p["length"]))
    if kind == "gauss_modulus" or kind == "gauss_conj":
        chi = parse_character_label(case.chi_label)
        return gauss_sum(chi, 1)
    if kind == "gauss_twist":
        chi = parse_character_label(case.chi_label)
        return gauss_sum(chi, p["n"])
    if kind == "lemma3":
        chi = parse_character_label(case.chi_label)
        return orthogonality_average(chi, p["c"], p["b"])
    if kind == "pairsum":
        chi = parse_character_label(case.chi_label)
        return character_pair_sum(chi, p["y"], p["ell"])
    if kind.startswith("lemma4"):
        return quadratic_expsum(p["a"], p["b"], case.q, restricted=kind == "lemma4_restricted")
    if kind == "theorem2":
        if config is None:
            raise ValueError("theorem2 replay needs the experiment config")
        chi = parse_character_label(case.chi_label)
        weights = _theorem2_weights(config, case.q, p["trial"])
        return complex(weighted_second_moment(chi, weights))
    if kind == "bilinear":
        if config is None:
            raise ValueError("bilinear replay needs the experiment config")
        chi = parse_character_label(case.chi_label)
        inst = _bilinear_instance(
            config, p["trial"], p["a_scale"], p["m_scale"], p["n_scale"]
        )
        return bilinear_form(chi, inst, "optimized")
    raise ValueError(f"unknown case kind {kind!r}")
