"""Character-sum evaluation: complete and incomplete Kloosterman-type sums
chi(m*a + n*abar), Gauss sums, quadratic exponential sums, second moments,
and bilinear forms over dyadic ranges.

All accumulation happens in double precision from exact root-of-unity
terms.  Wherever two evaluation strategies exist (second moments, bilinear
forms) both are exposed and must agree to `tolerance`; the fast paths rely
on the substitution a -> m^{-1} a, which turns chi(m*a + n*abar) into
chi(b + (m*n)*bbar), so row m of the complete-sum table is row 1 permuted.

Dyadic ranges follow the convention x ~ X meaning X < x <= 2X.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from charsum.arith import discrete_log_table, mod_inverse, square_roots_of_unity
from charsum.character import (
    DirichletCharacter,
    RootOfUnity,
    character_group,
    evaluate,
    is_primitive,
)

NAIVE_SECOND_MOMENT_LIMIT = 400
BILINEAR_TERM_LIMIT = 10**8


class CapacityError(RuntimeError):
    """The requested computation exceeds the documented desk-scale caps."""


def tolerance(terms: int | float, bound: float = 1.0) -> float:
    """Absolute error budget for a sum of `terms` terms of modulus <= bound."""
    return 2.0**-40 * terms * bound


@dataclass(frozen=True)
class IntervalSpec:
    """The residues start, start+1, ..., start+length-1 taken mod q."""

    start: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError(f"interval length must be >= 0, got {self.length}")


class WeightVector:
    """Coefficients lambda_a on the reduced residues mod q.

    Missing units carry weight 0; keys off the units are rejected.  `bound`
    is the sup of |lambda_a|, used in envelope reports.
    """

    def __init__(self, q: int, values: dict[int, complex]):
        if q < 1:
            raise ValueError(f"modulus must be positive, got {q}")
        self.q = q
        self.values: dict[int, complex] = {}
        for a, v in values.items():
            a %= q
            if math.gcd(a, q) != 1:
                raise ValueError(f"weight attached to non-unit {a} mod {q}")
            self.values[a] = complex(v)
        self.bound = max((abs(v) for v in self.values.values()), default=0.0)

    @classmethod
    def constant(cls, q: int, value: complex = 1.0) -> "WeightVector":
        units = [a for a in range(q) if math.gcd(a, q) == 1]
        return cls(q, {a: value for a in units})

    def as_array(self) -> np.ndarray:
        arr = np.zeros(self.q, dtype=np.complex128)
        for a, v in self.values.items():
            arr[a] = v
        return arr


@dataclass(frozen=True)
class BilinearInstance:
    """One bilinear-form instance: coefficient vectors over dyadic ranges.

    alpha is indexed by m in (m_scale, 2*m_scale], beta by n in
    (n_scale, 2*n_scale]; the inner variable a runs over the units in
    (a_scale, 2*a_scale].
    """

    a_scale: int
    m_scale: int
    n_scale: int
    alpha: tuple[complex, ...]
    beta: tuple[complex, ...]

    def __post_init__(self):
        for name, scale in (("a", self.a_scale), ("m", self.m_scale), ("n", self.n_scale)):
            if scale < 1:
                raise ValueError(f"{name}_scale must be >= 1, got {scale}")
        if len(self.alpha) != self.m_scale:
            raise ValueError("alpha must have one entry per m in (M, 2M]")
        if len(self.beta) != self.n_scale:
            raise ValueError("beta must have one entry per n in (N, 2N]")

    @property
    def term_count(self) -> int:
        return self.a_scale * self.m_scale * self.n_scale

    @property
    def alpha_norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.alpha))

    @property
    def beta_norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.beta))


# ---------------------------------------------------------------------------
# per-modulus and per-character tables
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _modulus_tables(q: int):
    """(units, inverse table, unit mask, e(t/q) table) for one modulus."""
    unit_mask = np.array([math.gcd(a, q) == 1 for a in range(q)])
    units = np.nonzero(unit_mask)[0].astype(np.int64)
    inv = np.zeros(q, dtype=np.int64)
    if q > 1:
        for a in units:
            inv[a] = pow(int(a), -1, q)
    e = np.array([RootOfUnity(t, q).to_complex() for t in range(q)], dtype=np.complex128)
    return units, inv, unit_mask, e


@lru_cache(maxsize=None)
def _roots_for_denominator(d: int) -> np.ndarray:
    return np.array([RootOfUnity(t, d).to_complex() for t in range(d)], dtype=np.complex128)


@lru_cache(maxsize=None)
def _dlog_arrays(q: int):
    """Per cyclic factor: discrete logs of every residue class mod q."""
    group = character_group(q)
    _, _, unit_mask, _ = _modulus_tables(q)
    a = np.arange(q, dtype=np.int64)
    columns: list[tuple[int, np.ndarray]] = []
    for struct in group.structures:
        table = discrete_log_table(struct)
        local = a % struct.modulus
        for j, order in enumerate(struct.factor_orders):
            tj = np.array(
                [table[r][j] if table[r] is not None else 0 for r in range(struct.modulus)],
                dtype=np.int64,
            )
            columns.append((order, tj[local]))
    return unit_mask, columns


@lru_cache(maxsize=None)
def character_value_table(chi: DirichletCharacter) -> np.ndarray:
    """chi(a) for a in [0, q) as a complex array (0 off the units)."""
    q = chi.group.modulus
    unit_mask, columns = _dlog_arrays(q)
    D = chi.group.exponent_lcm
    num = np.zeros(q, dtype=np.int64)
    flat = [k for comp in chi.exponents for k in comp]
    for k, (order, tj) in zip(flat, columns):
        num += k * tj * (D // order)
    num %= D
    table = _roots_for_denominator(D)[num]
    table[~unit_mask] = 0
    return table


@lru_cache(maxsize=None)
def character_exponent_table(chi: DirichletCharacter) -> tuple[np.ndarray, int]:
    """(numerators, D): chi(a) = e(num[a]/D) on units, num = -1 elsewhere."""
    q = chi.group.modulus
    unit_mask, columns = _dlog_arrays(q)
    D = chi.group.exponent_lcm
    num = np.zeros(q, dtype=np.int64)
    flat = [k for comp in chi.exponents for k in comp]
    for k, (order, tj) in zip(flat, columns):
        num += k * tj * (D // order)
    num %= D
    num[~unit_mask] = -1
    return num, D


# ---------------------------------------------------------------------------
# complete and incomplete sums
# ---------------------------------------------------------------------------


def complete_lambda(chi: DirichletCharacter, m: int, n: int) -> complex:
    """Sum of chi(m*a + n*abar) over all units a mod q."""
    q = chi.group.modulus
    units, inv, _, _ = _modulus_tables(q)
    tab = character_value_table(chi)
    r = (m % q * units + n % q * inv[units]) % q
    return complex(tab[r].sum())


def complete_lambda_row(chi: DirichletCharacter) -> np.ndarray:
    """The values of the complete sum at (1, t) for every t in [0, q)."""
    q = chi.group.modulus
    units, inv, _, _ = _modulus_tables(q)
    tab = character_value_table(chi)
    t = np.arange(q, dtype=np.int64)
    r = (units[None, :] + t[:, None] * inv[units][None, :]) % q
    return tab[r].sum(axis=1)


def complete_lambda_table(chi: DirichletCharacter) -> np.ndarray:
    """The full q x q table of complete sums at (m, n).

    Rows with gcd(m, q) = 1 are row 1 permuted by n -> m*n (the
    substitution a -> m^{-1} a); the remaining rows are summed directly.
    """
    q = chi.group.modulus
    units, inv, unit_mask, _ = _modulus_tables(q)
    tab = character_value_table(chi)
    t = np.arange(q, dtype=np.int64)
    row1 = complete_lambda_row(chi)
    table = np.empty((q, q), dtype=np.complex128)
    table[units] = row1[(units[:, None] * t[None, :]) % q]
    ubar = inv[units]
    for m in np.nonzero(~unit_mask)[0]:
        r = (int(m) * units[None, :] + t[:, None] * ubar[None, :]) % q
        table[m] = tab[r].sum(axis=1)
    return table


def incomplete_lambda(
    chi: DirichletCharacter, m: int, n: int, interval: IntervalSpec
) -> complex:
    """Sum of chi(m*a + n*abar) over units a in the given interval."""
    q = chi.group.modulus
    if interval.length > q:
        raise ValueError(f"interval length {interval.length} exceeds the modulus {q}")
    if interval.length == 0:
        return 0j
    units, inv, unit_mask, _ = _modulus_tables(q)
    tab = character_value_table(chi)
    idx = (interval.start + np.arange(interval.length, dtype=np.int64)) % q
    r = (m % q * idx + n % q * inv[idx]) % q
    return complex((tab[r] * unit_mask[idx]).sum())


def gauss_sum(chi: DirichletCharacter, n: int) -> complex:
    """Sum of chi(a) e(n*a/q) over a mod q."""
    q = chi.group.modulus
    _, _, _, e = _modulus_tables(q)
    tab = character_value_table(chi)
    t = np.arange(q, dtype=np.int64)
    return complex((tab * e[(n % q) * t % q]).sum())


@lru_cache(maxsize=4)
def _e_outer(q: int) -> np.ndarray:
    _, _, _, e = _modulus_tables(q)
    t = np.arange(q, dtype=np.int64)
    return e[(t[:, None] * t[None, :]) % q]


def gauss_sum_all(chi: DirichletCharacter) -> np.ndarray:
    """Gauss sums at every twist n in [0, q), as one matrix product."""
    tab = character_value_table(chi)
    return tab @ _e_outer(chi.group.modulus)


def unit_root_char_sum(chi: DirichletCharacter) -> int:
    """Sum of chi(y) over the square roots of unity mod q.

    Each chi(y) is +-1 exactly (y^2 = 1 forces chi(y)^2 = 1), so the result
    is an exact integer.
    """
    q = chi.group.modulus
    total = 0
    for y in square_roots_of_unity(q):
        value = evaluate(chi, y)
        if value.is_zero:  # only q = 1, where y = 0 is the lone residue
            continue
        root = value.root
        if root.den == 1:
            total += 1
        elif root.den == 2:
            total -= 1
        else:
            raise RuntimeError(f"chi(y) is not +-1 at y = {y} mod {q}")
    return total


# ---------------------------------------------------------------------------
# second moments
# ---------------------------------------------------------------------------


def second_moment(chi: DirichletCharacter, strategy: str = "auto") -> float:
    """Sum over all (m, n) mod q of |complete_lambda(chi, m, n)|^2.

    strategy "naive" sums every (m, n) pair directly (capped at q <= 400);
    "reduced" uses the row-permutation structure for the unit rows and only
    sums the gcd(m, q) > 1 rows directly.  "auto" picks "reduced".
    """
    q = chi.group.modulus
    if strategy == "auto":
        strategy = "reduced"
    units, inv, unit_mask, _ = _modulus_tables(q)
    tab = character_value_table(chi)
    t = np.arange(q, dtype=np.int64)
    ubar = inv[units]
    if strategy == "naive":
        if q > NAIVE_SECOND_MOMENT_LIMIT:
            raise CapacityError(
                f"naive second moment is capped at q <= {NAIVE_SECOND_MOMENT_LIMIT}, got {q}"
            )
        total = 0.0
        for m in range(q):
            r = (m * units[None, :] + t[:, None] * ubar[None, :]) % q
            rows = tab[r].sum(axis=1)
            total += float((rows.real**2 + rows.imag**2).sum())
        return total
    if strategy != "reduced":
        raise ValueError(f"unknown second-moment strategy {strategy!r}")
    row1 = complete_lambda_row(chi)
    total = len(units) * float((row1.real**2 + row1.imag**2).sum())
    for m in np.nonzero(~unit_mask)[0]:
        r = (int(m) * units[None, :] + t[:, None] * ubar[None, :]) % q
        rows = tab[r].sum(axis=1)
        total += float((rows.real**2 + rows.imag**2).sum())
    return total


def weighted_second_moment(chi: DirichletCharacter, weights: WeightVector) -> float:
    """Second moment of the lambda_a-weighted complete sums over (m, n)."""
    q = chi.group.modulus
    if weights.q != q:
        raise ValueError(f"weights live mod {weights.q}, character mod {q}")
    units, inv, _, _ = _modulus_tables(q)
    tab = character_value_table(chi)
    lam = weights.as_array()[units]
    t = np.arange(q, dtype=np.int64)
    ubar = inv[units]
    total = 0.0
    for m in range(q):
        r = (m * units[None, :] + t[:, None] * ubar[None, :]) % q
        rows = (tab[r] * lam[None, :]).sum(axis=1)
        total += float((rows.real**2 + rows.imag**2).sum())
    return total


# ---------------------------------------------------------------------------
# auxiliary sums
# ---------------------------------------------------------------------------


def quadratic_expsum(a: int, b: int, q: int, restricted: bool = False) -> complex:
    """Sum of e((a*x^2 + b*x)/q) over x mod q, or over units when restricted."""
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    units, _, _, e = _modulus_tables(q)
    x = units if restricted else np.arange(q, dtype=np.int64)
    r = (a % q * (x * x % q) + b % q * x) % q
    return complex(e[r].sum())


def orthogonality_average(chi: DirichletCharacter, c: int, b: int) -> complex:
    """(1/phi) * sum of chi(c*a + b) over units a mod q.

    The closed form (chi(b) when q | c, else 0) holds for primitive chi;
    the raw average is still computed otherwise, with a warning.
    """
    if not is_primitive(chi):
        warnings.warn(
            "orthogonality_average called with a non-primitive character; "
            "the closed form does not apply",
            stacklevel=2,
        )
    q = chi.group.modulus
    units, _, _, _ = _modulus_tables(q)
    tab = character_value_table(chi)
    r = (c % q * units + b % q) % q
    return complex(tab[r].sum() / len(units))


def character_pair_sum(chi: DirichletCharacter, y: int, ell: int) -> complex:
    """Sum of chi(c) conj(chi(d)) over unit pairs with c = d*y (mod ell)."""
    q = chi.group.modulus
    if ell < 1 or q % ell != 0:
        raise ValueError(f"{ell} does not divide the modulus {q}")
    units, _, _, _ = _modulus_tables(q)
    tab = character_value_table(chi)
    buckets = np.zeros(ell, dtype=np.complex128)
    np.add.at(buckets, units % ell, tab[units])
    return complex((np.conj(tab[units]) * buckets[(units * (y % ell)) % ell]).sum())


def congruence_pair_count(a: int, b: int, c: int, d: int, q: int) -> int:
    """Number of (x, y) mod q with a*x + abar*y = c and b*x + bbar*y = d.

    Solvable iff gcd(a^2 - b^2, q) divides a*d - b*c, and then the count is
    exactly that gcd.
    """
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    if math.gcd(a * b, q) != 1:
        raise ValueError(f"a = {a} and b = {b} must both be units mod {q}")
    g = math.gcd(a * a - b * b, q)
    return g if (a * d - b * c) % g == 0 else 0


# ---------------------------------------------------------------------------
# bilinear forms
# ---------------------------------------------------------------------------


def _dyadic_values(scale: int) -> range:
    return range(scale + 1, 2 * scale + 1)


def bilinear_form(
    chi: DirichletCharacter, inst: BilinearInstance, strategy: str = "optimized"
) -> complex:
    """Sum of alpha_m beta_n chi(m*a + n*abar) over the dyadic box.

    strategy "naive" is the reference triple loop over exact character
    values; "optimized" precomputes a chi(m*a + n*abar) grid per a.
    """
    q = chi.group.modulus
    if inst.term_count > BILINEAR_TERM_LIMIT:
        raise CapacityError(
            f"bilinear form has {inst.term_count} terms, cap is {BILINEAR_TERM_LIMIT}"
        )
    a_vals = _dyadic_values(inst.a_scale)
    m_vals = _dyadic_values(inst.m_scale)
    n_vals = _dyadic_values(inst.n_scale)
    if strategy == "naive":
        total = 0j
        for a in a_vals:
            if math.gcd(a, q) != 1:
                continue
            abar = mod_inverse(a, q)
            for alpha_m, m in zip(inst.alpha, m_vals):
                for beta_n, n in zip(inst.beta, n_vals):
                    total += alpha_m * beta_n * evaluate(chi, m * a + n * abar).to_complex()
        return total
    if strategy != "optimized":
        raise ValueError(f"unknown bilinear strategy {strategy!r}")
    tab = character_value_table(chi)
    alpha = np.asarray(inst.alpha, dtype=np.complex128)
    beta = np.asarray(inst.beta, dtype=np.complex128)
    marr = np.fromiter(m_vals, dtype=np.int64)
    narr = np.fromiter(n_vals, dtype=np.int64)
    total = 0j
    for a in a_vals:
        if math.gcd(a, q) != 1:
            continue
        abar = mod_inverse(a, q)
        r = (marr[:, None] * (a % q) + narr[None, :] * abar) % q
        total += complex(alpha @ tab[r] @ beta)
    return total
