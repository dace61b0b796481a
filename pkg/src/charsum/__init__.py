"""Exact Dirichlet characters and Kloosterman-type character sums.

The package computes complete and incomplete sums of chi(m*a + n*abar) over
units a mod q, their second moments, Gauss sums, quadratic exponential sums,
and bilinear forms, and ships a deterministic verification harness for the
identities and envelope bounds these objects satisfy.
"""

from charsum.arith import (
    Factorization,
    MultiplicativeProfile,
    NotInvertibleError,
    divisors,
    euler_phi,
    factorize,
    mod_inverse,
    multiplicative_profile,
    square_roots_of_unity,
    unit_group_structure,
)
from charsum.character import (
    CharacterGroup,
    CharacterValue,
    DirichletCharacter,
    RootOfUnity,
    character_group,
    character_label,
    conductor,
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
    CapacityError,
    IntervalSpec,
    WeightVector,
    bilinear_form,
    character_pair_sum,
    complete_lambda,
    complete_lambda_table,
    congruence_pair_count,
    gauss_sum,
    incomplete_lambda,
    orthogonality_average,
    quadratic_expsum,
    second_moment,
    tolerance,
    unit_root_char_sum,
    weighted_second_moment,
)
from charsum.verify import (
    CaseRecord,
    ExperimentConfig,
    UsageError,
    VerificationReport,
    bilinear_experiment,
    check_bound_complete,
    check_incomplete_bound,
    check_lemma1,
    check_lemma3_and_pair_sum,
    check_lemma4,
    check_theorem1,
    check_theorem2,
    check_vanishing_and_multiplicativity,
    replay_case,
    run_all,
    run_check,
    unit_average_coefficient,
)

__version__ = "0.1.0"

__all__ = [
    "BilinearInstance",
    "CapacityError",
    "CaseRecord",
    "CharacterGroup",
    "CharacterValue",
    "DirichletCharacter",
    "ExperimentConfig",
    "Factorization",
    "IntervalSpec",
    "MultiplicativeProfile",
    "NotInvertibleError",
    "RootOfUnity",
    "SplitMix64",
    "UsageError",
    "VerificationReport",
    "WeightVector",
    "bilinear_experiment",
    "bilinear_form",
    "character_group",
    "character_label",
    "character_pair_sum",
    "check_bound_complete",
    "check_incomplete_bound",
    "check_lemma1",
    "check_lemma3_and_pair_sum",
    "check_lemma4",
    "check_theorem1",
    "check_theorem2",
    "check_vanishing_and_multiplicativity",
    "complete_lambda",
    "complete_lambda_table",
    "conductor",
    "congruence_pair_count",
    "derive_seed",
    "divisors",
    "enumerate_characters",
    "euler_phi",
    "evaluate",
    "factorize",
    "gauss_sum",
    "incomplete_lambda",
    "is_primitive",
    "mod_inverse",
    "multiplicative_profile",
    "orthogonality_average",
    "parity_flags",
    "parse_character_label",
    "product_character",
    "quadratic_expsum",
    "replay_case",
    "run_all",
    "run_check",
    "second_moment",
    "square_roots_of_unity",
    "tolerance",
    "unit_average_coefficient",
    "unit_group_structure",
    "unit_root_char_sum",
    "weighted_second_moment",
]
