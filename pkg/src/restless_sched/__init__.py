"""Belief-state scheduling of restless projects under noisy observation.

The package certifies, numerically, when the greedy (myopic) rule that
always works the likelihood-ratio-best project is exactly optimal for
a finite-horizon discounted objective: two verifiable assumption
regimes, an exact DP oracle, sensitivity bounds on the auxiliary value
function, an instance generator, and a Monte Carlo cross-check.
"""

__version__ = "0.1.0"

from .assumptions import (
    AssumptionReport,
    ClauseResult,
    find_threshold_K,
    verify_assumption1,
    verify_assumption2,
)
from .bounds import BoundSample, check_bounds_suite, lemma2_bounds, lemma4_bounds
from .dp import ValueReport, certify_myopic, optimal_value
from .exceptions import (
    CannotViolateError,
    ComplexSpectrumError,
    DimensionMismatchError,
    GenerationExhaustedError,
    ImpossibleObservationError,
    IncomparablePairError,
    InvalidBeliefError,
    NodeBudgetExceededError,
    NonDiagonalizableError,
    RestlessSchedError,
)
from .filtering import BeliefProfile, filter_update, obs_likelihood, propagate, step_profile
from .generate import (
    GeneratorParams,
    gen_assumption1_instance,
    gen_assumption2_instance,
    perturb_violate,
)
from .orders import (
    OrderVerdict,
    Relation,
    fosd_compare,
    mlr_compare,
    obs_columns_mlr_ordered,
    rows_mlr_ordered,
    sort_by_mlr,
)
from .policy import (
    PolicyRule,
    avf_evaluate,
    avf_frozen,
    myopic_action,
    myopic_policy,
    policy_value,
    round_robin_policy,
    seeded_random_policy,
    stay_policy,
)
from .simulate import Trajectory, estimate_value, sample_trajectory
from .spectral import (
    DiscountMatrices,
    SpectralDecomposition,
    discount_matrices,
    eigendecompose,
    reward_separation_check,
    series_difference_oracle,
)
from .types import (
    BeliefVector,
    ModelInstance,
    ObservationMatrix,
    RewardVector,
    TransitionMatrix,
    ValidationReport,
    basis_belief,
    expected_reward,
    validate_instance,
)

__all__ = [
    "AssumptionReport",
    "BeliefProfile",
    "BeliefVector",
    "BoundSample",
    "CannotViolateError",
    "ClauseResult",
    "ComplexSpectrumError",
    "DimensionMismatchError",
    "DiscountMatrices",
    "GenerationExhaustedError",
    "GeneratorParams",
    "ImpossibleObservationError",
    "IncomparablePairError",
    "InvalidBeliefError",
    "ModelInstance",
    "NodeBudgetExceededError",
    "NonDiagonalizableError",
    "ObservationMatrix",
    "OrderVerdict",
    "PolicyRule",
    "Relation",
    "RestlessSchedError",
    "RewardVector",
    "SpectralDecomposition",
    "Trajectory",
    "TransitionMatrix",
    "ValidationReport",
    "ValueReport",
    "avf_evaluate",
    "avf_frozen",
    "basis_belief",
    "certify_myopic",
    "check_bounds_suite",
    "discount_matrices",
    "eigendecompose",
    "estimate_value",
    "expected_reward",
    "filter_update",
    "find_threshold_K",
    "fosd_compare",
    "gen_assumption1_instance",
    "gen_assumption2_instance",
    "lemma2_bounds",
    "lemma4_bounds",
    "mlr_compare",
    "myopic_action",
    "myopic_policy",
    "obs_columns_mlr_ordered",
    "obs_likelihood",
    "optimal_value",
    "perturb_violate",
    "policy_value",
    "propagate",
    "reward_separation_check",
    "rows_mlr_ordered",
    "round_robin_policy",
    "sample_trajectory",
    "seeded_random_policy",
    "series_difference_oracle",
    "sort_by_mlr",
    "stay_policy",
    "step_profile",
    "validate_instance",
    "verify_assumption1",
    "verify_assumption2",
]
