"""Asymptotic and exact enumeration of r-uniform hypergraphs by degree sequence.

The package fits the maximum-entropy edge-weight model to a degree
sequence, evaluates closed asymptotic counting formulas, validates them
against exact small-instance oracles, and compares the three
degree-sequence probability models of random uniform hypergraphs.
"""

from .core import (
    DegreeSequence,
    DerivedParams,
    QuadrantTransform,
    apply_symmetry,
    canonicalize_first_quadrant,
    derive,
    validate,
)
from .counts import (
    LogEstimate,
    estimate_corollary,
    estimate_general,
    estimate_near_regular,
    symmetry_audit,
)
from .fields import (
    BetaVector,
    FieldSummary,
    entropy_sum,
    field_summary,
    lambda_of_subset,
    log_prefactor,
)
from .matrices import (
    WeightMatrix,
    assemble_weight_matrix,
    bound_suite,
    logdet_pd,
    regular_closed_form,
)
from .models import (
    HypergeomSpec,
    ModelPoint,
    conditioned_sum_log_prob,
    hypergeom_pmf,
    measured_ratio,
    predicted_ratio,
    prob_model,
    sample_degrees,
    stirling_log_binom,
)
from .oracle import ExactCount, cauchy_quadrature, exact_count, total_identity_check
from .solver import SolveReport, initial_beta, solve, uniqueness_diagnostic

__version__ = "0.1.0"

__all__ = [
    "BetaVector",
    "DegreeSequence",
    "DerivedParams",
    "ExactCount",
    "FieldSummary",
    "HypergeomSpec",
    "LogEstimate",
    "ModelPoint",
    "QuadrantTransform",
    "SolveReport",
    "WeightMatrix",
    "apply_symmetry",
    "assemble_weight_matrix",
    "bound_suite",
    "canonicalize_first_quadrant",
    "cauchy_quadrature",
    "conditioned_sum_log_prob",
    "derive",
    "entropy_sum",
    "estimate_corollary",
    "estimate_general",
    "estimate_near_regular",
    "exact_count",
    "field_summary",
    "hypergeom_pmf",
    "initial_beta",
    "lambda_of_subset",
    "log_prefactor",
    "logdet_pd",
    "measured_ratio",
    "predicted_ratio",
    "prob_model",
    "regular_closed_form",
    "sample_degrees",
    "solve",
    "stirling_log_binom",
    "symmetry_audit",
    "total_identity_check",
    "uniqueness_diagnostic",
    "validate",
]
