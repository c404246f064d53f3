from symred.releq.models import (
    EquilibriumResult,
    EquilibriumSearch,
    LeafExtremumResult,
    NonConvergenceError,
    NotAnEquilibriumError,
    ReducedField,
    ResultFlag,
    Stability,
    StabilityVerdict,
)
from symred.releq.service import (
    classify_equilibria,
    find_reduced_stationary,
    find_relative_equilibria,
    formal_stability,
    leaf_extremum_check,
    reduced_field,
    reduced_hamiltonian_for,
)
from symred.releq.solver import SolveReport, levenberg_marquardt

__all__ = [
    "EquilibriumResult",
    "EquilibriumSearch",
    "LeafExtremumResult",
    "NonConvergenceError",
    "NotAnEquilibriumError",
    "ReducedField",
    "ResultFlag",
    "SolveReport",
    "Stability",
    "StabilityVerdict",
    "classify_equilibria",
    "find_reduced_stationary",
    "find_relative_equilibria",
    "formal_stability",
    "leaf_extremum_check",
    "levenberg_marquardt",
    "reduced_field",
    "reduced_hamiltonian_for",
]
