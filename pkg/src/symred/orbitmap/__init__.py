from symred.orbitmap.models import InducedStructure, NotExpressible, RewriteBoundExceededError
from symred.orbitmap.service import (
    casimir_check,
    express_in_invariants,
    induced_bracket,
    induced_structure,
    induced_structure_document,
    lift_hamiltonian,
    orbit_eval,
    orbit_eval_exact,
    orbit_jacobian,
    pullback,
    reduce_hamiltonian,
)

__all__ = [
    "InducedStructure",
    "NotExpressible",
    "RewriteBoundExceededError",
    "casimir_check",
    "express_in_invariants",
    "induced_bracket",
    "induced_structure",
    "induced_structure_document",
    "lift_hamiltonian",
    "orbit_eval",
    "orbit_eval_exact",
    "orbit_jacobian",
    "pullback",
    "reduce_hamiltonian",
]
