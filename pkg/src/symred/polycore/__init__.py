from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from symred.polycore.linsolve import EchelonBasis, SparseRow, solve_combination
from symred.polycore.models import (
    CanonicalStructure,
    MatrixStructure,
    PoissonStructure,
    Polynomial,
    StructureError,
)
from symred.polycore.numeric import CompiledPolynomials, compile_jacobian, compile_polynomials
from symred.polycore.parser import (
    PolynomialSyntaxError,
    UnknownVariableError,
    poly_format,
    poly_parse,
)
from symred.polycore.poisson import (
    bracket,
    hamiltonian_field,
    jacobiator,
    structure_jacobi_defects,
)


def poly_diff(poly: Polynomial, var: int) -> Polynomial:
    return poly.diff(var)


def poly_eval(poly: Polynomial, point: Sequence[float] | np.ndarray) -> float:
    return poly.evaluate(point)


def poly_eval_exact(poly: Polynomial, point: Sequence[int | Fraction]) -> Fraction:
    return poly.evaluate_exact(point)


__all__ = [
    "CanonicalStructure",
    "CompiledPolynomials",
    "EchelonBasis",
    "MatrixStructure",
    "PoissonStructure",
    "SparseRow",
    "Polynomial",
    "PolynomialSyntaxError",
    "StructureError",
    "UnknownVariableError",
    "bracket",
    "compile_jacobian",
    "compile_polynomials",
    "hamiltonian_field",
    "jacobiator",
    "poly_diff",
    "poly_eval",
    "poly_eval_exact",
    "poly_format",
    "poly_parse",
    "solve_combination",
    "structure_jacobi_defects",
]
