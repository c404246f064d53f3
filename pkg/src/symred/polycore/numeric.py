from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from symred.errors import ArityMismatchError
from symred.polycore.models import Polynomial


@dataclass(frozen=True)
class CompiledPolynomials:
    """A batch of polynomials lowered to numpy arrays for fast float evaluation.

    ``exponents`` holds every distinct monomial (rows) and ``coefficients`` maps them to
    the output polynomials, so ``values = monomials(points) @ coefficients.T``.
    """

    arity: int
    exponents: np.ndarray
    coefficients: np.ndarray

    @property
    def size(self) -> int:
        return int(self.coefficients.shape[0])

    def monomials(self, points: np.ndarray) -> np.ndarray:
        return np.prod(points[..., None, :] ** self.exponents, axis=-1)

    def __call__(self, points: Sequence[float] | np.ndarray) -> np.ndarray:
        """Evaluate at one point (shape ``(n,)``) or a batch (shape ``(N, n)``)."""
        values = np.asarray(points, dtype=float)
        if values.shape[-1] != self.arity:
            raise ArityMismatchError(self.arity, values.shape[-1])
        if self.exponents.shape[0] == 0:
            return np.zeros(values.shape[:-1] + (self.size,))
        return self.monomials(values) @ self.coefficients.T


def compile_polynomials(
    polys: Sequence[Polynomial], arity: int | None = None
) -> CompiledPolynomials:
    if arity is None:
        if not polys:
            raise ValueError("Cannot infer arity of an empty polynomial batch")
        arity = polys[0].arity
    index: dict[tuple[int, ...], int] = {}
    for poly in polys:
        if poly.arity != arity:
            raise ArityMismatchError(arity, poly.arity, what="polynomial")
        for exponent in poly.terms:
            index.setdefault(exponent, len(index))
    exponents = np.zeros((len(index), arity), dtype=np.int64)
    for exponent, row in index.items():
        exponents[row] = exponent
    coefficients = np.zeros((len(polys), len(index)))
    for out, poly in enumerate(polys):
        for exponent, coeff in poly.terms.items():
            coefficients[out, index[exponent]] = float(coeff)
    return CompiledPolynomials(arity=arity, exponents=exponents, coefficients=coefficients)


def compile_jacobian(polys: Sequence[Polynomial], arity: int) -> JacobianEvaluator:
    rows = [poly.diff(var) for poly in polys for var in range(arity)]
    return JacobianEvaluator(
        shape=(len(polys), arity),
        compiled=compile_polynomials(rows, arity) if rows else None,
    )


@dataclass(frozen=True)
class JacobianEvaluator:
    shape: tuple[int, int]
    compiled: CompiledPolynomials | None

    def __call__(self, points: Sequence[float] | np.ndarray) -> np.ndarray:
        values = np.asarray(points, dtype=float)
        batch = values.shape[:-1]
        if self.compiled is None:
            return np.zeros(batch + self.shape)
        return self.compiled(values).reshape(batch + self.shape)
