from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from symred.errors import SymredError
from symred.polycore import (
    CompiledPolynomials,
    MatrixStructure,
    Polynomial,
    compile_polynomials,
    poly_format,
)


class RewriteBoundExceededError(SymredError):
    def __init__(
        self, degree_bound: int, pair: tuple[int, int] | None = None, what: str = ""
    ) -> None:
        if pair:
            target = f"bracket of invariants {pair[0] + 1} and {pair[1] + 1}"
        else:
            target = what or "input"
        super().__init__(
            f"Cannot express {target} in the invariants at degree bound {degree_bound}"
        )
        self.degree_bound = degree_bound
        self.pair = pair


@dataclass(frozen=True)
class NotExpressible:
    degree_bound: int
    residual_terms: int


@dataclass(frozen=True)
class InducedStructure:
    """Structure matrix W_ij on the orbit space, as polynomials in the invariant names."""

    names: tuple[str, ...]
    entries: tuple[tuple[Polynomial, ...], ...]
    degree_bound: int

    @property
    def size(self) -> int:
        return len(self.names)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries[i][j]

    @property
    def is_zero(self) -> bool:
        return all(entry.is_zero for row in self.entries for entry in row)

    def as_structure(self) -> MatrixStructure:
        return MatrixStructure(self.entries)

    @cached_property
    def _evaluator(self) -> CompiledPolynomials:
        return compile_polynomials([e for row in self.entries for e in row], self.size)

    def evaluate(self, v: Sequence[float] | np.ndarray) -> np.ndarray:
        values = np.asarray(v, dtype=float)
        return self._evaluator(values).reshape(values.shape[:-1] + (self.size, self.size))

    def to_dict(self) -> dict[str, object]:
        return {
            "invariants": list(self.names),
            "degree_bound": self.degree_bound,
            "entries": [[poly_format(e, self.names) for e in row] for row in self.entries],
        }
