"""Exact linear algebra over polynomial coefficient vectors.

Polynomials are treated as sparse vectors indexed by exponent. ``EchelonBasis`` keeps an
incrementally built row echelon form over ``Fraction`` and remembers, for every stored row,
which combination of the inserted candidates produced it.
"""

from __future__ import annotations

from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Generic, TypeVar

from symred.polycore.models import Exponent, Polynomial, graded_lex_key

K = TypeVar("K", bound=Hashable)


class SparseRow(dict[K, Fraction], Generic[K]):
    """Mapping key -> Fraction that never stores zeros."""

    def iadd_coef(self, coef: Fraction, other: Mapping[K, Fraction]) -> SparseRow[K]:
        # self += coef * other
        if coef == 0:
            return self
        for key, value in other.items():
            updated = self.get(key, Fraction(0)) + coef * value
            if updated == 0:
                self.pop(key, None)
            else:
                self[key] = updated
        return self


@dataclass
class _Row:
    pivot: Exponent
    values: SparseRow[Exponent]
    combination: SparseRow[int]


@dataclass
class EchelonBasis:
    """Incremental exact elimination over candidate polynomials.

    Each stored row pivots on its largest exponent under graded-lex order, so eliminating a
    pivot only introduces smaller exponents and reduction always terminates.
    """

    rows: dict[Exponent, _Row] = field(default_factory=dict)
    independent: list[int] = field(default_factory=list)

    def reduce(
        self, terms: Mapping[Exponent, Fraction]
    ) -> tuple[SparseRow[Exponent], SparseRow[int]]:
        """Return ``(residual, combination)`` with ``terms = residual + sum(c_i * candidate_i)``."""
        residual: SparseRow[Exponent] = SparseRow(terms)
        combination: SparseRow[int] = SparseRow()
        while True:
            pivots = [exp for exp in residual if exp in self.rows]
            if not pivots:
                return residual, combination
            pivot = max(pivots, key=graded_lex_key)
            row = self.rows[pivot]
            factor = residual[pivot] / row.values[pivot]
            residual.iadd_coef(-factor, row.values)
            combination.iadd_coef(factor, row.combination)

    def insert(self, index: int, terms: Mapping[Exponent, Fraction]) -> bool:
        """Add candidate ``index``; returns False when it depends on earlier candidates."""
        residual, combination = self.reduce(terms)
        if not residual:
            return False
        row_combination: SparseRow[int] = SparseRow({index: Fraction(1)})
        row_combination.iadd_coef(Fraction(-1), combination)
        pivot = max(residual, key=graded_lex_key)
        self.rows[pivot] = _Row(pivot=pivot, values=residual, combination=row_combination)
        self.independent.append(index)
        return True


def solve_combination(
    target: Polynomial, candidates: Sequence[Polynomial]
) -> tuple[Fraction, ...] | None:
    """Coefficients ``c`` with ``target = sum(c_i * candidates[i])``, or None if infeasible.

    Candidates that depend on earlier ones get coefficient zero.
    """
    basis = EchelonBasis()
    for index, candidate in enumerate(candidates):
        basis.insert(index, candidate.terms)
    residual, combination = basis.reduce(target.terms)
    if residual:
        return None
    return tuple(combination.get(i, Fraction(0)) for i in range(len(candidates)))
