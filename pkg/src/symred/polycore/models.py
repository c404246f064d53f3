from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import TYPE_CHECKING

import numpy as np

from symred.errors import ArityMismatchError, SymredError

if TYPE_CHECKING:
    from symred.polycore.numeric import CompiledPolynomials

Exponent = tuple[int, ...]
Scalar = int | Fraction


class StructureError(SymredError, ValueError):
    pass


def _add_exponents(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def graded_lex_key(exponent: Exponent) -> tuple[int, tuple[int, ...]]:
    """Ascending graded-lex key: lower total degree first, then larger leading powers."""
    return sum(exponent), tuple(-e for e in exponent)


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to non-zero ``Fraction``
    coefficients. Instances are immutable; every operation returns a new polynomial.
    """

    arity: int
    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[Exponent, Fraction] = {}
        for exponent, coeff in self.terms.items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != self.arity:
                raise ArityMismatchError(self.arity, len(exponent), what="exponent")
            if any(e < 0 for e in exponent):
                raise ValueError(f"Negative exponent in {exponent}")
            value = Fraction(coeff)
            if value != 0:
                clean[exponent] = clean.get(exponent, Fraction(0)) + value
        clean = {exp: c for exp, c in clean.items() if c != 0}
        object.__setattr__(self, "terms", MappingProxyType(clean))

    @classmethod
    def _wrap(cls, arity: int, terms: dict[Exponent, Fraction]) -> Polynomial:
        # Fast path for internally built, already canonical term maps.
        poly = object.__new__(cls)
        object.__setattr__(poly, "arity", arity)
        object.__setattr__(poly, "terms", MappingProxyType(terms))
        return poly

    @classmethod
    def zero(cls, arity: int) -> Polynomial:
        return cls._wrap(arity, {})

    @classmethod
    def constant(cls, arity: int, value: Scalar) -> Polynomial:
        coeff = Fraction(value)
        if coeff == 0:
            return cls.zero(arity)
        return cls._wrap(arity, {(0,) * arity: coeff})

    @classmethod
    def variable(cls, arity: int, index: int) -> Polynomial:
        if not 0 <= index < arity:
            raise IndexError(f"Variable index {index} out of range for arity {arity}")
        exponent = [0] * arity
        exponent[index] = 1
        return cls._wrap(arity, {tuple(exponent): Fraction(1)})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: Scalar = 1) -> Polynomial:
        return cls(len(exponent), {tuple(exponent): Fraction(coeff)})

    @classmethod
    def sum(cls, arity: int, polys: Iterable[Polynomial]) -> Polynomial:
        acc: dict[Exponent, Fraction] = {}
        for poly in polys:
            _check_same_arity(arity, poly)
            _accumulate(acc, poly.terms, Fraction(1))
        return cls._wrap(arity, acc)

    # -- inspection -------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; the zero polynomial has degree 0."""
        return max((sum(exp) for exp in self.terms), default=0)

    def term_degrees(self) -> set[int]:
        return {sum(exp) for exp in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.term_degrees()) <= 1

    @property
    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.arity, Fraction(0))

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def variables_used(self) -> set[int]:
        used: set[int] = set()
        for exponent in self.terms:
            used.update(i for i, e in enumerate(exponent) if e)
        return used

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in descending graded-lex order (the printing order)."""
        return sorted(
            self.terms.items(),
            key=lambda item: (-sum(item[0]), tuple(-e for e in item[0])),
        )

    # -- arithmetic -------------------------------------------------------------------

    def _coerce(self, other: Polynomial | Scalar) -> Polynomial:
        if isinstance(other, Polynomial):
            _check_same_arity(self.arity, other)
            return other
        if isinstance(other, int | Fraction):
            return Polynomial.constant(self.arity, other)
        return NotImplemented

    def __add__(self, other: Polynomial | Scalar) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        acc = dict(self.terms)
        _accumulate(acc, rhs.terms, Fraction(1))
        return Polynomial._wrap(self.arity, acc)

    __radd__ = __add__

    def __sub__(self, other: Polynomial | Scalar) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        acc = dict(self.terms)
        _accumulate(acc, rhs.terms, Fraction(-1))
        return Polynomial._wrap(self.arity, acc)

    def __rsub__(self, other: Scalar) -> Polynomial:
        return (-self) + other

    def __neg__(self) -> Polynomial:
        return Polynomial._wrap(self.arity, {exp: -c for exp, c in self.terms.items()})

    def scale(self, factor: Scalar) -> Polynomial:
        factor = Fraction(factor)
        if factor == 0:
            return Polynomial.zero(self.arity)
        return Polynomial._wrap(self.arity, {exp: c * factor for exp, c in self.terms.items()})

    def __mul__(self, other: Polynomial | Scalar) -> Polynomial:
        if isinstance(other, int | Fraction):
            return self.scale(other)
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        acc: dict[Exponent, Fraction] = {}
        for exp_a, coeff_a in self.terms.items():
            for exp_b, coeff_b in rhs.terms.items():
                exponent = _add_exponents(exp_a, exp_b)
                value = acc.get(exponent, Fraction(0)) + coeff_a * coeff_b
                if value == 0:
                    acc.pop(exponent, None)
                else:
                    acc[exponent] = value
        return Polynomial._wrap(self.arity, acc)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> Polynomial:
        if power < 0:
            raise ValueError("Negative powers are not polynomial")
        result = Polynomial.constant(self.arity, 1)
        base = self
        while power:
            if power & 1:
                result = result * base
            power >>= 1
            if power:
                base = base * base
        return result

    # -- calculus and substitution ----------------------------------------------------

    def diff(self, var: int) -> Polynomial:
        if not 0 <= var < self.arity:
            raise IndexError(f"Variable index {var} out of range for arity {self.arity}")
        acc: dict[Exponent, Fraction] = {}
        for exponent, coeff in self.terms.items():
            power = exponent[var]
            if power == 0:
                continue
            lowered = exponent[:var] + (power - 1,) + exponent[var + 1 :]
            acc[lowered] = coeff * power
        return Polynomial._wrap(self.arity, acc)

    def gradient(self) -> tuple[Polynomial, ...]:
        return tuple(self.diff(i) for i in range(self.arity))

    def compose(self, images: Sequence[Polynomial]) -> Polynomial:
        """Substitute ``images[i]`` for variable ``i`` (pullback along a polynomial map)."""
        if len(images) != self.arity:
            raise ArityMismatchError(self.arity, len(images), what="substitution")
        if not images:
            return self
        target = images[0].arity
        for image in images:
            _check_same_arity(target, image)
        powers: list[dict[int, Polynomial]] = [{} for _ in images]

        def power_of(index: int, exponent: int) -> Polynomial:
            cache = powers[index]
            if exponent not in cache:
                cache[exponent] = images[index] ** exponent
            return cache[exponent]

        acc: dict[Exponent, Fraction] = {}
        for exponent, coeff in self.terms.items():
            term = Polynomial.constant(target, coeff)
            for index, power in enumerate(exponent):
                if power:
                    term = term * power_of(index, power)
            _accumulate(acc, term.terms, Fraction(1))
        return Polynomial._wrap(target, acc)

    def substitute(self, var: int, replacement: Polynomial) -> Polynomial:
        images = [Polynomial.variable(self.arity, i) for i in range(self.arity)]
        images[var] = replacement
        return self.compose(images)

    # -- evaluation -------------------------------------------------------------------

    def evaluate(self, point: Sequence[float] | np.ndarray) -> float:
        values = _check_point(self.arity, point)
        total = 0.0
        for exponent, coeff in self.terms.items():
            term = float(coeff)
            for value, power in zip(values, exponent, strict=True):
                if power:
                    term *= float(value) ** power
            total += term
        return total

    def evaluate_exact(self, point: Sequence[Scalar]) -> Fraction:
        values = [Fraction(v) for v in _check_point(self.arity, point)]
        total = Fraction(0)
        for exponent, coeff in self.terms.items():
            term = coeff
            for value, power in zip(values, exponent, strict=True):
                if power:
                    term *= value**power
            total += term
        return total

    def restrict_to_axis(self, point: Sequence[float], var: int) -> np.ndarray:
        """Coefficients (ascending powers) of t -> p(point with coordinate ``var`` = t)."""
        values = _check_point(self.arity, point)
        coeffs = np.zeros(max((exponent[var] for exponent in self.terms), default=0) + 1)
        for exponent, coeff in self.terms.items():
            term = float(coeff)
            for index, (value, power) in enumerate(zip(values, exponent, strict=True)):
                if power and index != var:
                    term *= float(value) ** power
            coeffs[exponent[var]] += term
        return coeffs

    # -- identity ---------------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int | Fraction):
            return self.is_constant and self.constant_term() == other
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.arity == other.arity and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        from symred.polycore.parser import poly_format

        names = [f"x{i + 1}" for i in range(self.arity)]
        return f"Polynomial({poly_format(self, names)!r}, arity={self.arity})"


def _accumulate(
    acc: dict[Exponent, Fraction], terms: Mapping[Exponent, Fraction], factor: Fraction
) -> None:
    for exponent, coeff in terms.items():
        value = acc.get(exponent, Fraction(0)) + coeff * factor
        if value == 0:
            acc.pop(exponent, None)
        else:
            acc[exponent] = value


def _check_same_arity(arity: int, poly: Polynomial) -> None:
    if poly.arity != arity:
        raise ArityMismatchError(arity, poly.arity, what="polynomial")


def _check_point(arity: int, point: Sequence | np.ndarray) -> Sequence:
    if len(point) != arity:
        raise ArityMismatchError(arity, len(point))
    return point


@dataclass(frozen=True)
class CanonicalStructure:
    """Constant symplectic structure [[0, I], [-I, 0]] on (x_1..x_n, y_1..y_n)."""

    pairs: int

    def __post_init__(self) -> None:
        if self.pairs < 1:
            raise StructureError("Canonical structure needs at least one conjugate pair")

    @property
    def arity(self) -> int:
        return 2 * self.pairs

    @property
    def is_canonical(self) -> bool:
        return True

    def entry(self, i: int, j: int) -> Polynomial:
        n = self.pairs
        if j == i + n:
            return Polynomial.constant(self.arity, 1)
        if i == j + n:
            return Polynomial.constant(self.arity, -1)
        return Polynomial.zero(self.arity)

    @cached_property
    def entries(self) -> tuple[tuple[Polynomial, ...], ...]:
        return tuple(tuple(self.entry(i, j) for j in range(self.arity)) for i in range(self.arity))

    def as_matrix(self) -> MatrixStructure:
        return MatrixStructure(self.entries)

    def evaluate(self, point: Sequence[float] | np.ndarray) -> np.ndarray:
        _check_point(self.arity, point)
        n = self.pairs
        matrix = np.zeros((self.arity, self.arity))
        matrix[:n, n:] = np.eye(n)
        matrix[n:, :n] = -np.eye(n)
        return matrix


@dataclass(frozen=True)
class MatrixStructure:
    """Poisson structure given by an antisymmetric matrix of polynomials W~."""

    entries: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        size = len(rows)
        for i, row in enumerate(rows):
            if len(row) != size:
                raise StructureError(
                    f"Structure matrix row {i} has {len(row)} entries, expected {size}"
                )
            for entry in row:
                if entry.arity != size:
                    raise StructureError(
                        f"Structure entry in row {i} has arity {entry.arity}, expected {size}"
                    )
        defects = self.antisymmetry_defects()
        if defects:
            i, j = defects[0]
            raise StructureError(f"Structure matrix is not antisymmetric at ({i + 1},{j + 1})")

    @property
    def arity(self) -> int:
        return len(self.entries)

    @property
    def is_canonical(self) -> bool:
        return False

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries[i][j]

    def antisymmetry_defects(self) -> list[tuple[int, int]]:
        defects: list[tuple[int, int]] = []
        for i in range(self.arity):
            if not self.entries[i][i].is_zero:
                defects.append((i, i))
            for j in range(i + 1, self.arity):
                if not (self.entries[i][j] + self.entries[j][i]).is_zero:
                    defects.append((i, j))
        return defects

    @cached_property
    def _evaluator(self) -> CompiledPolynomials:
        from symred.polycore.numeric import compile_polynomials

        return compile_polynomials([entry for row in self.entries for entry in row], self.arity)

    def evaluate(self, point: Sequence[float] | np.ndarray) -> np.ndarray:
        values = np.asarray(_check_point(self.arity, point), dtype=float)
        return self._evaluator(values).reshape(self.arity, self.arity)


PoissonStructure = CanonicalStructure | MatrixStructure
