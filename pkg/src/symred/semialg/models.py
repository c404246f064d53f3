from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from symred.errors import ArityMismatchError, SymredError
from symred.polycore import Polynomial, poly_format


class NotInSetError(SymredError):
    def __init__(self, point: Sequence[float], report: MembershipReport) -> None:
        super().__init__(f"Point {list(point)} is not in the set")
        self.point = tuple(float(value) for value in point)
        self.report = report


class MaximalRankUnavailableError(SymredError):
    def __init__(self, reason: str) -> None:
        super().__init__(f"Maximal rank unavailable: {reason}")
        self.reason = reason


class ChartError(SymredError, ValueError):
    pass


class MissingMomentumError(SymredError, ValueError):
    def __init__(self, model_name: str) -> None:
        super().__init__(f"Model {model_name} declares no momentum functions")
        self.model_name = model_name


class CasimirIndexError(SymredError, IndexError):
    def __init__(self, model_name: str, index: int, available: int) -> None:
        super().__init__(
            f"Model {model_name} has no Casimir {index + 1} (it declares {available})"
        )
        self.index = index


@dataclass(frozen=True)
class SemiAlgebraicSet:
    """{relations = 0, inequalities >= 0} in R^k with named coordinates."""

    names: tuple[str, ...]
    relations: tuple[Polynomial, ...] = ()
    inequalities: tuple[Polynomial, ...] = ()
    maximal_rank: int | None = None

    def __post_init__(self) -> None:
        k = len(self.names)
        for group in ("relations", "inequalities"):
            for poly in getattr(self, group):
                if poly.arity != k:
                    raise ArityMismatchError(k, poly.arity, what=group)

    @property
    def ambient_dim(self) -> int:
        return len(self.names)

    def with_relations(self, extra: Sequence[Polynomial]) -> SemiAlgebraicSet:
        return SemiAlgebraicSet(self.names, self.relations + tuple(extra), self.inequalities)

    def to_dict(self) -> dict[str, object]:
        return {
            "coordinates": list(self.names),
            "relations": [poly_format(p, self.names) for p in self.relations],
            "inequalities": [poly_format(p, self.names) for p in self.inequalities],
            "maximal_rank": self.maximal_rank,
        }


@dataclass(frozen=True)
class MomentumConstraint:
    name: str
    poly: Polynomial
    level: Fraction

    def as_relation(self) -> Polynomial:
        return self.poly - self.level


@dataclass(frozen=True)
class ReducedSpace:
    base: SemiAlgebraicSet
    constraints: tuple[MomentumConstraint, ...]
    model_name: str
    mu: tuple[Fraction, ...]
    casimir_levels: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "casimir_levels", MappingProxyType(dict(self.casimir_levels)))

    @property
    def names(self) -> tuple[str, ...]:
        return self.base.names

    @property
    def relations(self) -> tuple[Polynomial, ...]:
        return self.base.relations + tuple(c.as_relation() for c in self.constraints)

    def as_set(self) -> SemiAlgebraicSet:
        return SemiAlgebraicSet(self.base.names, self.relations, self.base.inequalities)

    def to_dict(self) -> dict[str, object]:
        names = self.base.names
        return {
            "model": self.model_name,
            "mu": [str(value) for value in self.mu],
            "casimir_levels": {str(i): str(v) for i, v in sorted(self.casimir_levels.items())},
            "coordinates": list(names),
            "constraints": [
                {"name": c.name, "poly": poly_format(c.poly, names), "level": str(c.level)}
                for c in self.constraints
            ],
            "relations": [poly_format(p, names) for p in self.relations],
            "inequalities": [poly_format(p, names) for p in self.base.inequalities],
        }


@dataclass(frozen=True)
class MembershipReport:
    in_set: bool
    relation_residuals: tuple[float, ...]
    inequality_values: tuple[float, ...]
    tol: float


class PointClass(StrEnum):
    NONSINGULAR = "Nonsingular"
    SINGULAR = "Singular"


@dataclass(frozen=True)
class PointClassification:
    verdict: PointClass
    rank: int
    maximal_rank: int


@dataclass(frozen=True)
class Chart:
    """Free coordinates (i, j) and the coordinate k solved from the remaining relation."""

    free: tuple[int, int]
    solved: int

    def __post_init__(self) -> None:
        indices = (*self.free, self.solved)
        if len(set(indices)) != 3 or min(indices) < 0:
            raise ChartError(f"chart needs three distinct coordinates, got {indices}")

    @classmethod
    def parse(cls, text: str) -> Chart:
        """``"i,j->k"`` with 1-based indices."""
        try:
            free_text, solved_text = text.split("->")
            first, second = (int(part) - 1 for part in free_text.split(","))
            return cls((first, second), int(solved_text) - 1)
        except ValueError as err:
            raise ChartError(f"malformed chart '{text}', expected 'i,j->k'") from err

    def to_text(self) -> str:
        return f"{self.free[0] + 1},{self.free[1] + 1}->{self.solved + 1}"


Window = tuple[tuple[float, float], tuple[float, float]]


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray
    triangles: np.ndarray
    residual_max: float
    flagged: str | None = None

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    def to_dict(self) -> dict[str, object]:
        return {
            "vertices": [[float(value) for value in row] for row in self.vertices],
            "triangles": [[int(index) for index in row] for row in self.triangles],
            "residual_max": float(self.residual_max),
            "flagged": self.flagged,
        }
