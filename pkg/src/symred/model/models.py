from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from types import MappingProxyType

from symred.errors import ArityMismatchError, SymredError
from symred.polycore import Polynomial, PoissonStructure, poly_format


class ModelFormatError(SymredError, ValueError):
    def __init__(self, message: str, field_name: str | None = None) -> None:
        prefix = f"{field_name}: " if field_name else ""
        super().__init__(f"{prefix}{message}")
        self.field_name = field_name


class UnverifiedModelError(SymredError):
    def __init__(self, model_name: str) -> None:
        super().__init__(f"Model '{model_name}' has not passed verification")
        self.model_name = model_name


@dataclass(frozen=True)
class NamedPolynomial:
    name: str
    poly: Polynomial


class Frame(StrEnum):
    FULL = "full"
    INVARIANT = "invariant"


@dataclass(frozen=True)
class HamiltonianSpec:
    expression: Polynomial
    frame: Frame = Frame.FULL


@dataclass(frozen=True)
class SymmetryModel:
    """Phase space, Poisson structure, symmetry generators and Hilbert basis.

    ``relations``, ``inequalities``, ``casimirs`` and ``leaf_relations`` are polynomials in
    the invariant names; ``momentum`` entries are polynomials in the generator names.
    """

    name: str
    variables: tuple[str, ...]
    structure: PoissonStructure
    generators: tuple[NamedPolynomial, ...]
    invariants: tuple[NamedPolynomial, ...]
    relations: tuple[Polynomial, ...] = ()
    inequalities: tuple[Polynomial, ...] = ()
    casimirs: tuple[Polynomial, ...] = ()
    degree_bound: int = 2
    momentum: tuple[NamedPolynomial, ...] = ()
    leaf_relations: tuple[Polynomial, ...] = ()
    maximal_rank: int | None = None
    hamiltonian: HamiltonianSpec | None = None
    parameters: Mapping[str, str] = field(default_factory=dict)
    notes: str = ""
    verified: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "parameters", MappingProxyType(dict(self.parameters)))
        n = len(self.variables)
        if self.structure.arity != n:
            raise ArityMismatchError(n, self.structure.arity, what="structure")
        for group in (self.generators, self.invariants):
            for item in group:
                if item.poly.arity != n:
                    raise ArityMismatchError(n, item.poly.arity, what=f"'{item.name}'")
        k = len(self.invariants)
        for group_name in ("relations", "inequalities", "casimirs", "leaf_relations"):
            for poly in getattr(self, group_name):
                if poly.arity != k:
                    raise ArityMismatchError(k, poly.arity, what=group_name)
        r = len(self.generators)
        for item in self.momentum:
            if item.poly.arity != r:
                raise ArityMismatchError(r, item.poly.arity, what=f"momentum '{item.name}'")
        if self.hamiltonian is not None:
            expected = n if self.hamiltonian.frame is Frame.FULL else k
            if self.hamiltonian.expression.arity != expected:
                raise ArityMismatchError(expected, self.hamiltonian.expression.arity, "hamiltonian")
        if self.degree_bound < 1:
            raise ValueError("degree_bound must be at least 1")

    @property
    def dimension(self) -> int:
        return len(self.variables)

    @property
    def invariant_names(self) -> tuple[str, ...]:
        return tuple(item.name for item in self.invariants)

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(item.name for item in self.generators)

    @property
    def invariant_polys(self) -> tuple[Polynomial, ...]:
        return tuple(item.poly for item in self.invariants)

    @property
    def generator_polys(self) -> tuple[Polynomial, ...]:
        return tuple(item.poly for item in self.generators)

    @property
    def is_orbit_space_model(self) -> bool:
        """True when the invariants are the coordinates themselves (a Poisson-manifold input)."""
        n = self.dimension
        return len(self.invariants) == n and all(
            item.poly == Polynomial.variable(n, i) for i, item in enumerate(self.invariants)
        )

    def require_verified(self) -> SymmetryModel:
        if not self.verified:
            raise UnverifiedModelError(self.name)
        return self

    def format_invariant_poly(self, poly: Polynomial) -> str:
        return poly_format(poly, self.invariant_names)

    def format_phase_poly(self, poly: Polynomial) -> str:
        return poly_format(poly, self.variables)


# -- verification reports -------------------------------------------------------------


@dataclass(frozen=True)
class PairCheck:
    invariant: str
    generator: str
    residual: Polynomial

    @property
    def passed(self) -> bool:
        return self.residual.is_zero


@dataclass(frozen=True)
class InvarianceReport:
    checks: tuple[PairCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> tuple[PairCheck, ...]:
        return tuple(check for check in self.checks if not check.passed)


@dataclass(frozen=True)
class RelationCheck:
    index: int
    relation: Polynomial
    residual: Polynomial

    @property
    def passed(self) -> bool:
        return self.residual.is_zero


@dataclass(frozen=True)
class RelationReport:
    checks: tuple[RelationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


@dataclass(frozen=True)
class StructureConstants:
    """``{J_i, J_j} = constants[(i, j)][0] + sum_k constants[(i, j)][k + 1] * J_k``."""

    constants: Mapping[tuple[int, int], tuple[Fraction, ...]]

    def coefficient(self, i: int, j: int, k: int) -> Fraction:
        return self.constants[(i, j)][k + 1]

    def offset(self, i: int, j: int) -> Fraction:
        return self.constants[(i, j)][0]

    @property
    def is_abelian(self) -> bool:
        return all(value == 0 for row in self.constants.values() for value in row)


@dataclass(frozen=True)
class NotClosed:
    pair: tuple[int, int]
    bracket: Polynomial


@dataclass(frozen=True)
class CasimirCheck:
    candidate: Polynomial
    residuals: tuple[tuple[str, Polynomial], ...]
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(res.is_zero for _, res in self.residuals)

    @property
    def failing_pair(self) -> tuple[str, Polynomial] | None:
        for name, residual in self.residuals:
            if not residual.is_zero:
                return name, residual
        return None


@dataclass(frozen=True)
class InequalityReport:
    samples: int
    minima: tuple[float, ...]
    tol: float
    skipped: str | None = None

    @property
    def passed(self) -> bool:
        return self.skipped is not None or all(value >= -self.tol for value in self.minima)


@dataclass(frozen=True)
class ModelReport:
    model: SymmetryModel
    invariance: InvarianceReport
    relations: RelationReport
    jacobi_defects: Mapping[tuple[int, int, int], Polynomial]
    casimirs: tuple[CasimirCheck, ...]
    leaf_relations: tuple[CasimirCheck, ...]
    generator_constants: StructureConstants | NotClosed
    degree_bound: int
    inequalities: InequalityReport

    @property
    def passed(self) -> bool:
        return (
            self.invariance.passed
            and self.relations.passed
            and not self.jacobi_defects
            and all(check.passed for check in self.casimirs)
            and all(check.passed for check in self.leaf_relations)
            and self.inequalities.passed
        )

    def to_dict(self) -> dict[str, object]:
        m = self.model
        return {
            "model": m.name,
            "parameters": dict(m.parameters),
            "degree_bound": self.degree_bound,
            "passed": self.passed,
            "invariance": [
                {
                    "invariant": check.invariant,
                    "generator": check.generator,
                    "status": "PASS" if check.passed else "FAIL",
                    "residual": m.format_phase_poly(check.residual),
                }
                for check in self.invariance.checks
            ],
            "relations": [
                {
                    "relation": m.format_invariant_poly(check.relation),
                    "status": "PASS" if check.passed else "FAIL",
                    "residual": m.format_phase_poly(check.residual),
                }
                for check in self.relations.checks
            ],
            "jacobi": [
                {"triple": [m.variables[i] for i in triple], "defect": m.format_phase_poly(value)}
                for triple, value in sorted(self.jacobi_defects.items())
            ],
            "casimirs": [_casimir_entry(m, check) for check in self.casimirs],
            "leaf_relations": [_casimir_entry(m, check) for check in self.leaf_relations],
            "generator_constants": _constants_entry(m, self.generator_constants),
            "inequalities": _inequality_entry(m, self.inequalities),
        }


def _casimir_entry(m: SymmetryModel, check: CasimirCheck) -> dict[str, object]:
    entry: dict[str, object] = {
        "candidate": m.format_invariant_poly(check.candidate),
        "status": "PASS" if check.passed else "FAIL",
    }
    if check.error:
        entry["error"] = check.error
    failing = check.failing_pair
    if failing is not None:
        entry["with"] = failing[0]
        entry["residual"] = m.format_phase_poly(failing[1])
    return entry


def _inequality_entry(m: SymmetryModel, report: InequalityReport) -> dict[str, object]:
    entry: dict[str, object] = {
        "status": "PASS" if report.passed else "FAIL",
        "samples": report.samples,
        "minima": {
            m.format_invariant_poly(poly): value
            for poly, value in zip(m.inequalities, report.minima, strict=False)
        },
    }
    if report.skipped:
        entry["skipped"] = report.skipped
    return entry


def _constants_entry(m: SymmetryModel, result: StructureConstants | NotClosed) -> object:
    if isinstance(result, NotClosed):
        i, j = result.pair
        return {"closed": False, "pair": [m.generator_names[i], m.generator_names[j]]}
    names = m.generator_names
    brackets = []
    for (i, j), values in sorted(result.constants.items()):
        terms = [str(values[0])] if values[0] else []
        terms.extend(f"{value}*{names[k]}" for k, value in enumerate(values[1:]) if value)
        brackets.append({"pair": [names[i], names[j]], "value": " + ".join(terms) or "0"})
    return {"closed": True, "brackets": brackets}


def named(names: Sequence[str], polys: Sequence[Polynomial]) -> tuple[NamedPolynomial, ...]:
    return tuple(NamedPolynomial(name, poly) for name, poly in zip(names, polys, strict=True))
