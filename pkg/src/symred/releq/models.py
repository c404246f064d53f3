from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, replace
from enum import StrEnum

import numpy as np

from symred.errors import SymredError
from symred.polycore import CompiledPolynomials, Polynomial, poly_format
from symred.polycore.numeric import JacobianEvaluator


class NonConvergenceError(SymredError):
    def __init__(self, attempts: int, best_residual: float) -> None:
        super().__init__(
            f"No seed converged out of {attempts} (best residual {best_residual:.3e})"
        )
        self.attempts = attempts
        self.best_residual = best_residual


class NotAnEquilibriumError(SymredError):
    def __init__(self, residual: float, tol: float) -> None:
        super().__init__(
            f"Point is not a relative equilibrium: residual {residual:.3e} > {tol:.1e}"
        )
        self.residual = residual
        self.tol = tol


class Stability(StrEnum):
    FORMALLY_STABLE = "FormallyStable"
    INDEFINITE = "Indefinite"
    DEGENERATE = "Degenerate"
    NOT_COMPUTED = "NotComputed"


class ResultFlag(StrEnum):
    EVERYWHERE_STATIONARY = "EverywhereStationary"
    NON_CONVERGENCE = "NonConvergence"


@dataclass(frozen=True)
class StabilityVerdict:
    stability: Stability
    projected_spectrum: tuple[float, ...]
    subspace_dim: int
    kernel_dim: int = 0
    neutral_dim: int = 0
    diagnostics: str | None = None

    def to_dict(self) -> dict[str, object]:
        return {
            "stability": str(self.stability),
            "projected_spectrum": list(self.projected_spectrum),
            "subspace_dim": self.subspace_dim,
            "kernel_dim": self.kernel_dim,
            "neutral_dim": self.neutral_dim,
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class EquilibriumResult:
    """A relative equilibrium (full space) or a stationary point of the reduced field."""

    point: tuple[float, ...]
    image: tuple[float, ...]
    residual: float
    multipliers: tuple[float, ...] = ()
    stability: Stability = Stability.NOT_COMPUTED
    projected_spectrum: tuple[float, ...] = ()
    subspace_dim: int = 0
    flags: tuple[ResultFlag, ...] = ()
    iterations: int = 0
    seed_index: int = -1
    diagnostics: str | None = None

    def with_verdict(self, verdict: StabilityVerdict) -> EquilibriumResult:
        return replace(
            self,
            stability=verdict.stability,
            projected_spectrum=verdict.projected_spectrum,
            subspace_dim=verdict.subspace_dim,
            diagnostics=verdict.diagnostics,
        )

    def to_dict(self) -> dict[str, object]:
        return {
            "point": list(self.point),
            "image": list(self.image),
            "multipliers": list(self.multipliers),
            "residual": self.residual,
            "stability": str(self.stability),
            "projected_spectrum": list(self.projected_spectrum),
            "subspace_dim": self.subspace_dim,
            "flags": [str(flag) for flag in self.flags],
            "iterations": self.iterations,
            "seed_index": self.seed_index,
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class EquilibriumSearch:
    results: tuple[EquilibriumResult, ...]
    seeds: int
    converged: int
    best_residual: float
    note: str | None = None

    def require_results(self) -> tuple[EquilibriumResult, ...]:
        if not self.results:
            raise NonConvergenceError(self.seeds, self.best_residual)
        return self.results

    def to_dict(self) -> dict[str, object]:
        return {
            "seeds": self.seeds,
            "converged": self.converged,
            "best_residual": self.best_residual,
            "note": self.note,
            "results": [result.to_dict() for result in self.results],
        }


@dataclass(frozen=True)
class ReducedField:
    """Components sum_j W_ij dH/dv_j of the reduced Hamiltonian vector field."""

    names: tuple[str, ...]
    components: tuple[Polynomial, ...]
    evaluator: CompiledPolynomials
    jacobian: JacobianEvaluator

    @property
    def is_zero(self) -> bool:
        return all(component.is_zero for component in self.components)

    def __call__(self, v: Sequence[float] | np.ndarray) -> np.ndarray:
        return self.evaluator(v)

    def to_dict(self) -> dict[str, object]:
        return {
            "coordinates": list(self.names),
            "components": [poly_format(c, self.names) for c in self.components],
        }


@dataclass(frozen=True)
class LeafExtremumResult:
    is_local_min: bool
    is_local_max: bool
    samples_used: int
    min_delta: float
    max_delta: float
    radius: float = 0.0

    @property
    def is_extremum(self) -> bool:
        return self.samples_used > 0 and (self.is_local_min or self.is_local_max)
