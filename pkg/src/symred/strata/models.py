from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from types import MappingProxyType

from symred.errors import SymredError


class StructurePreconditionError(SymredError):
    def __init__(self, model_name: str, requirement: str) -> None:
        super().__init__(f"Model {model_name} does not satisfy: {requirement}")
        self.model_name = model_name
        self.requirement = requirement


@dataclass(frozen=True)
class RankReport:
    rank_drho: int
    rank_dJ: int
    rank_orbit_span: int
    rank_invariant_span: int
    rank_induced: int
    span_kernel_overlap: int
    point: tuple[float, ...]
    image: tuple[float, ...]

    def to_dict(self) -> dict[str, object]:
        return {
            "point": list(self.point),
            "image": list(self.image),
            "rank_drho": self.rank_drho,
            "rank_dJ": self.rank_dJ,
            "rank_orbit_span": self.rank_orbit_span,
            "rank_invariant_span": self.rank_invariant_span,
            "rank_induced": self.rank_induced,
            "span_kernel_overlap": self.span_kernel_overlap,
        }


@dataclass(frozen=True, order=True)
class StratumSignature:
    rank_drho: int
    rank_orbit_span: int

    def dominates(self, other: StratumSignature) -> bool:
        return self.rank_drho >= other.rank_drho and self.rank_orbit_span >= other.rank_orbit_span

    def __str__(self) -> str:
        return f"({self.rank_drho},{self.rank_orbit_span})"


@dataclass(frozen=True)
class SignatureCensus:
    counts: Mapping[StratumSignature, int]
    n_samples: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", MappingProxyType(dict(self.counts)))

    def frequency(self, signature: StratumSignature) -> float:
        return self.counts.get(signature, 0) / self.n_samples if self.n_samples else 0.0

    def to_dict(self) -> dict[str, object]:
        return {
            "n_samples": self.n_samples,
            "counts": {str(sig): count for sig, count in sorted(self.counts.items())},
        }


@dataclass(frozen=True)
class PrincipalStratumEstimate:
    max_signature: StratumSignature | None
    frequency: float
    n_samples: int
    flagged: str | None = None

    def to_dict(self) -> dict[str, object]:
        return {
            "max_signature": str(self.max_signature) if self.max_signature else None,
            "frequency": self.frequency,
            "n_samples": self.n_samples,
            "flagged": self.flagged,
        }


@dataclass(frozen=True)
class KernelSpanResult:
    passed: bool
    degenerate: bool
    max_defect: float
    rank_invariant_span: int
    rank_dJ: int
    dimension: int

    def to_dict(self) -> dict[str, object]:
        status = "PASS" if self.passed else "FAIL"
        return {
            "status": f"degenerate-{status}" if self.degenerate else status,
            "max_defect": self.max_defect,
            "rank_invariant_span": self.rank_invariant_span,
            "rank_dJ": self.rank_dJ,
            "dimension": self.dimension,
        }


@dataclass(frozen=True)
class RankDefectReport:
    """rank d(rho) against rank of (d rho) W (d rho)^T, with the Casimir differential rank."""

    rank_drho: int
    rank_induced: int
    casimir_rank: int

    @property
    def defect(self) -> int:
        return self.rank_drho - self.rank_induced

    @property
    def explained_by_casimirs(self) -> bool:
        return self.defect == self.casimir_rank

    def to_dict(self) -> dict[str, object]:
        return {
            "rank_drho": self.rank_drho,
            "rank_induced": self.rank_induced,
            "defect": self.defect,
            "casimir_rank": self.casimir_rank,
            "explained_by_casimirs": self.explained_by_casimirs,
        }
