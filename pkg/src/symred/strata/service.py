from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from loguru import logger

from symred.config import get_rank_settings, get_thread_count
from symred.errors import ArityMismatchError
from symred.linalg import kernel, numerical_rank, subspace_intersection
from symred.model.models import SymmetryModel
from symred.polycore import CompiledPolynomials, compile_jacobian, compile_polynomials
from symred.polycore.numeric import JacobianEvaluator
from symred.strata.models import (
    KernelSpanResult,
    PrincipalStratumEstimate,
    RankDefectReport,
    RankReport,
    SignatureCensus,
    StratumSignature,
    StructurePreconditionError,
)

CHUNK_SIZE = 512


@dataclass(frozen=True)
class _Evaluators:
    invariants: CompiledPolynomials
    drho: JacobianEvaluator
    dJ: JacobianEvaluator


def _evaluators(model: SymmetryModel) -> _Evaluators:
    n = model.dimension
    return _Evaluators(
        invariants=compile_polynomials(model.invariant_polys, n),
        drho=compile_jacobian(model.invariant_polys, n),
        dJ=compile_jacobian(model.generator_polys, n),
    )


def _point(model: SymmetryModel, x: Sequence[float] | np.ndarray) -> np.ndarray:
    point = np.asarray(x, dtype=float)
    if point.shape != (model.dimension,):
        raise ArityMismatchError(model.dimension, point.shape[-1] if point.ndim else 0)
    return point


def _tol(tol: float | None) -> float:
    return get_rank_settings().tol if tol is None else tol


def _report(model: SymmetryModel, ev: _Evaluators, x: np.ndarray, tol: float) -> RankReport:
    drho = ev.drho(x)
    dj = ev.dJ(x)
    poisson = model.structure.evaluate(x)
    invariant_fields = poisson @ drho.T
    orbit_fields = poisson @ dj.T
    overlap = subspace_intersection(invariant_fields, kernel(drho, tol), tol)
    return RankReport(
        rank_drho=numerical_rank(drho, tol),
        rank_dJ=numerical_rank(dj, tol),
        rank_orbit_span=numerical_rank(orbit_fields, tol),
        rank_invariant_span=numerical_rank(invariant_fields, tol),
        rank_induced=numerical_rank(drho @ invariant_fields, tol),
        span_kernel_overlap=overlap.shape[1],
        point=tuple(float(value) for value in x),
        image=tuple(float(value) for value in ev.invariants(x)),
    )


def rank_report(
    model: SymmetryModel, x: Sequence[float] | np.ndarray, tol: float | None = None
) -> RankReport:
    """Ranks of d(rho), dJ, the X_J span, the X_rho span and (d rho) W (d rho)^T at x."""
    model.require_verified()
    return _report(model, _evaluators(model), _point(model, x), _tol(tol))


def stratum_signature(
    model: SymmetryModel, x: Sequence[float] | np.ndarray, tol: float | None = None
) -> StratumSignature:
    report = rank_report(model, x, tol)
    return StratumSignature(report.rank_drho, report.rank_orbit_span)


def _sample_chunks(dimension: int, n_samples: int, seed: int) -> list[np.ndarray]:
    n_chunks = -(-n_samples // CHUNK_SIZE)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes = [min(CHUNK_SIZE, n_samples - i * CHUNK_SIZE) for i in range(n_chunks)]
    return [
        np.random.default_rng(stream).standard_normal((size, dimension))
        for stream, size in zip(streams, sizes, strict=True)
    ]


def signature_census(
    model: SymmetryModel, n_samples: int, seed: int = 0, tol: float | None = None
) -> SignatureCensus:
    """Histogram of signatures at standard-normal phase points.

    Each chunk of samples draws from its own spawned stream, so the census depends only
    on the seed.
    """
    model.require_verified()
    if n_samples <= 0:
        return SignatureCensus({}, 0)
    ev = _evaluators(model)
    cutoff = _tol(tol)

    def census(points: np.ndarray) -> Counter[StratumSignature]:
        counts: Counter[StratumSignature] = Counter()
        for x in points:
            report = _report(model, ev, x, cutoff)
            counts[StratumSignature(report.rank_drho, report.rank_orbit_span)] += 1
        return counts

    total: Counter[StratumSignature] = Counter()
    with ThreadPoolExecutor(max_workers=get_thread_count()) as pool:
        for counts in pool.map(census, _sample_chunks(model.dimension, n_samples, seed)):
            total.update(counts)
    logger.debug("Signature census of {}: {}", model.name, dict(total))
    return SignatureCensus(total, n_samples)


def principal_stratum_estimate(
    model: SymmetryModel, n_samples: int, seed: int = 0, tol: float | None = None
) -> PrincipalStratumEstimate:
    census = signature_census(model, n_samples, seed, tol)
    if not census.n_samples:
        return PrincipalStratumEstimate(None, 0.0, 0, flagged="no samples")
    top = StratumSignature(
        max(sig.rank_drho for sig in census.counts),
        max(sig.rank_orbit_span for sig in census.counts),
    )
    frequency = census.frequency(top)
    flagged = None if top in census.counts else "componentwise maximum never observed"
    logger.info("Principal stratum of {}: {} at frequency {:.4f}", model.name, top, frequency)
    return PrincipalStratumEstimate(top, frequency, census.n_samples, flagged)


def kernel_span_check(
    model: SymmetryModel, x: Sequence[float] | np.ndarray, tol: float | None = None
) -> KernelSpanResult:
    """Check that the X_rho(x) lie in ker dJ(x) and span a space of dimension n - rank dJ."""
    model.require_verified()
    if not model.structure.is_canonical:
        raise StructurePreconditionError(model.name, "a canonical (symplectic) structure")
    cutoff = _tol(tol)
    point = _point(model, x)
    ev = _evaluators(model)
    dj = ev.dJ(point)
    invariant_fields = model.structure.evaluate(point) @ ev.drho(point).T
    products = dj @ invariant_fields
    scale = max(
        1.0, float(np.abs(dj).max(initial=0.0)) * float(np.abs(invariant_fields).max(initial=0.0))
    )
    max_defect = float(np.abs(products).max(initial=0.0)) / scale
    rank_dj = numerical_rank(dj, cutoff)
    rank_span = numerical_rank(invariant_fields, cutoff)
    degenerate = rank_dj == 0
    in_kernel = max_defect <= 1e3 * cutoff
    passed = in_kernel and (degenerate or rank_span == model.dimension - rank_dj)
    return KernelSpanResult(passed, degenerate, max_defect, rank_span, rank_dj, model.dimension)


def rank_defect_report(
    model: SymmetryModel, x: Sequence[float] | np.ndarray, tol: float | None = None
) -> RankDefectReport:
    """Compare rank d(rho) with rank (d rho) W (d rho)^T; the gap is expected to match the
    rank of the Casimir differentials pulled back to x."""
    model.require_verified()
    cutoff = _tol(tol)
    point = _point(model, x)
    ev = _evaluators(model)
    report = _report(model, ev, point, cutoff)
    casimir_rank = 0
    if model.casimirs:
        gradients = compile_jacobian(model.casimirs, len(model.invariants))(ev.invariants(point))
        casimir_rank = numerical_rank(gradients @ ev.drho(point), cutoff)
    return RankDefectReport(report.rank_drho, report.rank_induced, casimir_rank)
