from __future__ import annotations

from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
from loguru import logger

from symred.config import get_rank_settings, get_thread_count
from symred.errors import ArityMismatchError
from symred.linalg import numerical_rank
from symred.model.models import SymmetryModel
from symred.orbitmap import NotExpressible, RewriteBoundExceededError, express_in_invariants
from symred.polycore import Polynomial, compile_jacobian, compile_polynomials
from symred.semialg.models import (
    CasimirIndexError,
    MaximalRankUnavailableError,
    MembershipReport,
    MissingMomentumError,
    MomentumConstraint,
    NotInSetError,
    PointClass,
    PointClassification,
    ReducedSpace,
    SemiAlgebraicSet,
)

MEMBERSHIP_TOL = 1e-8


def to_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction | int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value))


def _as_point(s: SemiAlgebraicSet, v: Sequence[float] | np.ndarray) -> np.ndarray:
    point = np.asarray(v, dtype=float)
    if point.shape != (s.ambient_dim,):
        raise ArityMismatchError(s.ambient_dim, point.shape[-1] if point.ndim else 0)
    return point


def membership(
    s: SemiAlgebraicSet, v: Sequence[float] | np.ndarray, tol: float = 1e-9
) -> MembershipReport:
    if tol <= 0:
        raise ValueError("tol must be positive")
    point = _as_point(s, v)
    residuals = tuple(float(p.evaluate(point)) for p in s.relations)
    values = tuple(float(p.evaluate(point)) for p in s.inequalities)
    in_set = all(abs(r) <= tol for r in residuals) and all(g >= -tol for g in values)
    return MembershipReport(in_set, residuals, values, tol)


def _normalized(polys: Sequence[Polynomial]) -> list[Polynomial]:
    out = []
    for poly in polys:
        largest = max((abs(c) for c in poly.terms.values()), default=Fraction(1))
        out.append(poly.scale(1 / largest))
    return out


def relation_rank(
    s: SemiAlgebraicSet, v: Sequence[float] | np.ndarray, tol: float | None = None
) -> int:
    """Rank of the relation Jacobian at v.

    Relations are scaled to unit largest coefficient and the cutoff is
    ``tol * max(sigma_max, 1)``, so the rank does not change when a relation is multiplied
    by a constant and vanishing gradients count as rank zero.
    """
    if not s.relations:
        return 0
    cutoff = get_rank_settings().tol if tol is None else tol
    point = _as_point(s, v)
    jacobian = compile_jacobian(_normalized(s.relations), s.ambient_dim)(point)
    return numerical_rank(jacobian, cutoff, floor=1.0)


def project_onto_relations(
    s: SemiAlgebraicSet, start: np.ndarray, max_iter: int = 60, tol: float = 1e-13
) -> np.ndarray:
    """Gauss-Newton with minimum-norm steps towards {relations = 0}."""
    values = compile_polynomials(s.relations, s.ambient_dim)
    jacobian = compile_jacobian(s.relations, s.ambient_dim)
    x = np.array(start, dtype=float)
    for _ in range(max_iter):
        residual = values(x)
        if np.max(np.abs(residual)) <= tol * max(1.0, float(np.max(np.abs(x)))):
            break
        step, *_ = np.linalg.lstsq(jacobian(x), residual, rcond=None)
        x = x - step
        if not np.all(np.isfinite(x)):
            break
    return x


def estimate_maximal_rank(
    s: SemiAlgebraicSet,
    n_samples: int | None = None,
    seed: int = 0,
    window: float = 2.0,
    tol: float | None = None,
) -> int:
    """Largest relation-Jacobian rank over window samples projected onto the set."""
    if not s.relations:
        return 0
    settings = get_rank_settings()
    count = settings.maximal_rank_samples if n_samples is None else n_samples
    rng = np.random.default_rng(seed)
    starts = rng.uniform(-window, window, size=(count, s.ambient_dim))

    def rank_at(start: np.ndarray) -> int | None:
        point = project_onto_relations(s, start)
        if not np.all(np.isfinite(point)) or not membership(s, point, MEMBERSHIP_TOL).in_set:
            return None
        return relation_rank(s, point, tol)

    with ThreadPoolExecutor(max_workers=get_thread_count()) as pool:
        ranks = [rank for rank in pool.map(rank_at, starts) if rank is not None]
    if not ranks:
        raise MaximalRankUnavailableError(f"no sample out of {count} landed in the set")
    logger.debug("Maximal rank {} from {} of {} samples", max(ranks), len(ranks), count)
    return max(ranks)


def classify_point(
    s: SemiAlgebraicSet,
    v: Sequence[float] | np.ndarray,
    tol: float | None = None,
    membership_tol: float = MEMBERSHIP_TOL,
) -> PointClassification:
    report = membership(s, v, membership_tol)
    if not report.in_set:
        raise NotInSetError(list(np.asarray(v, dtype=float)), report)
    maximal = s.maximal_rank if s.maximal_rank is not None else estimate_maximal_rank(s, tol=tol)
    rank = relation_rank(s, v, tol)
    verdict = PointClass.SINGULAR if rank < maximal else PointClass.NONSINGULAR
    return PointClassification(verdict, rank, maximal)


def orbit_space(model: SymmetryModel) -> SemiAlgebraicSet:
    return SemiAlgebraicSet(
        names=model.invariant_names,
        relations=model.relations + model.leaf_relations,
        inequalities=model.inequalities,
        maximal_rank=model.maximal_rank,
    )


def reduced_space(
    model: SymmetryModel,
    mu: Sequence[object],
    degree_bound: int | None = None,
    casimir_levels: Mapping[int, object] | None = None,
) -> ReducedSpace:
    """Image of J^{-1}(mu) under the orbit map, cut out by the momentum functions at P(mu)."""
    model.require_verified()
    if not model.momentum:
        raise MissingMomentumError(model.name)
    levels = tuple(to_fraction(value) for value in mu)
    if len(levels) != len(model.generators):
        raise ArityMismatchError(len(model.generators), len(levels), what="momentum level")
    bound = degree_bound or model.degree_bound

    constraints = []
    for item in model.momentum:
        phase = item.poly.compose(model.generator_polys)
        rewritten = express_in_invariants(model, phase, bound)
        if isinstance(rewritten, NotExpressible):
            raise RewriteBoundExceededError(bound, what=f"momentum function '{item.name}'")
        level = item.poly.evaluate_exact(levels)
        constraints.append(MomentumConstraint(item.name, rewritten, level))

    fixed: dict[int, Fraction] = {}
    for index, value in sorted((casimir_levels or {}).items()):
        if not 0 <= index < len(model.casimirs):
            raise CasimirIndexError(model.name, index, len(model.casimirs))
        fixed[index] = to_fraction(value)
        constraints.append(MomentumConstraint(f"C{index + 1}", model.casimirs[index], fixed[index]))

    logger.info(
        "Reduced space of {} at mu={} has {} constraints", model.name, levels, len(constraints)
    )
    return ReducedSpace(
        base=orbit_space(model),
        constraints=tuple(constraints),
        model_name=model.name,
        mu=levels,
        casimir_levels=fixed,
    )
