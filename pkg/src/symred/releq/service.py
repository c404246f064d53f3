from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
from loguru import logger

from symred.config import get_rank_settings, get_solver_settings, get_thread_count
from symred.errors import ArityMismatchError
from symred.linalg import complement_within, kernel, numerical_rank, subspace_intersection
from symred.model.models import HamiltonianSpec, SymmetryModel
from symred.orbitmap import induced_structure, lift_hamiltonian, reduce_hamiltonian
from symred.polycore import (
    CompiledPolynomials,
    Polynomial,
    compile_jacobian,
    compile_polynomials,
)
from symred.polycore.numeric import JacobianEvaluator
from symred.releq.models import (
    EquilibriumResult,
    EquilibriumSearch,
    LeafExtremumResult,
    NotAnEquilibriumError,
    ReducedField,
    ResultFlag,
    Stability,
    StabilityVerdict,
)
from symred.releq.solver import SolveReport, levenberg_marquardt
from symred.semialg import ReducedSpace, membership, project_onto_relations, to_fraction
from symred.strata import StructurePreconditionError

DEDUPE_FLOOR = 1e-6
EQUILIBRIUM_TOL = 1e-8


def reduced_field(
    model: SymmetryModel, hred: Polynomial, degree_bound: int | None = None
) -> ReducedField:
    """X_H on the orbit space: component i is sum_j W_ij(v) dH/dv_j(v)."""
    structure = induced_structure(model, degree_bound)
    k = structure.size
    if hred.arity != k:
        raise ArityMismatchError(k, hred.arity, what="reduced Hamiltonian")
    gradient = hred.gradient()
    components = tuple(
        Polynomial.sum(
            k,
            (
                structure.entry(i, j) * gradient[j]
                for j in range(k)
                if not (gradient[j].is_zero or structure.entry(i, j).is_zero)
            ),
        )
        for i in range(k)
    )
    return ReducedField(
        names=structure.names,
        components=components,
        evaluator=compile_polynomials(components, k),
        jacobian=compile_jacobian(components, k),
    )


def _settings(
    seeds: int | None, tol: float | None, seed: int | None, max_iter: int | None
) -> tuple[int, float, int, int]:
    defaults = get_solver_settings()
    return (
        defaults.seeds if seeds is None else seeds,
        defaults.tol if tol is None else tol,
        defaults.seed if seed is None else seed,
        defaults.max_iter if max_iter is None else max_iter,
    )


def _seed_rngs(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _dedupe(results: list[EquilibriumResult], radius: float) -> list[EquilibriumResult]:
    kept: list[EquilibriumResult] = []
    for result in sorted(results, key=lambda r: (r.residual, r.seed_index)):
        image = np.asarray(result.image)
        limit = radius * (1.0 + float(np.linalg.norm(image)))
        if all(np.linalg.norm(image - np.asarray(other.image)) > limit for other in kept):
            kept.append(result)
    return sorted(kept, key=lambda r: tuple(round(value, 9) for value in r.image))


@dataclass(frozen=True)
class _Attempt:
    index: int
    report: SolveReport


def _multistart(
    residual: Callable[[np.ndarray], np.ndarray],
    jacobian: Callable[[np.ndarray], np.ndarray],
    starts: list[np.ndarray],
    tol: float,
    max_iter: int,
) -> list[_Attempt]:
    def attempt(item: tuple[int, np.ndarray]) -> _Attempt:
        index, start = item
        return _Attempt(index, levenberg_marquardt(residual, jacobian, start, tol, max_iter))

    with ThreadPoolExecutor(max_workers=get_thread_count()) as pool:
        attempts = list(pool.map(attempt, enumerate(starts)))
    for item in attempts:
        logger.debug(
            "Seed {}: residual {:.3e} after {} iterations",
            item.index,
            item.report.residual,
            item.report.iterations,
        )
    return attempts


def _search(
    accepted: list[EquilibriumResult], attempts: list[_Attempt], tol: float, note: str
) -> EquilibriumSearch:
    results = _dedupe(accepted, max(10 * tol, DEDUPE_FLOOR))
    best = min((item.report.residual for item in attempts), default=float("inf"))
    converged = sum(item.report.converged for item in attempts)
    if not results:
        logger.warning("No solution out of {} seeds (best residual {:.3e})", len(attempts), best)
    else:
        logger.info("{} distinct solutions from {} converged seeds", len(results), converged)
    return EquilibriumSearch(
        results=tuple(results),
        seeds=len(attempts),
        converged=converged,
        best_residual=best,
        note=None if results else note,
    )


def find_reduced_stationary(
    model: SymmetryModel,
    hred: Polynomial,
    rs: ReducedSpace,
    seeds: int | None = None,
    tol: float | None = None,
    seed: int | None = None,
    max_iter: int | None = None,
    degree_bound: int | None = None,
) -> EquilibriumSearch:
    """Multistart damped Newton on {reduced relations} and {W(v) grad H(v) = 0}."""
    n_seeds, tol, seed, max_iter = _settings(seeds, tol, seed, max_iter)
    field = reduced_field(model, hred, degree_bound)
    space = rs.as_set()
    k = space.ambient_dim
    relations = compile_polynomials(space.relations, k) if space.relations else None
    relation_jacobian = compile_jacobian(space.relations, k)

    def residual(v: np.ndarray) -> np.ndarray:
        parts = [field(v)]
        if relations is not None:
            parts.insert(0, relations(v))
        return np.concatenate(parts)

    def jacobian(v: np.ndarray) -> np.ndarray:
        return np.vstack([relation_jacobian(v), field.jacobian(v)])

    scale = max([1.0] + [abs(float(c.level)) for c in rs.constraints])
    starts = [rng.standard_normal(k) * scale for rng in _seed_rngs(seed, n_seeds)]
    attempts = _multistart(residual, jacobian, starts, tol, max_iter)

    flags = (ResultFlag.EVERYWHERE_STATIONARY,) if field.is_zero else ()
    accepted = []
    for item in attempts:
        v = item.report.x
        if not item.report.converged or not membership(space, v, 10 * tol).in_set:
            continue
        accepted.append(
            EquilibriumResult(
                point=tuple(float(value) for value in v),
                image=tuple(float(value) for value in v),
                residual=item.report.residual,
                flags=flags,
                iterations=item.report.iterations,
                seed_index=item.index,
            )
        )
    note = f"{ResultFlag.NON_CONVERGENCE}: no seed reached the reduced space"
    return _search(accepted, attempts, tol, note)


@dataclass(frozen=True)
class _FullSystem:
    n: int
    r: int
    poisson: np.ndarray
    grad_h: CompiledPolynomials
    hess_h: JacobianEvaluator
    dj: JacobianEvaluator
    hess_j: tuple[JacobianEvaluator, ...]
    values_j: CompiledPolynomials
    invariants: CompiledPolynomials

    def field_residual(self, x: np.ndarray, lam: np.ndarray) -> np.ndarray:
        return self.poisson @ (self.grad_h(x) - self.dj(x).T @ lam)

    def augmented_hessian(self, x: np.ndarray, lam: np.ndarray) -> np.ndarray:
        hessian = self.hess_h(x)
        for weight, hess in zip(lam, self.hess_j, strict=True):
            hessian = hessian - weight * hess(x)
        return hessian


def _full_system(model: SymmetryModel, spec: HamiltonianSpec) -> _FullSystem:
    if not model.structure.is_canonical:
        raise StructurePreconditionError(model.name, "a canonical (symplectic) structure")
    h = lift_hamiltonian(model, spec).expression
    n = model.dimension
    generators = model.generator_polys
    grad_h = h.gradient()
    return _FullSystem(
        n=n,
        r=len(generators),
        poisson=model.structure.evaluate(np.zeros(n)),
        grad_h=compile_polynomials(grad_h, n),
        hess_h=compile_jacobian(grad_h, n),
        dj=compile_jacobian(generators, n),
        hess_j=tuple(compile_jacobian(j.gradient(), n) for j in generators),
        values_j=compile_polynomials(generators, n),
        invariants=compile_polynomials(model.invariant_polys, n),
    )


def find_relative_equilibria(
    model: SymmetryModel,
    hamiltonian: HamiltonianSpec,
    mu: Sequence[object],
    seeds: int | None = None,
    tol: float | None = None,
    seed: int | None = None,
    max_iter: int | None = None,
) -> EquilibriumSearch:
    """Solve X_H(x) - sum_i lambda_i X_{J_i}(x) = 0, J(x) = mu for (x, lambda)."""
    model.require_verified()
    n_seeds, tol, seed, max_iter = _settings(seeds, tol, seed, max_iter)
    system = _full_system(model, hamiltonian)
    n, r = system.n, system.r
    level = np.array([float(to_fraction(value)) for value in mu])
    if level.shape != (r,):
        raise ArityMismatchError(r, len(level), what="momentum level")

    def residual(z: np.ndarray) -> np.ndarray:
        x, lam = z[:n], z[n:]
        return np.concatenate([system.field_residual(x, lam), system.values_j(x) - level])

    def jacobian(z: np.ndarray) -> np.ndarray:
        x, lam = z[:n], z[n:]
        dj = system.dj(x)
        poisson = system.poisson
        top = np.hstack([poisson @ system.augmented_hessian(x, lam), -poisson @ dj.T])
        bottom = np.hstack([dj, np.zeros((r, r))])
        return np.vstack([top, bottom])

    degree = max((g.degree for g in model.generator_polys), default=1)
    scale = max(1.0, float(np.max(np.abs(level), initial=0.0))) ** (1.0 / max(degree, 1))
    starts = [
        np.concatenate([rng.standard_normal(n) * scale, rng.standard_normal(r)])
        for rng in _seed_rngs(seed, n_seeds)
    ]
    attempts = _multistart(residual, jacobian, starts, tol, max_iter)

    accepted = []
    for item in attempts:
        if not item.report.converged:
            continue
        x, lam = item.report.x[:n], item.report.x[n:]
        accepted.append(
            EquilibriumResult(
                point=tuple(float(value) for value in x),
                image=tuple(float(value) for value in system.invariants(x)),
                residual=item.report.residual,
                multipliers=tuple(float(value) for value in lam),
                iterations=item.report.iterations,
                seed_index=item.index,
            )
        )
    note = (
        f"{ResultFlag.NON_CONVERGENCE}: no seed converged; mu may lie outside the momentum image"
    )
    return _search(accepted, attempts, tol, note)


def _verdict(spectrum: np.ndarray, tol: float) -> Stability:
    largest = float(np.max(np.abs(spectrum), initial=0.0))
    if largest == 0.0 or np.any(np.abs(spectrum) <= tol * largest):
        return Stability.DEGENERATE
    if np.all(spectrum > 0) or np.all(spectrum < 0):
        return Stability.FORMALLY_STABLE
    return Stability.INDEFINITE


def formal_stability(
    model: SymmetryModel,
    hamiltonian: HamiltonianSpec,
    x: Sequence[float] | np.ndarray,
    multipliers: Sequence[float] | np.ndarray,
    tol: float | None = None,
) -> StabilityVerdict:
    """Energy-momentum test: d^2(H - sum lambda_i J_i) restricted to ker dJ modulo the
    momentum-generated directions inside it."""
    model.require_verified()
    cutoff = get_rank_settings().tol if tol is None else tol
    system = _full_system(model, hamiltonian)
    point = np.asarray(x, dtype=float)
    lam = np.asarray(multipliers, dtype=float)
    if point.shape != (system.n,):
        raise ArityMismatchError(system.n, point.shape[-1] if point.ndim else 0)
    if lam.shape != (system.r,):
        raise ArityMismatchError(system.r, lam.shape[-1] if lam.ndim else 0, what="multipliers")

    field = system.field_residual(point, lam)
    size = max(1.0, float(np.max(np.abs(system.grad_h(point)), initial=0.0)))
    if float(np.max(np.abs(field), initial=0.0)) > EQUILIBRIUM_TOL * size:
        raise NotAnEquilibriumError(float(np.max(np.abs(field))), EQUILIBRIUM_TOL)

    dj = system.dj(point)
    kernel_basis = kernel(dj, cutoff)
    orbit_fields = system.poisson @ dj.T
    neutral = subspace_intersection(orbit_fields, kernel_basis, cutoff)
    test_space = complement_within(kernel_basis, neutral, cutoff)
    dims = {"kernel_dim": kernel_basis.shape[1], "neutral_dim": neutral.shape[1]}

    rank_dj = numerical_rank(dj, cutoff)
    if rank_dj < system.r:
        return StabilityVerdict(
            Stability.DEGENERATE,
            (),
            test_space.shape[1],
            diagnostics=f"dJ has rank {rank_dj} < {system.r}: mu is not a regular value here",
            **dims,
        )
    if test_space.shape[1] == 0:
        return StabilityVerdict(
            Stability.DEGENERATE, (), 0, diagnostics="test subspace is empty", **dims
        )
    hessian = system.augmented_hessian(point, lam)
    projected = test_space.T @ hessian @ test_space
    spectrum = scipy.linalg.eigvalsh(0.5 * (projected + projected.T))
    verdict = _verdict(spectrum, cutoff)
    logger.debug("Projected spectrum {} -> {}", spectrum, verdict)
    return StabilityVerdict(
        verdict, tuple(float(value) for value in spectrum), test_space.shape[1], **dims
    )


def classify_equilibria(
    model: SymmetryModel,
    hamiltonian: HamiltonianSpec,
    search: EquilibriumSearch,
    tol: float | None = None,
) -> EquilibriumSearch:
    """Attach formal-stability verdicts to every result of a full-space search."""
    results = tuple(
        result.with_verdict(
            formal_stability(model, hamiltonian, result.point, result.multipliers, tol)
        )
        for result in search.results
    )
    return replace(search, results=results)


def leaf_extremum_check(
    model: SymmetryModel,
    hred: Polynomial,
    rs: ReducedSpace,
    v: Sequence[float] | np.ndarray,
    radius: float = 0.05,
    n_samples: int = 2000,
    seed: int = 0,
) -> LeafExtremumResult:
    """Sample the reduced space near v and compare H~ against its value at v."""
    space = rs.as_set()
    if hred.arity != space.ambient_dim:
        raise ArityMismatchError(space.ambient_dim, hred.arity, what="reduced Hamiltonian")
    centre = np.asarray(v, dtype=float)
    evaluate = compile_polynomials([hred], space.ambient_dim)
    reference = float(evaluate(centre)[0])
    rng = np.random.default_rng(seed)
    deltas = []
    for offset in rng.standard_normal((n_samples, space.ambient_dim)) * radius:
        w = project_onto_relations(space, centre + offset) if space.relations else centre + offset
        distance = float(np.linalg.norm(w - centre))
        if not 1e-9 < distance <= 2 * radius:
            continue
        if not membership(space, w, 1e-8).in_set:
            continue
        deltas.append(float(evaluate(w)[0]) - reference)
    if not deltas:
        return LeafExtremumResult(False, False, 0, 0.0, 0.0, radius)
    values = np.array(deltas)
    slack = 1e-12 * max(1.0, abs(reference))
    return LeafExtremumResult(
        is_local_min=bool(np.all(values >= -slack)),
        is_local_max=bool(np.all(values <= slack)),
        samples_used=len(deltas),
        min_delta=float(values.min()),
        max_delta=float(values.max()),
        radius=radius,
    )


def reduced_hamiltonian_for(model: SymmetryModel, spec: HamiltonianSpec) -> Polynomial:
    """H~ in invariant coordinates for either frame."""
    return reduce_hamiltonian(model, spec).expression
