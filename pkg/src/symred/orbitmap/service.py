from __future__ import annotations

import itertools
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache

import numpy as np
from loguru import logger

from symred.config import get_thread_count
from symred.errors import ArityMismatchError
from symred.model.models import CasimirCheck, Frame, HamiltonianSpec, SymmetryModel
from symred.orbitmap.models import InducedStructure, NotExpressible, RewriteBoundExceededError
from symred.polycore import (
    EchelonBasis,
    PoissonStructure,
    Polynomial,
    bracket,
    compile_jacobian,
    compile_polynomials,
)
from symred.polycore.models import Exponent, graded_lex_key

__all__ = [
    "RewriteBoundExceededError",
    "casimir_check",
    "express_in_invariants",
    "induced_bracket",
    "induced_structure",
    "induced_structure_document",
    "lift_hamiltonian",
    "orbit_eval",
    "orbit_eval_exact",
    "orbit_jacobian",
    "pullback",
    "reduce_hamiltonian",
]


def _check_point(model: SymmetryModel, x: Sequence | np.ndarray) -> None:
    if len(x) != model.dimension:
        raise ArityMismatchError(model.dimension, len(x))


def orbit_eval(model: SymmetryModel, x: Sequence[float] | np.ndarray) -> np.ndarray:
    _check_point(model, x)
    return compile_polynomials(model.invariant_polys, model.dimension)(x)


def orbit_eval_exact(model: SymmetryModel, x: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
    _check_point(model, x)
    return tuple(poly.evaluate_exact(x) for poly in model.invariant_polys)


def orbit_jacobian(model: SymmetryModel, x: Sequence[float] | np.ndarray) -> np.ndarray:
    """Rows are grad(rho_i)(x)."""
    _check_point(model, x)
    return compile_jacobian(model.invariant_polys, model.dimension)(x)


def pullback(model: SymmetryModel, q: Polynomial) -> Polynomial:
    """q(rho_1(x), ..., rho_k(x))."""
    return q.compose(model.invariant_polys)


@lru_cache(maxsize=8192)
def _monomial_pullback(invariants: tuple[Polynomial, ...], exponent: Exponent) -> Polynomial:
    for index, power in enumerate(exponent):
        if power:
            lowered = exponent[:index] + (power - 1,) + exponent[index + 1 :]
            return _monomial_pullback(invariants, lowered) * invariants[index]
    return Polynomial.constant(invariants[0].arity, 1)


def _candidate_exponents(
    invariants: Sequence[Polynomial], target: Polynomial, degree_bound: int
) -> list[Exponent]:
    k = len(invariants)
    weights = [poly.degree for poly in invariants]
    graded = all(poly.is_homogeneous and poly.degree > 0 for poly in invariants)
    wanted = target.term_degrees()
    candidates = []
    for total in range(degree_bound + 1):
        for combo in itertools.combinations_with_replacement(range(k), total):
            exponent = [0] * k
            for index in combo:
                exponent[index] += 1
            if graded and sum(w * e for w, e in zip(weights, exponent, strict=True)) not in wanted:
                continue
            candidates.append(tuple(exponent))
    candidates.sort(key=graded_lex_key)
    return candidates


def _rewrite(
    invariants: tuple[Polynomial, ...], target: Polynomial, degree_bound: int
) -> Polynomial | NotExpressible:
    k = len(invariants)
    if target.is_zero:
        return Polynomial.zero(k)
    candidates = _candidate_exponents(invariants, target, degree_bound)
    basis = EchelonBasis()
    for index, exponent in enumerate(candidates):
        basis.insert(index, _monomial_pullback(invariants, exponent).terms)
    residual, combination = basis.reduce(target.terms)
    if residual:
        return NotExpressible(degree_bound=degree_bound, residual_terms=len(residual))
    return Polynomial(k, {candidates[index]: coeff for index, coeff in combination.items()})


def express_in_invariants(
    model: SymmetryModel, p: Polynomial, degree_bound: int
) -> Polynomial | NotExpressible:
    """Find q of total degree <= degree_bound with q(rho(x)) = p(x) exactly.

    Candidates are invariant monomials in ascending graded-lex order; a candidate whose
    pullback depends on earlier ones receives coefficient zero, which fixes one
    representative modulo the relations.
    """
    model.require_verified()
    if degree_bound < 1:
        raise ValueError("degree_bound must be at least 1")
    if p.arity != model.dimension:
        raise ArityMismatchError(model.dimension, p.arity, what="polynomial")
    return _rewrite(model.invariant_polys, p, degree_bound)


@lru_cache(maxsize=64)
def _induced_entries(
    structure: PoissonStructure, invariants: tuple[Polynomial, ...], degree_bound: int
) -> tuple[tuple[Polynomial, ...], ...]:
    k = len(invariants)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]

    def rewrite_pair(pair: tuple[int, int]) -> Polynomial | NotExpressible:
        i, j = pair
        return _rewrite(invariants, bracket(invariants[i], invariants[j], structure), degree_bound)

    with ThreadPoolExecutor(max_workers=get_thread_count()) as pool:
        results = list(pool.map(rewrite_pair, pairs))

    entries = [[Polynomial.zero(k) for _ in range(k)] for _ in range(k)]
    for (i, j), result in zip(pairs, results, strict=True):
        if isinstance(result, NotExpressible):
            raise RewriteBoundExceededError(degree_bound, pair=(i, j))
        entries[i][j] = result
        entries[j][i] = -result
    return tuple(tuple(row) for row in entries)


def induced_structure(model: SymmetryModel, degree_bound: int | None = None) -> InducedStructure:
    """W_ij = {rho_i, rho_j} rewritten in the invariants."""
    model.require_verified()
    bound = degree_bound or model.degree_bound
    entries = _induced_entries(model.structure, model.invariant_polys, bound)
    logger.debug("Induced structure for {} at bound {} computed", model.name, bound)
    return InducedStructure(names=model.invariant_names, entries=entries, degree_bound=bound)


def induced_bracket(structure: InducedStructure, f: Polynomial, g: Polynomial) -> Polynomial:
    """{f, g}_W for polynomials in the invariant names."""
    grad_f = f.gradient()
    grad_g = g.gradient()
    terms = [
        grad_f[i] * structure.entry(i, j) * grad_g[j]
        for i in range(structure.size)
        for j in range(structure.size)
        if not (grad_f[i].is_zero or grad_g[j].is_zero or structure.entry(i, j).is_zero)
    ]
    return Polynomial.sum(structure.size, terms)


def casimir_check(
    model: SymmetryModel, candidate: Polynomial, degree_bound: int | None = None
) -> CasimirCheck:
    """Pull back {C, v_i}_W for every invariant coordinate v_i; all must vanish."""
    structure = induced_structure(model, degree_bound)
    k = structure.size
    if candidate.arity != k:
        raise ArityMismatchError(k, candidate.arity, what="candidate")
    residuals = []
    for i, name in enumerate(structure.names):
        value = induced_bracket(structure, candidate, Polynomial.variable(k, i))
        residuals.append((name, pullback(model, value)))
    return CasimirCheck(candidate=candidate, residuals=tuple(residuals))


def lift_hamiltonian(model: SymmetryModel, spec: HamiltonianSpec) -> HamiltonianSpec:
    if spec.frame is Frame.FULL:
        return spec
    return HamiltonianSpec(pullback(model, spec.expression), Frame.FULL)


def reduce_hamiltonian(
    model: SymmetryModel, spec: HamiltonianSpec, degree_bound: int | None = None
) -> HamiltonianSpec:
    """Rewrite a phase-space Hamiltonian as H~ with H = H~ o rho."""
    if spec.frame is Frame.INVARIANT:
        return spec
    bound = degree_bound or max(model.degree_bound, spec.expression.degree)
    result = express_in_invariants(model, spec.expression, bound)
    if isinstance(result, NotExpressible):
        raise RewriteBoundExceededError(bound, what="Hamiltonian")
    return HamiltonianSpec(result, Frame.INVARIANT)


def induced_structure_document(
    structure: InducedStructure, model: SymmetryModel | None = None
) -> dict[str, object]:
    document: dict[str, object] = {}
    if model is not None:
        document["model"] = model.name
        document["parameters"] = dict(model.parameters)
    document.update(structure.to_dict())
    return document
