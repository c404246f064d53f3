from __future__ import annotations

import dataclasses
from fractions import Fraction

import numpy as np
from loguru import logger

from symred.model.models import (
    CasimirCheck,
    InequalityReport,
    InvarianceReport,
    ModelReport,
    NotClosed,
    PairCheck,
    RelationCheck,
    RelationReport,
    StructureConstants,
    SymmetryModel,
)
from symred.polycore import (
    Polynomial,
    bracket,
    compile_polynomials,
    solve_combination,
    structure_jacobi_defects,
)


def verify_invariance(model: SymmetryModel) -> InvarianceReport:
    """Exact {rho_i, J_j} for every invariant/generator pair."""
    checks = []
    for invariant in model.invariants:
        for generator in model.generators:
            residual = bracket(invariant.poly, generator.poly, model.structure)
            checks.append(PairCheck(invariant.name, generator.name, residual))
    return InvarianceReport(tuple(checks))


def verify_relations(model: SymmetryModel) -> RelationReport:
    """Pull every relation back through the orbit map; each must vanish identically."""
    images = model.invariant_polys
    checks = tuple(
        RelationCheck(index, relation, relation.compose(images))
        for index, relation in enumerate(model.relations)
    )
    return RelationReport(checks)


def generator_structure_constants(model: SymmetryModel) -> StructureConstants | NotClosed:
    """Solve {J_i, J_j} = c_0 + sum_k c_k J_k exactly over the monomial support."""
    n = model.dimension
    generators = model.generator_polys
    candidates = [Polynomial.constant(n, 1), *generators]
    constants: dict[tuple[int, int], tuple[Fraction, ...]] = {}
    for i in range(len(generators)):
        for j in range(i + 1, len(generators)):
            value = bracket(generators[i], generators[j], model.structure)
            solution = solve_combination(value, candidates)
            if solution is None:
                return NotClosed((i, j), value)
            constants[(i, j)] = solution
    return StructureConstants(constants)


def check_inequalities(
    model: SymmetryModel, n_samples: int = 1000, seed: int = 0, tol: float = 1e-9
) -> InequalityReport:
    """Evaluate every inequality on the images of standard-normal phase points."""
    if not model.inequalities:
        return InequalityReport(samples=0, minima=(), tol=tol)
    if model.is_orbit_space_model:
        # The inequalities cut the declared domain here; there is no phase space to sample.
        return InequalityReport(samples=0, minima=(), tol=tol, skipped="orbit-space model")
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((n_samples, model.dimension))
    images = compile_polynomials(model.invariant_polys, model.dimension)(points)
    values = compile_polynomials(model.inequalities, len(model.invariants))(images)
    scale = np.maximum(1.0, np.abs(images).max(axis=1, initial=0.0)) ** max(
        p.degree for p in model.inequalities
    )
    minima = tuple(float(v) for v in (values / scale[:, None]).min(axis=0))
    return InequalityReport(samples=n_samples, minima=minima, tol=tol)


def verify_model(model: SymmetryModel, degree_bound: int | None = None) -> ModelReport:
    """Run every symbolic check; the returned report holds the model marked as verified
    when invariance and relations pass."""
    # orbitmap builds on this package, so its Casimir check is imported late.
    from symred.orbitmap.service import RewriteBoundExceededError, casimir_check

    def run_casimir_check(candidate: Polynomial) -> CasimirCheck:
        try:
            return casimir_check(verified, candidate, bound)
        except RewriteBoundExceededError as err:
            return CasimirCheck(candidate, (), error=str(err))

    bound = degree_bound or model.degree_bound
    invariance = verify_invariance(model)
    relations = verify_relations(model)
    defects = structure_jacobi_defects(model.structure)
    constants = generator_structure_constants(model)
    inequalities = check_inequalities(model)
    if not inequalities.passed:
        logger.warning("Model {} violates its inequalities on sampled points", model.name)

    verified = model
    if invariance.passed and relations.passed:
        verified = dataclasses.replace(model, verified=True)
    else:
        logger.warning(
            "Model {} failed verification ({} invariance failures, {} relation failures)",
            model.name,
            len(invariance.failures),
            sum(not check.passed for check in relations.checks),
        )

    casimirs: tuple[CasimirCheck, ...] = ()
    leaf: tuple[CasimirCheck, ...] = ()
    if verified.verified:
        casimirs = tuple(run_casimir_check(c) for c in verified.casimirs)
        leaf = tuple(run_casimir_check(c) for c in verified.leaf_relations)
    report = ModelReport(
        model=verified,
        invariance=invariance,
        relations=relations,
        jacobi_defects=defects,
        casimirs=casimirs,
        leaf_relations=leaf,
        generator_constants=constants,
        degree_bound=bound,
        inequalities=inequalities,
    )
    logger.info("Verified model {}: passed={}", model.name, report.passed)
    return report
