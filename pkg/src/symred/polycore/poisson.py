"""Poisson brackets and Hamiltonian vector fields.

Convention: ``{f, g} = grad(f)^T W grad(g)`` and ``X_f = W grad(f)``, with ``W`` the
structure matrix exactly as declared by the model.
"""

from __future__ import annotations

from itertools import combinations

from symred.errors import ArityMismatchError
from symred.polycore.models import CanonicalStructure, Polynomial, PoissonStructure


def _check_arity(structure: PoissonStructure, *polys: Polynomial) -> None:
    for poly in polys:
        if poly.arity != structure.arity:
            raise ArityMismatchError(structure.arity, poly.arity, what="polynomial")


def bracket(f: Polynomial, g: Polynomial, structure: PoissonStructure) -> Polynomial:
    _check_arity(structure, f, g)
    arity = structure.arity
    if isinstance(structure, CanonicalStructure):
        n = structure.pairs
        terms = []
        for i in range(n):
            terms.append(f.diff(i) * g.diff(i + n))
            terms.append(-(f.diff(i + n) * g.diff(i)))
        return Polynomial.sum(arity, terms)

    grad_f = f.gradient()
    grad_g = g.gradient()
    terms = []
    for i, df in enumerate(grad_f):
        if df.is_zero:
            continue
        for j, dg in enumerate(grad_g):
            entry = structure.entry(i, j)
            if dg.is_zero or entry.is_zero:
                continue
            terms.append(df * entry * dg)
    return Polynomial.sum(arity, terms)


def hamiltonian_field(f: Polynomial, structure: PoissonStructure) -> tuple[Polynomial, ...]:
    """Components of ``X_f = W grad(f)``, one per variable."""
    _check_arity(structure, f)
    arity = structure.arity
    grad_f = f.gradient()
    if isinstance(structure, CanonicalStructure):
        n = structure.pairs
        return tuple(grad_f[i + n] for i in range(n)) + tuple(-grad_f[i] for i in range(n))
    return tuple(
        Polynomial.sum(
            arity,
            (structure.entry(i, j) * grad_f[j] for j in range(arity) if not grad_f[j].is_zero),
        )
        for i in range(arity)
    )


def jacobiator(
    f: Polynomial, g: Polynomial, h: Polynomial, structure: PoissonStructure
) -> Polynomial:
    """Cyclic sum {f,{g,h}} + {g,{h,f}} + {h,{f,g}}."""
    return (
        bracket(f, bracket(g, h, structure), structure)
        + bracket(g, bracket(h, f, structure), structure)
        + bracket(h, bracket(f, g, structure), structure)
    )


def structure_jacobi_defects(structure: PoissonStructure) -> dict[tuple[int, int, int], Polynomial]:
    """Non-zero jacobiators over coordinate triples; empty means the structure is Poisson."""
    if isinstance(structure, CanonicalStructure):
        return {}
    arity = structure.arity
    coords = [Polynomial.variable(arity, i) for i in range(arity)]
    defects: dict[tuple[int, int, int], Polynomial] = {}
    for i, j, k in combinations(range(arity), 3):
        value = jacobiator(coords[i], coords[j], coords[k], structure)
        if not value.is_zero:
            defects[(i, j, k)] = value
    return defects
