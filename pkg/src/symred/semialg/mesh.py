"""Grid sampling of two-dimensional semi-algebraic surfaces."""

from __future__ import annotations

from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from loguru import logger

from symred.config import get_thread_count
from symred.polycore import Polynomial, compile_polynomials
from symred.semialg.models import Chart, ChartError, Mesh, SemiAlgebraicSet, Window
from symred.semialg.service import MEMBERSHIP_TOL, membership

EMPTY_FLAG = "relation has no real root in window"
ROOT_IMAG_TOL = 1e-7
NEWTON_STEPS = 20

_Node = list[np.ndarray | None]


def _unit(arity: int, var: int) -> tuple[int, ...]:
    return tuple(1 if i == var else 0 for i in range(arity))


def reduce_to_chart(
    s: SemiAlgebraicSet, chart: Chart
) -> tuple[Polynomial, dict[int, Polynomial]]:
    """Eliminate every coordinate outside the chart through a linear relation.

    Returns the single remaining relation (in the chart coordinates) and expressions of
    the eliminated coordinates in the chart coordinates.
    """
    k = s.ambient_dim
    in_chart = {*chart.free, chart.solved}
    if max(in_chart) >= k:
        raise ChartError(f"chart {chart.to_text()} exceeds {k} coordinates")
    relations = list(s.relations)
    eliminated: dict[int, Polynomial] = {}
    for var in (i for i in range(k) if i not in in_chart):
        for index, relation in enumerate(relations):
            coefficient = relation.coefficient(_unit(k, var))
            if relation.degree == 1 and coefficient:
                expression = Polynomial.variable(k, var) - relation.scale(1 / coefficient)
                relations.pop(index)
                relations = [r.substitute(var, expression) for r in relations]
                eliminated = {v: e.substitute(var, expression) for v, e in eliminated.items()}
                eliminated[var] = expression
                break
        else:
            raise ChartError(f"coordinate {s.names[var]} is not fixed by a linear relation")
    remaining = [r for r in relations if not r.is_zero]
    if any(r.is_constant for r in remaining):
        raise ChartError("linear relations are inconsistent")
    if len(remaining) != 1:
        raise ChartError(f"chart leaves {len(remaining)} relations, expected exactly one")
    relation = remaining[0]
    if chart.solved not in relation.variables_used():
        raise ChartError(f"remaining relation does not involve {s.names[chart.solved]}")
    return relation, eliminated


def _real_roots(ascending: np.ndarray) -> list[float]:
    scale = float(np.max(np.abs(ascending))) if ascending.size else 0.0
    if scale == 0.0:
        return []
    coefficients = ascending[::-1]
    significant = np.nonzero(np.abs(coefficients) > 1e-14 * scale)[0]
    coefficients = coefficients[significant[0] :]
    if coefficients.size < 2:
        return []
    roots = sorted(
        float(root.real)
        for root in np.roots(coefficients)
        if abs(root.imag) <= ROOT_IMAG_TOL * (1.0 + abs(root))
    )
    merged: list[list[float]] = []
    for root in roots:
        if merged and abs(root - merged[-1][-1]) <= ROOT_IMAG_TOL * (1.0 + abs(root)):
            merged[-1].append(root)
        else:
            merged.append([root])
    derivative = np.polyder(coefficients)
    polished = []
    for group in merged:
        t = float(np.mean(group))
        if len(group) == 1:
            for _ in range(NEWTON_STEPS):
                slope = np.polyval(derivative, t)
                if abs(slope) <= 1e-12 * scale:
                    break
                step = np.polyval(coefficients, t) / slope
                t -= step
                if abs(step) <= 1e-15 * (1.0 + abs(t)):
                    break
        polished.append(t)
    return polished


def sample_surface(
    s: SemiAlgebraicSet,
    chart: Chart,
    window: Window,
    grid: int,
    tol: float = MEMBERSHIP_TOL,
) -> Mesh:
    """Solve the chart relation along the solved axis at every grid node and triangulate.

    Roots at a node are ordered into sheets; a cell is triangulated sheet by sheet when
    its four corners carry the same number of roots.
    """
    if grid < 1:
        raise ChartError("grid must be at least 1")
    (a, b), (c, d) = window
    if not (a < b and c < d):
        raise ChartError(f"window {window} is not well ordered")
    relation, eliminated = reduce_to_chart(s, chart)
    k = s.ambient_dim
    first, second = chart.free
    us = np.linspace(a, b, grid + 1)
    ws = np.linspace(c, d, grid + 1)

    def solve_row(u: float) -> list[_Node]:
        row = []
        for w in ws:
            base = np.zeros(k)
            base[first], base[second] = u, w
            node: _Node = []
            for root in _real_roots(relation.restrict_to_axis(base, chart.solved)):
                vertex = base.copy()
                vertex[chart.solved] = root
                for var, expression in eliminated.items():
                    vertex[var] = expression.evaluate(vertex)
                node.append(vertex if membership(s, vertex, tol).in_set else None)
            row.append(node)
        return row

    with ThreadPoolExecutor(max_workers=get_thread_count()) as pool:
        nodes = list(pool.map(solve_row, us))

    ids: dict[tuple[int, int, int], int] = {}
    vertices = []
    for i, row in enumerate(nodes):
        for j, node in enumerate(row):
            for sheet, vertex in enumerate(node):
                if vertex is not None:
                    ids[(i, j, sheet)] = len(vertices)
                    vertices.append(vertex)

    triangles = []
    for i in range(grid):
        for j in range(grid):
            corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            counts = {len(nodes[p][q]) for p, q in corners}
            if len(counts) != 1:
                continue
            for sheet in range(counts.pop()):
                quad = [ids.get((p, q, sheet)) for p, q in corners]
                if quad[0] is not None and quad[1] is not None and quad[2] is not None:
                    triangles.append((quad[0], quad[1], quad[2]))
                if quad[0] is not None and quad[2] is not None and quad[3] is not None:
                    triangles.append((quad[0], quad[2], quad[3]))

    vertex_array = np.array(vertices, dtype=float).reshape(len(vertices), k)
    residual_max = 0.0
    if vertices and s.relations:
        residuals = compile_polynomials(s.relations, k)(vertex_array)
        residual_max = float(np.max(np.abs(residuals)))
    flagged = None
    if not vertices:
        flagged = EMPTY_FLAG
        logger.warning("Chart {} produced no vertices in window {}", chart.to_text(), window)
    else:
        logger.info(
            "Sampled {} vertices and {} triangles (residual {:.2e})",
            len(vertices),
            len(triangles),
            residual_max,
        )
    return Mesh(
        vertices=vertex_array,
        triangles=np.array(triangles, dtype=np.int64).reshape(len(triangles), 3),
        residual_max=residual_max,
        flagged=flagged,
    )


def mesh_document(mesh: Mesh, provenance: Mapping[str, object]) -> dict[str, object]:
    return {"provenance": dict(provenance), **mesh.to_dict()}
