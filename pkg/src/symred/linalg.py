"""Numerical rank and subspace helpers shared by the numeric modules."""

from __future__ import annotations

import numpy as np
import scipy.linalg


def singular_values(matrix: np.ndarray) -> np.ndarray:
    values = np.asarray(matrix, dtype=float)
    if values.size == 0:
        return np.zeros(0)
    return scipy.linalg.svdvals(values)


def numerical_rank(matrix: np.ndarray, tol: float = 1e-9, floor: float = 0.0) -> int:
    """Count singular values above ``tol * max(sigma_max, floor)``.

    With the default ``floor`` the cutoff is purely relative; a positive floor makes
    nearly vanishing matrices count as rank zero.
    """
    values = singular_values(matrix)
    if values.size == 0:
        return 0
    cutoff = tol * max(float(values[0]), floor)
    return int(np.count_nonzero(values > cutoff))


def kernel(matrix: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the right null space."""
    values = np.asarray(matrix, dtype=float)
    n = values.shape[1]
    if values.shape[0] == 0 or not np.any(values):
        return np.eye(n)
    return scipy.linalg.null_space(values, rcond=tol)


def column_span(matrix: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the column space."""
    values = np.asarray(matrix, dtype=float)
    if values.shape[1] == 0 or not np.any(values):
        return np.zeros((values.shape[0], 0))
    return scipy.linalg.orth(values, rcond=tol)


def subspace_intersection(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of span(a) intersected with span(b); inputs are column bases."""
    qa = column_span(a, tol)
    qb = column_span(b, tol)
    if qa.shape[1] == 0 or qb.shape[1] == 0:
        return np.zeros((qa.shape[0], 0))
    coefficients = scipy.linalg.null_space(np.hstack([qa, -qb]), rcond=tol)
    if coefficients.shape[1] == 0:
        return np.zeros((qa.shape[0], 0))
    return column_span(qa @ coefficients[: qa.shape[1]], tol)


def complement_within(space: np.ndarray, removed: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the part of ``space`` orthogonal to ``removed``."""
    if removed.shape[1] == 0:
        return space
    projected = space - removed @ (removed.T @ space)
    return column_span(projected, tol) if projected.size else projected
