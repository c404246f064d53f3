"""Damped Gauss-Newton (Levenberg-Marquardt) for small square or rectangular systems."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

Residual = Callable[[np.ndarray], np.ndarray]
Jacobian = Callable[[np.ndarray], np.ndarray]

LAMBDA_START = 1e-3
LAMBDA_MAX = 1e12


@dataclass(frozen=True)
class SolveReport:
    x: np.ndarray
    residual: float
    iterations: int
    converged: bool


def levenberg_marquardt(
    residual: Residual, jacobian: Jacobian, x0: np.ndarray, tol: float, max_iter: int
) -> SolveReport:
    """Minimise |F(x)|^2; converged when max |F_i| <= tol.

    The damping term lam * (diag(J^T J) + I) keeps the step defined on rank-deficient
    systems such as those with a continuous family of solutions.
    """
    x = np.array(x0, dtype=float)
    values = residual(x)
    norm = float(values @ values)
    lam = LAMBDA_START
    iterations = 0
    while iterations < max_iter and float(np.max(np.abs(values), initial=0.0)) > tol:
        iterations += 1
        jac = jacobian(x)
        jtj = jac.T @ jac
        gradient = jac.T @ values
        damping = np.diag(np.diag(jtj)) + np.eye(len(x))
        while lam < LAMBDA_MAX:
            try:
                step = np.linalg.solve(jtj + lam * damping, gradient)
            except np.linalg.LinAlgError:
                lam *= 4
                continue
            candidate = x - step
            trial = residual(candidate)
            trial_norm = float(trial @ trial)
            if np.isfinite(trial_norm) and trial_norm < norm:
                x, values, norm = candidate, trial, trial_norm
                lam = max(lam / 3, 1e-15)
                break
            lam *= 4
        else:
            break
    max_residual = float(np.max(np.abs(values), initial=0.0))
    return SolveReport(
        x=x, residual=max_residual, iterations=iterations, converged=max_residual <= tol
    )
