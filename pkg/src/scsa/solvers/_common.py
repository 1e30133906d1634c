from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

STEP_SAFETY = 0.99


@dataclass(frozen=True)
class SolverResult:
    """Output of every recovery routine.

    ``objective_trace`` holds the routine's objective after each iteration
    (preceded by its value at the starting point); for continuation methods
    ``sigma_trace`` gives the sigma each trace entry was evaluated at.
    """

    x_hat: np.ndarray
    outer_iters: int
    inner_iters_total: int
    objective_trace: tuple = ()
    wall_time: float = 0.0
    converged: bool = True
    message: str = "converged"
    sigma_trace: tuple = field(default=(), repr=False)


def rel_change(x, x_prev) -> float:
    """``||x - x_prev|| / ||x_prev||``; 0 when both vanish, inf when only ``x_prev`` does."""
    num = float(np.linalg.norm(x - x_prev))
    den = float(np.linalg.norm(x_prev))
    if den == 0.0:
        return 0.0 if num == 0.0 else float("inf")
    return num / den


def ist_step(lmax: float) -> float:
    """Step size for gradient steps on ``||Ax - b||^2`` (gradient Lipschitz ``2 lmax``)."""
    return STEP_SAFETY / (2.0 * lmax)


def scsa_step(lmax: float, lam: float, sigma: float) -> float:
    """Step size for the exponential penalty with ``lambda_sigma = lam * sigma``."""
    return STEP_SAFETY / (2.0 * lmax + lam / sigma)


def check_system(A, b):
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise ValueError(f"incompatible shapes A{A.shape}, b{b.shape}")
    return A, b
