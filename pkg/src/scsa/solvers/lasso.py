"""Iterative-thresholding solvers for l1 and other separable penalties.

All of them minimize ``lam * pen(x) + ||A x - b||^2`` by repeating
``x <- prox(x - mu * grad)`` with ``grad = 2 A^T (A x - b)`` and stop once
the relative change of ``x`` drops to ``tol``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from ..linalg import gram_spectral_norm, inv_norm_cdf
from ..prox import generalized_soft_p, log_prox, soft
from ._common import SolverResult, check_system, ist_step, rel_change

__all__ = [
    "LassoParams",
    "lasso_lambda",
    "lasso_objective",
    "ist_lasso",
    "fista_lasso",
    "ist_p",
    "ilt",
    "fista_momentum",
]


def lasso_lambda(sigma_w: float, m: int, c_r: float = 1.05, alpha_r: float = 0.5) -> float:
    """Noise-calibrated LASSO weight ``2 c_r sigma_w Phi^{-1}(1 - alpha_r / (2m))``."""
    if not (sigma_w > 0 and m > 0 and c_r > 0 and 0 < alpha_r < 1):
        raise ValueError("lasso_lambda needs sigma_w, m, c_r > 0 and 0 < alpha_r < 1")
    return 2.0 * c_r * sigma_w * inv_norm_cdf(1.0 - alpha_r / (2.0 * m))


@dataclass(frozen=True)
class LassoParams:
    lam: float
    mu: float

    def __post_init__(self):
        if not self.lam >= 0 or not self.mu > 0:
            raise ValueError("need lam >= 0 and mu > 0")

    @classmethod
    def for_matrix(cls, A, lam: float, lmax: float | None = None) -> "LassoParams":
        """Use the fixed step ``0.99 / (2 lambda_max(A^T A))``."""
        if lmax is None:
            lmax = gram_spectral_norm(A)
        return cls(lam=lam, mu=ist_step(lmax))


def lasso_objective(A, b, x, lam: float) -> float:
    r = A @ x - b
    return float(lam * np.abs(x).sum() + r @ r)


def fista_momentum(t: float) -> float:
    """Next FISTA momentum parameter ``(1 + sqrt(1 + 4 t^2)) / 2``."""
    return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))


def _threshold_loop(A, b, x0, mu, prox, penalty, tol, max_iter):
    A, b = check_system(A, b)
    start = time.perf_counter()
    x = np.zeros(A.shape[1]) if x0 is None else np.array(x0, dtype=float)
    r = A @ x - b
    trace = [penalty(x) + r @ r]
    converged = False
    k = 0
    for k in range(1, max_iter + 1):
        x_new = prox(x - 2.0 * mu * (A.T @ r))
        r = A @ x_new - b
        trace.append(penalty(x_new) + r @ r)
        d = rel_change(x_new, x)
        x = x_new
        if d <= tol:
            converged = True
            break
    return SolverResult(
        x_hat=x, outer_iters=k, inner_iters_total=k, objective_trace=tuple(map(float, trace)),
        wall_time=time.perf_counter() - start, converged=converged,
        message="converged" if converged else "max_iter",
    )


def ist_lasso(A, b, params: LassoParams, tol: float = 1e-4, max_iter: int = 20_000,
              x0=None) -> SolverResult:
    """Iterative soft thresholding for ``lam ||x||_1 + ||A x - b||^2``."""
    lam, mu = params.lam, params.mu
    return _threshold_loop(
        A, b, x0, mu,
        prox=lambda v: soft(v, lam * mu),
        penalty=lambda x: lam * np.abs(x).sum(),
        tol=tol, max_iter=max_iter,
    )


def ist_p(A, b, lam: float, p: float, mu: float, tol: float = 1e-4,
          max_iter: int = 20_000, x0=None) -> SolverResult:
    """IST with the generalized soft threshold ``max(|v| - lam mu |v|^(p-1), 0)``.

    The recorded objective is ``lam sum |x_i|^p + ||A x - b||^2``.
    """
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    return _threshold_loop(
        A, b, x0, mu,
        prox=lambda v: generalized_soft_p(v, lam * mu, p),
        penalty=lambda x: lam * np.sum(np.abs(x) ** p),
        tol=tol, max_iter=max_iter,
    )


def ilt(A, b, lam: float, beta: float, mu: float, tol: float = 1e-4,
        max_iter: int = 20_000, x0=None) -> SolverResult:
    """Iterative log thresholding for ``lam sum log(|x_i| + beta) + ||A x - b||^2``."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    if lam == 0:
        prox = lambda v: v  # noqa: E731
    else:
        prox = lambda v: log_prox(v, lam * mu, beta)  # noqa: E731
    return _threshold_loop(
        A, b, x0, mu, prox=prox,
        penalty=lambda x: lam * np.sum(np.log(np.abs(x) + beta)),
        tol=tol, max_iter=max_iter,
    )


def accelerated_threshold(A, b, x0, mu, prox, penalty, tol, max_iter):
    """FISTA-type loop shared by :func:`fista_lasso` and the SCSA inner solver.

    Tracks ``A x_k`` and ``A y_k`` by linear combination so that each
    iteration costs two matrix-vector products including the objective.
    """
    A, b = check_system(A, b)
    start = time.perf_counter()
    x_prev = np.zeros(A.shape[1]) if x0 is None else np.array(x0, dtype=float)
    Ax_prev = A @ x_prev
    y, Ay = x_prev, Ax_prev
    t = 1.0
    r = Ax_prev - b
    trace = [penalty(x_prev) + r @ r]
    best_x, best_val = x_prev, trace[0]
    converged = False
    k = 0
    x = x_prev
    for k in range(1, max_iter + 1):
        x = prox(y - 2.0 * mu * (A.T @ (Ay - b)))
        Ax = A @ x
        r = Ax - b
        val = penalty(x) + r @ r
        trace.append(val)
        if val <= best_val:
            best_x, best_val = x, val
        t_next = fista_momentum(t)
        beta = (t - 1.0) / t_next
        y = x + beta * (x - x_prev)
        Ay = Ax + beta * (Ax - Ax_prev)
        d = rel_change(x, x_prev)
        x_prev, Ax_prev, t = x, Ax, t_next
        if d <= tol:
            converged = True
            break
    if not converged:
        # momentum makes the last iterate arbitrary; hand back the best one seen
        x = best_x
    return SolverResult(
        x_hat=x, outer_iters=k, inner_iters_total=k, objective_trace=tuple(map(float, trace)),
        wall_time=time.perf_counter() - start, converged=converged,
        message="converged" if converged else "max_iter",
    )


def fista_lasso(A, b, params: LassoParams, tol: float = 1e-4, max_iter: int = 20_000,
                x0=None) -> SolverResult:
    """FISTA for ``lam ||x||_1 + ||A x - b||^2``."""
    lam, mu = params.lam, params.mu
    return accelerated_threshold(
        A, b, x0, mu,
        prox=lambda v: soft(v, lam * mu),
        penalty=lambda x: lam * np.abs(x).sum(),
        tol=tol, max_iter=max_iter,
    )
