"""Successive concave sparsity approximation.

The l0 count is replaced by ``F_sigma(|x|) = sum_i (1 - exp(-|x_i| / sigma))``
and sigma is decreased geometrically.  Each sigma-stage is warm-started from
the previous one and solved approximately by one of three inner methods:

``LP``
    majorize-minimize with weighted basis pursuit (noise-free data),
``IT``
    single thresholding steps with the closed-form operator,
``FIT``
    accelerated thresholding runs (:func:`opt_fit`).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from ..linalg import gram_spectral_norm
from ..penalties import big_f, mm_weights
from ..prox import scsa_threshold
from ..weighted_l1 import WeightedL1Solver
from ._common import SolverResult, check_system, rel_change, scsa_step
from .lasso import LassoParams, accelerated_threshold, fista_lasso

__all__ = ["ScsaConfig", "scsa", "opt_fit", "scsa_objective_value", "VARIANTS"]

VARIANTS = ("LP", "IT", "FIT")


def scsa_objective_value(A, b, x, lambda_sigma: float, sigma: float) -> float:
    """``g(x) = lambda_sigma F_sigma(|x|) + ||A x - b||^2``."""
    r = A @ x - b
    return float(lambda_sigma * big_f(x, sigma) + r @ r)


@dataclass(frozen=True)
class ScsaConfig:
    """Parameters of one SCSA run.

    Use :meth:`default` to get the recommended stopping thresholds for a
    variant; ``lam`` is ignored by the LP variant.
    """

    variant: str = "LP"
    lam: float = 0.0
    c: float = 0.1
    eps1: float = 1e-3
    eps2: float = 1e-2
    max_outer: int = 100
    max_inner: int = 5000
    sigma_floor_rel: float = 1e-12
    init_tol: float | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if not 0 < self.c < 0.5:
            raise ValueError("c must lie in (0, 0.5)")
        if not (self.eps1 > 0 and self.eps2 > 0):
            raise ValueError("eps1 and eps2 must be positive")
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if self.variant != "LP" and self.lam == 0:
            raise ValueError(f"{self.variant} variant needs lam > 0")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration caps must be positive")
        if not self.sigma_floor_rel > 0:
            raise ValueError("sigma_floor_rel must be positive")

    @classmethod
    def default(cls, variant: str, lam: float = 0.0, **overrides) -> "ScsaConfig":
        """Config with the recommended ``eps1``/``eps2`` for ``variant``."""
        variant = variant.upper()
        if variant == "LP":
            eps = dict(eps1=1e-3, eps2=1e-2)
        elif variant == "IT":
            e = min(1e-4, 1e-3 * lam)
            eps = dict(eps1=e, eps2=e)
        elif variant == "FIT":
            eps = dict(eps1=min(1e-4, 1e-3 * lam), eps2=min(1e-3, 1e-2 * lam))
        else:
            raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
        eps.update(overrides)
        return cls(variant=variant, lam=lam, **eps)

    def with_(self, **kw) -> "ScsaConfig":
        return replace(self, **kw)


def opt_fit(A, b, lambda_sigma: float, mu: float, sigma: float, x0, tol: float,
            max_iter: int = 5000, full_output: bool = False):
    """Accelerated thresholding for ``g`` at a fixed sigma.

    Returns the final iterate, or the full :class:`SolverResult` when
    ``full_output`` is set (its ``converged`` flag reports a cap exit, in
    which case the best iterate seen is returned).
    """
    if not (sigma > 0 and mu > 0 and lambda_sigma >= 0):
        raise ValueError("need sigma > 0, mu > 0, lambda_sigma >= 0")
    thr = mu * lambda_sigma
    if thr == 0:
        prox = lambda v: v  # noqa: E731
    else:
        prox = lambda v: scsa_threshold(v, thr, sigma)  # noqa: E731
    res = accelerated_threshold(
        A, b, x0, mu, prox=prox,
        penalty=lambda x: lambda_sigma * big_f(x, sigma),
        tol=tol, max_iter=max_iter,
    )
    return res if full_output else res.x_hat


def _initial_point(A, b, cfg, lmax, l1_solver):
    if cfg.variant == "LP":
        sol = l1_solver.solve(b)
        return sol.x, 1
    tol = cfg.eps1 if cfg.init_tol is None else cfg.init_tol
    res = fista_lasso(A, b, LassoParams(cfg.lam, 0.99 / (2.0 * lmax)),
                      tol=tol, max_iter=cfg.max_inner * 4)
    return res.x_hat, res.inner_iters_total


def scsa(A, b, cfg: ScsaConfig | None = None, lmax: float | None = None,
         l1_solver: WeightedL1Solver | None = None) -> SolverResult:
    """Run SCSA with the inner method selected by ``cfg.variant``.

    Parameters
    ----------
    A, b : array_like
        Sensing matrix and measurements.
    cfg : ScsaConfig, optional
        Defaults to the LP variant with its recommended thresholds.
    lmax : float, optional
        Largest eigenvalue of ``A^T A``; computed by power iteration if absent.
    l1_solver : WeightedL1Solver, optional
        Prebuilt solver for ``A`` (LP variant), to share its factorization.

    Returns
    -------
    SolverResult
        ``objective_trace``/``sigma_trace`` record, for every inner iterate
        (and the warm start of every stage), ``g`` for IT/FIT or
        ``F_sigma(|x|)`` for LP, together with the sigma it was evaluated at.
    """
    cfg = ScsaConfig() if cfg is None else cfg
    A, b = check_system(A, b)
    start = time.perf_counter()
    m = A.shape[1]

    if cfg.variant == "LP" and l1_solver is None:
        l1_solver = WeightedL1Solver(A)
    if cfg.variant != "LP" and lmax is None:
        lmax = gram_spectral_norm(A)

    x, inner_total = _initial_point(A, b, cfg, lmax, l1_solver)
    sigma0 = 8.0 * float(np.max(np.abs(x))) if m else 0.0
    if sigma0 == 0.0:
        return SolverResult(np.zeros(m), 0, inner_total, (), time.perf_counter() - start,
                            True, "zero initial point")
    sigma_floor = cfg.sigma_floor_rel * sigma0
    sigma = sigma0
    lam = cfg.lam

    trace, sigmas = [], []
    converged = False
    message = "max_outer"
    capped_stages = 0
    outer = 0
    while outer < cfg.max_outer:
        if sigma < sigma_floor:
            message = "sigma_floor"
            break
        outer += 1
        lam_s = lam * sigma
        x_stage = x
        xj = x
        if cfg.variant == "LP":
            val = big_f(xj, sigma)
        else:
            mu = scsa_step(lmax, lam, sigma)
            val = scsa_objective_value(A, b, xj, lam_s, sigma)
        trace.append(val)
        sigmas.append(sigma)

        inner_ok = False
        for _ in range(cfg.max_inner):
            inner_total += 1
            if cfg.variant == "LP":
                w = mm_weights(np.abs(xj), sigma)
                cand = l1_solver.solve(b, w).x
                # majorize-minimize only descends if the subproblem was
                # solved; keep the current point if the solver fell short
                if np.sum(w * np.abs(cand)) > np.sum(w * np.abs(xj)):
                    cand = xj
                new_val = big_f(cand, sigma)
            elif cfg.variant == "IT":
                grad = 2.0 * (A.T @ (A @ xj - b))
                cand = scsa_threshold(xj - mu * grad, mu * lam_s, sigma)
                new_val = scsa_objective_value(A, b, cand, lam_s, sigma)
            else:
                sub = opt_fit(A, b, lam_s, mu, sigma, xj, cfg.eps2,
                              max_iter=cfg.max_inner, full_output=True)
                cand = sub.x_hat
                inner_total += sub.inner_iters_total - 1
                new_val = scsa_objective_value(A, b, cand, lam_s, sigma)
            trace.append(new_val)
            sigmas.append(sigma)
            d2 = rel_change(cand, xj)
            xj = cand
            if d2 <= cfg.eps2:
                inner_ok = True
                break
        x = xj
        capped_stages += not inner_ok
        d1 = rel_change(x, x_stage)
        if d1 <= cfg.eps1:
            converged = True
            message = "converged"
            break
        sigma *= cfg.c

    if capped_stages:
        # an inner loop that ran out of iterations is never reported as converged
        converged = False
        message = f"max_inner ({capped_stages} of {outer} stages capped)"

    return SolverResult(
        x_hat=x,
        outer_iters=outer,
        inner_iters_total=inner_total,
        objective_trace=tuple(float(v) for v in trace),
        wall_time=time.perf_counter() - start,
        converged=converged,
        message=message,
        sigma_trace=tuple(sigmas),
    )
