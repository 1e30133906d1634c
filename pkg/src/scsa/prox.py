"""Scalar thresholding operators, applied componentwise to arrays.

Each operator returns ``sign(x0) * argmin_{x >= 0} 1/2 (x - |x0|)^2 + pen(x)``
for its penalty (``hard`` and ``generalized_soft_p`` are given by formula
instead).  All of them are odd and shrink toward zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lambertw import BRANCH_POINT, w0

__all__ = [
    "ScsaProxParams",
    "soft",
    "hard",
    "scsa_threshold",
    "scsa_objective",
    "scsa_zero_threshold",
    "generalized_soft_p",
    "log_prox",
    "log_prox_objective",
]


def _out(x0, y):
    return float(y) if np.ndim(x0) == 0 else y


def soft(x0, alpha: float):
    """Soft thresholding ``max(|x0| - alpha, 0) sign(x0)``."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    x0 = np.asarray(x0, dtype=float)
    return _out(x0, np.sign(x0) * np.maximum(np.abs(x0) - alpha, 0.0))


def hard(x0, lam: float):
    """Hard thresholding: keep ``x0`` where ``|x0| > sqrt(2 lam)``, else 0."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    x0 = np.asarray(x0, dtype=float)
    return _out(x0, np.where(np.abs(x0) > math.sqrt(2.0 * lam), x0, 0.0))


@dataclass(frozen=True)
class ScsaProxParams:
    """Parameters of the exponential-penalty threshold: ``mu * lambda_sigma`` and ``sigma``."""

    mu_lambda: float
    sigma: float

    def __post_init__(self):
        if not self.mu_lambda > 0:
            raise ValueError("mu_lambda must be positive")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def __call__(self, x0):
        return scsa_threshold(x0, self.mu_lambda, self.sigma)


def scsa_objective(x, x0, mu_lambda: float, sigma: float):
    """``1/2 (x - |x0|)^2 + mu_lambda (1 - exp(-x / sigma))`` for ``x >= 0``."""
    x = np.asarray(x, dtype=float)
    return 0.5 * (x - np.abs(x0)) ** 2 - mu_lambda * np.expm1(-x / sigma)


def scsa_threshold(x0, mu_lambda: float, sigma: float):
    """Closed-form minimizer for the exponential penalty via Lambert ``W_0``.

    With ``z = -(mu_lambda / sigma^2) exp(-|x0| / sigma)`` the only interior
    candidate is ``x1 = sigma W_0(z) + |x0|``.  When ``z < -1/e`` there is no
    stationary point and the minimizer is 0; otherwise ``x1`` is kept only if
    it is positive and strictly beats the objective at 0.
    """
    if not mu_lambda > 0 or not sigma > 0:
        raise ValueError("mu_lambda and sigma must be positive")
    x0 = np.asarray(x0, dtype=float)
    a = np.abs(np.atleast_1d(x0)).ravel()
    out = np.zeros_like(a)

    # log(-z); computed in log space so tiny sigma neither overflows nor gives 0*inf
    log_mz = math.log(mu_lambda) - 2.0 * math.log(sigma) - a / sigma
    defined = (log_mz <= -1.0 + 1e-14) & (a > 0)
    if np.any(defined):
        z = np.maximum(-np.exp(log_mz[defined]), BRANCH_POINT)
        ad = a[defined]
        x1 = sigma * w0(z) + ad
        f1 = 0.5 * (x1 - ad) ** 2 - mu_lambda * np.expm1(-x1 / sigma)
        keep = (x1 > 0) & (f1 < 0.5 * ad * ad)
        out[defined] = np.where(keep, x1, 0.0)

    y = np.sign(np.atleast_1d(x0).ravel()) * out
    return _out(x0, y.reshape(x0.shape))


def scsa_zero_threshold(mu_lambda: float, sigma: float, tol: float = 1e-12) -> float:
    """Largest ``|x0|`` mapped to 0 by :func:`scsa_threshold`, by bisection.

    The zero set is an interval ``[0, t*]`` with ``t*`` between
    ``sqrt(2 mu_lambda)``-like (hard) and ``mu_lambda / sigma`` (soft) limits.
    """
    lo, hi = 0.0, mu_lambda / sigma + math.sqrt(2.0 * mu_lambda) + 1.0
    while scsa_threshold(hi, mu_lambda, sigma) == 0.0:
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if scsa_threshold(mid, mu_lambda, sigma) == 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def generalized_soft_p(x0, alpha: float, p: float):
    """``max(|x0| - alpha |x0|^(p-1), 0) sign(x0)``; 0 maps to 0."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    x0 = np.asarray(x0, dtype=float)
    a = np.abs(x0)
    # |x| > alpha |x|^(p-1)  <=>  |x|^(2-p) > alpha, which cannot overflow
    keep = a ** (2.0 - p) > alpha
    safe = np.where(keep, a, 1.0)
    shrunk = np.where(keep, np.maximum(a - alpha * safe ** (p - 1.0), 0.0), 0.0)
    return _out(x0, np.sign(x0) * shrunk)


def log_prox_objective(x, x0, mu_lambda: float, beta: float):
    """``1/2 (x - |x0|)^2 + mu_lambda log(x + beta)`` for ``x >= 0``."""
    x = np.asarray(x, dtype=float)
    return 0.5 * (x - np.abs(x0)) ** 2 + mu_lambda * np.log(x + beta)


def log_prox(x0, mu_lambda: float, beta: float):
    """Proximal map of ``mu_lambda * log(|x| + beta)``.

    Stationary points on ``x > 0`` solve
    ``x^2 + (beta - |x0|) x + (mu_lambda - beta |x0|) = 0``; the larger root
    is the only local minimizer there, so it is compared against ``x = 0``.
    """
    if not mu_lambda > 0 or not beta > 0:
        raise ValueError("mu_lambda and beta must be positive")
    x0 = np.asarray(x0, dtype=float)
    a = np.abs(x0)
    disc = (a + beta) ** 2 - 4.0 * mu_lambda
    root = 0.5 * ((a - beta) + np.sqrt(np.maximum(disc, 0.0)))
    ok = (disc >= 0) & (root > 0)
    f_root = log_prox_objective(np.where(ok, root, 0.0), a, mu_lambda, beta)
    f_zero = 0.5 * a * a + mu_lambda * math.log(beta)
    y = np.where(ok & (f_root < f_zero), root, 0.0)
    return _out(x0, np.sign(x0) * y)
