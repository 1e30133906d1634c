"""First-order optimality test for ``lambda_sigma F_sigma(|x|) + ||A x - b||^2``.

On the numerical support ``tau`` a stationary point satisfies

    x_tau = A_tau^+ b - (lambda_sigma / (2 sigma)) (A_tau^T A_tau)^{-1}
            (sign(x_tau) * exp(-|x_tau| / sigma)),

and off the support ``|a_i^T (A_tau x_tau - b)| <= lambda_sigma / (2 sigma)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import RankDeficientError
from ._common import check_system

__all__ = ["StationarityReport", "stationarity_check"]


@dataclass(frozen=True)
class StationarityReport:
    r_on: float
    r_off: float
    support: np.ndarray

    def is_stationary(self, tol_on: float, tol_off: float = 0.0) -> bool:
        return self.r_on <= tol_on and self.r_off <= tol_off


def stationarity_check(x_hat, A, b, lambda_sigma: float, sigma: float,
                       zero_tol: float | None = None) -> StationarityReport:
    """Measure how far ``x_hat`` is from a stationary point.

    Parameters
    ----------
    zero_tol : float, optional
        Entries with ``|x_i| > zero_tol`` form the support; the default is
        ``1e-6 * max|x_hat|``.

    Returns
    -------
    StationarityReport
        ``r_on`` is the norm of the on-support defect, ``r_off`` the largest
        off-support correlation minus ``lambda_sigma / (2 sigma)`` (so
        nonpositive values are admissible).
    """
    A, b = check_system(A, b)
    x = np.asarray(x_hat, dtype=float)
    if x.shape != (A.shape[1],):
        raise ValueError("x_hat has the wrong length")
    if not sigma > 0 or lambda_sigma < 0:
        raise ValueError("need sigma > 0 and lambda_sigma >= 0")
    xmax = float(np.max(np.abs(x))) if x.size else 0.0
    if zero_tol is None:
        zero_tol = 1e-6 * xmax
    tau = np.flatnonzero(np.abs(x) > zero_tol)
    kappa = lambda_sigma / (2.0 * sigma)

    if tau.size > A.shape[0]:
        raise RankDeficientError(f"support of size {tau.size} exceeds {A.shape[0]} rows")
    if tau.size:
        At = A[:, tau]
        xt = x[tau]
        Q, R = np.linalg.qr(At, mode="reduced")
        d = np.abs(np.diag(R))
        if d.min() < 1e-12 * d.max():
            raise RankDeficientError("restricted matrix is rank deficient")
        ls = np.linalg.solve(R, Q.T @ b)
        g = np.sign(xt) * np.exp(-np.abs(xt) / sigma)
        # (R^T R)^{-1} g by two triangular solves
        corr = np.linalg.solve(R, np.linalg.solve(R.T, g))
        r_on = float(np.linalg.norm(xt - (ls - kappa * corr)))
        resid = At @ xt - b
    else:
        r_on = 0.0
        resid = -b
    off = np.ones(A.shape[1], dtype=bool)
    off[tau] = False
    if off.any():
        r_off = float(np.max(np.abs(A[:, off].T @ resid))) - kappa
    else:
        r_off = -kappa
    return StationarityReport(r_on=r_on, r_off=r_off, support=tau)
