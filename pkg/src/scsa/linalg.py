"""Dense linear-algebra kernels and scalar special functions.

Everything here is a pure function of its inputs.  Matrices are plain
two-dimensional ``float64`` arrays; support sets are sorted integer index
arrays.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .exceptions import ConvergenceError, RankDeficientError

__all__ = [
    "as_matrix",
    "as_support",
    "matvec",
    "gram_spectral_norm",
    "least_squares_on_support",
    "inv_norm_cdf",
    "norm_cdf",
    "save_matrix_csv",
    "load_matrix_csv",
]

#: Relative diagonal magnitude below which an R factor is declared singular.
RANK_TOL = 1e-12


def as_matrix(A) -> np.ndarray:
    """Validate and return ``A`` as a finite 2-D float array."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def as_support(tau, m: int) -> np.ndarray:
    """Validate a support set: strictly increasing indices in ``[0, m)``."""
    tau = np.asarray(tau, dtype=np.intp).reshape(-1)
    if tau.size:
        if tau[0] < 0 or tau[-1] >= m:
            raise ValueError(f"support indices must lie in [0, {m})")
        if np.any(np.diff(tau) <= 0):
            raise ValueError("support indices must be strictly increasing")
    return tau


def matvec(A, x) -> np.ndarray:
    """Return ``A @ x`` after checking that the dimensions agree."""
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    if A.ndim != 2 or x.ndim != 1 or A.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, x is {x.shape}")
    return A @ x


def gram_spectral_norm(A, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Largest eigenvalue of ``A.T @ A`` by power iteration.

    The iteration starts from the normalized all-ones vector, so the result
    is a deterministic function of ``A``.  It stops once the Rayleigh
    quotient changes by less than ``tol`` relative to itself.

    Raises
    ------
    ConvergenceError
        If ``max_iter`` iterations pass without meeting ``tol``; the last
        Rayleigh quotient is attached as ``best``.
    """
    A = as_matrix(A)
    if not np.any(A):
        raise ValueError("power iteration needs a nonzero matrix")
    m = A.shape[1]
    v = np.full(m, 1.0 / math.sqrt(m))
    w = A.T @ (A @ v)
    if not np.any(w):
        # all-ones lies in the null space; fall back to a fixed non-symmetric start
        v = np.arange(1, m + 1, dtype=float)
        v /= np.linalg.norm(v)
        w = A.T @ (A @ v)
    theta = float(v @ w)
    for _ in range(max_iter):
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        w = A.T @ (A @ v)
        new = float(v @ w)
        if abs(new - theta) <= tol * abs(new):
            return new
        theta = new
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations", best=theta
    )


def least_squares_on_support(A, b, tau) -> np.ndarray:
    """Minimize ``||A[:, tau] u - b||`` over ``u`` via a thin QR factorization.

    Returns the length-``len(tau)`` coefficient vector; scattering it back
    into a full-length vector is left to the caller.

    Raises
    ------
    RankDeficientError
        When a diagonal entry of R falls below ``RANK_TOL`` times the largest.
    """
    A = as_matrix(A)
    b = np.asarray(b, dtype=float)
    if b.shape != (A.shape[0],):
        raise ValueError(f"b must have length {A.shape[0]}")
    tau = as_support(tau, A.shape[1])
    if tau.size == 0:
        return np.zeros(0)
    if tau.size > A.shape[0]:
        raise RankDeficientError(
            f"support of size {tau.size} exceeds the {A.shape[0]} rows of A"
        )
    Q, R = np.linalg.qr(A[:, tau], mode="reduced")
    d = np.abs(np.diag(R))
    if d.min() < RANK_TOL * d.max():
        raise RankDeficientError("restricted matrix is rank deficient")
    return np.linalg.solve(R, Q.T @ b)


# Acklam's rational approximation to the normal quantile (relative error
# about 1.15e-9 before refinement).
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def norm_cdf(x: float) -> float:
    """Standard normal CDF."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    if p > 1.0 - _P_LOW:
        return -_acklam(1.0 - p)
    q = p - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
        ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    )


def inv_norm_cdf(p: float) -> float:
    """Quantile of the standard normal distribution.

    Acklam's approximation followed by one Halley step on the CDF, which
    brings the error down to a few ulps.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {p}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        # refine in the lower tail where erfc keeps full relative precision
        return -inv_norm_cdf(1.0 - p)
    x = _acklam(p)
    e = norm_cdf(x) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def save_matrix_csv(path, A) -> None:
    """Write a matrix as CSV, one row per line, shortest round-trip floats."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in A:
            writer.writerow([repr(float(v)) for v in row])


def load_matrix_csv(path) -> np.ndarray:
    """Read a matrix written by :func:`save_matrix_csv`."""
    with open(Path(path), newline="") as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError(f"{path} holds no rows")
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"{path} has ragged rows")
    return as_matrix(rows)
