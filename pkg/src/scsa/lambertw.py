"""Real branches of the Lambert W function.

``w0`` is the principal branch (values >= -1) defined for x >= -1/e and
``wm1`` is the lower branch (values <= -1) defined on [-1/e, 0).  Both
accept scalars or arrays.  Starting guesses come from the branch-point
series, Winitzki's approximation or the asymptotic logarithmic form and are
polished with Halley's iteration.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["BRANCH_POINT", "w0", "wm1"]

#: The common endpoint of both real branches, -1/e.
BRANCH_POINT = -math.exp(-1.0)

# inputs this far below -1/e are rounding noise and are snapped to it
_CLAMP = 1e-15
_MAX_ITER = 50


def _branch_series(p):
    # W = -1 + p - p^2/3 + 11/72 p^3 - 43/540 p^4, p = +-sqrt(2(e x + 1))
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)))


def _halley(x, w):
    """Refine ``w e^w = x`` elementwise; ``x`` and ``w`` are 1-D arrays."""
    active = np.ones(x.shape, dtype=bool)
    for _ in range(_MAX_ITER):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        wi = w[idx]
        ew = np.exp(wi)
        f = wi * ew - x[idx]
        wp1 = wi + 1.0
        denom = ew * wp1 - (wi + 2.0) * f / (2.0 * wp1)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(denom != 0.0, f / denom, 0.0)
        step = np.where(np.isfinite(step), step, 0.0)
        w[idx] = wi - step
        done = np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(w[idx]))
        active[idx[done]] = False
    return w


def _prepare(x, upper):
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel().copy()
    if np.any(np.isnan(flat)):
        raise ValueError("Lambert W is undefined for NaN input")
    if np.any(flat < BRANCH_POINT - _CLAMP):
        raise ValueError("Lambert W is undefined below -1/e")
    if upper is not None and np.any(flat >= upper):
        raise ValueError("W_{-1} is only defined on [-1/e, 0)")
    np.maximum(flat, BRANCH_POINT, out=flat)
    return x, flat


def _finish(x, out):
    if x.ndim == 0:
        return float(out[0])
    return out.reshape(x.shape)


def w0(x):
    """Principal branch ``W_0``: the solution of ``w e^w = x`` with ``w >= -1``."""
    x, flat = _prepare(x, upper=None)
    w = np.empty_like(flat)
    at_bp = flat == BRANCH_POINT
    near = (flat < -0.3) & ~at_bp
    big = flat > 3.0
    mid = ~(near | big | at_bp)

    p = np.sqrt(np.maximum(2.0 * (math.e * flat[near] + 1.0), 0.0))
    w[near] = _branch_series(p)
    l1 = np.log1p(flat[mid])
    w[mid] = l1 * (1.0 - np.log1p(l1) / (2.0 + l1))
    lb = np.log(flat[big])
    w[big] = lb - np.log(lb) + np.log(lb) / lb
    w[at_bp] = -1.0

    refine = ~at_bp & (flat != 0.0)
    if np.any(refine):
        w[refine] = _halley(flat[refine], w[refine])
    w[flat == 0.0] = 0.0
    np.maximum(w, -1.0, out=w)
    return _finish(x, w)


def wm1(x):
    """Lower branch ``W_{-1}``: the solution of ``w e^w = x`` with ``w <= -1``."""
    x, flat = _prepare(x, upper=0.0)
    w = np.empty_like(flat)
    at_bp = flat == BRANCH_POINT
    near = (flat < -0.25) & ~at_bp
    far = ~(near | at_bp)

    p = -np.sqrt(np.maximum(2.0 * (math.e * flat[near] + 1.0), 0.0))
    w[near] = _branch_series(p)
    l1 = np.log(-flat[far])
    l2 = np.log(-l1)
    w[far] = l1 - l2 + l2 / l1
    w[at_bp] = -1.0

    if np.any(~at_bp):
        w[~at_bp] = _halley(flat[~at_bp], w[~at_bp])
    np.minimum(w, -1.0, out=w)
    return _finish(x, w)
