"""Brute-force reference solutions used only by the test-suite."""

import numpy as np
from scipy.optimize import minimize_scalar


def scalar_min(obj, upper, n_grid=100_001):
    """Global minimum of a scalar objective on ``[0, upper]``.

    Dense uniform grid, then golden-section refinement in the best cell.
    Returns ``(argmin, min)``.
    """
    grid = np.linspace(0.0, upper, n_grid)
    vals = obj(grid)
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n_grid - 1)]
    best_x, best_v = grid[i], vals[i]
    if hi > lo:
        mid = grid[i]
        if lo < mid < hi:
            res = minimize_scalar(lambda t: float(obj(np.array([t]))[0]),
                                  bracket=(lo, mid, hi), method="golden", tol=1e-12)
            if lo <= res.x <= hi and res.fun < best_v:
                best_x, best_v = res.x, res.fun
        for edge in (lo, hi):
            v = float(obj(np.array([edge]))[0])
            if v < best_v:
                best_x, best_v = edge, v
    return float(best_x), float(best_v)


def weighted_l1_vertices(A, b, w):
    """Optimum of ``min sum w|x| s.t. Ax = b`` by enumerating basic solutions."""
    from itertools import combinations

    n, m = A.shape
    best = np.inf
    for cols in combinations(range(m), n):
        B = A[:, cols]
        if abs(np.linalg.det(B)) < 1e-12:
            continue
        xb = np.linalg.solve(B, b)
        best = min(best, float(np.sum(w[list(cols)] * np.abs(xb))))
    return best


def weighted_l1_linprog(A, b, w):
    """Optimum of the split linear program via scipy's HiGHS."""
    from scipy.optimize import linprog

    m = A.shape[1]
    res = linprog(np.concatenate([w, w]), A_eq=np.hstack([A, -A]), b_eq=b,
                  bounds=(0, None), method="highs")
    assert res.status == 0
    return float(res.fun), res.x[:m] - res.x[m:]
