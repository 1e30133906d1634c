"""Equality-constrained weighted l1 minimization.

Solves ``min_x sum_i w_i |x_i|  s.t.  A x = b`` through the nonnegative
split ``x = xp - xm``, which turns it into the linear program
``min c^T y  s.t.  [A, -A] y = b, y >= 0`` with ``c = [w; w]``.

Two methods are available.  The default is a Mehrotra predictor-corrector
interior-point method whose normal equations collapse to the n-by-n matrix
``A diag(d) A^T``.  The alternative is ADMM between the affine set and the
weighted l1 term; it is cheap per iteration but slow on degenerate vertices.

Either way the result is certified rather than assumed: the iterate is
polished by least squares on a candidate support and a dual vector ``nu``
is fitted to it.  If ``|a_i^T nu| <= w_i`` holds off the support up to
``kkt_tol`` (relative to the largest weight), the polished point is optimal
to within ``kkt_tol * ||x||_1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, InfeasibleError
from .linalg import as_matrix

__all__ = [
    "WeightedL1Problem",
    "L1Solution",
    "WeightedL1Solver",
    "solve_weighted_l1",
    "split_positive_orthant",
]


def split_positive_orthant(x):
    """Return ``(max(x, 0), -min(x, 0))``."""
    x = np.asarray(x, dtype=float)
    return np.maximum(x, 0.0), -np.minimum(x, 0.0)


@dataclass(frozen=True)
class WeightedL1Problem:
    A: np.ndarray
    b: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A)
        b = np.asarray(self.b, dtype=float)
        w = np.asarray(self.w, dtype=float)
        if b.shape != (A.shape[0],):
            raise ValueError("b must have one entry per row of A")
        if w.shape != (A.shape[1],):
            raise ValueError("w must have one entry per column of A")
        if not np.all(w > 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and strictly positive")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "w", w)

    def objective(self, x) -> float:
        return float(np.sum(self.w * np.abs(x)))


@dataclass
class L1Solution:
    x: np.ndarray
    objective: float
    iterations: int
    certified: bool
    residual: float


class WeightedL1Solver:
    """Weighted basis-pursuit solver bound to one sensing matrix.

    ``method="ipm"`` (default) runs a primal-dual interior-point method on the
    split linear program; ``method="admm"`` runs an ADMM iteration.  Both end
    with a support crossover that polishes the point and checks optimality.
    The factorization of ``A A^T`` is computed once, so repeated solves with
    new weights (as in majorize-minimize loops) only pay for iterations.
    """

    def __init__(self, A, tol: float = 1e-8, max_iter: int = 20_000,
                 kkt_tol: float = 1e-9, method: str = "ipm"):
        if method not in ("ipm", "admm"):
            raise ValueError(f"unknown method {method!r}")
        self.method = method
        self.A = as_matrix(A)
        n, m = self.A.shape
        if n > m:
            raise ValueError("weighted l1 expects an underdetermined system (n <= m)")
        self.tol = tol
        self.max_iter = max_iter
        self.kkt_tol = kkt_tol
        gram = self.A @ self.A.T
        try:
            chol = np.linalg.cholesky(gram)
        except np.linalg.LinAlgError as exc:
            raise InfeasibleError("A must have full row rank") from exc
        # P = A^T (A A^T)^{-1}, so projection onto {Ax = b} is v - P (A v - b)
        inv_l = np.linalg.inv(chol)
        self._P = self.A.T @ (inv_l.T @ inv_l)

    def _project(self, v, b):
        return v - self._P @ (self.A @ v - b)

    def _certify(self, support, b, w, g, drop_zeros=False):
        """Polish on ``support`` and test the KKT conditions.

        ``g`` approximates a subgradient of the weighted norm lying in the
        range of ``A^T``.  Returns the polished point or ``None``.
        """
        A = self.A
        n = A.shape[0]
        k = support.size
        if k == 0 or k > n:
            return None
        As = A[:, support]
        Q, R = np.linalg.qr(As, mode="reduced")
        d = np.abs(np.diag(R))
        if d.min() < 1e-12 * d.max():
            return None
        xs = np.linalg.solve(R, Q.T @ b)
        if np.linalg.norm(As @ xs - b) > self.tol * max(1.0, np.linalg.norm(b)):
            return None
        signs = np.sign(xs)
        if np.any(signs == 0):
            return None
        if drop_zeros:
            # entries that are zero up to rounding leave the support
            tiny = np.abs(xs) <= 1e-13 * np.abs(xs).max()
            if np.any(tiny):
                return self._certify(support[~tiny], b, w, g)
        # least-change correction of the ADMM dual so that A_S^T nu = w_S sign(x_S)
        nu = self._P.T @ g
        c = w[support] * signs
        nu = nu + Q @ np.linalg.solve(R.T, c - As.T @ nu)
        corr = np.abs(A.T @ nu)
        corr[support] = 0.0
        off = np.ones(A.shape[1], dtype=bool)
        off[support] = False
        if np.any(corr[off] > w[off] + self.kkt_tol):
            return None
        x = np.zeros(A.shape[1])
        x[support] = xs
        return x

    def solve(self, b, w=None, x0=None) -> L1Solution:
        A = self.A
        n, m = A.shape
        b = np.asarray(b, dtype=float)
        if b.shape != (n,):
            raise ValueError(f"b must have length {n}")
        w = np.ones(m) if w is None else np.asarray(w, dtype=float)
        WeightedL1Problem(A, b, w)  # validation only

        bnorm = float(np.linalg.norm(b))
        if bnorm == 0.0:
            return L1Solution(np.zeros(m), 0.0, 0, True, 0.0)
        wmax = float(w.max())
        bt = b / bnorm
        # weights below 1e-14 of the largest are floored; this moves the
        # objective by at most 1e-14 * ||x||_1 in normalized units
        wt = np.maximum(w / wmax, 1e-14)
        if self.method == "ipm":
            return self._solve_ipm(bt, wt, bnorm, w)

        z = np.zeros(m) if x0 is None else np.asarray(x0, dtype=float) / bnorm
        u = np.zeros(m)
        rho = 1.0
        x = self._project(z, bt)
        prev_support = None
        stable = 0
        feas_tol = self.tol

        for it in range(1, self.max_iter + 1):
            x = self._project(z - u, bt)
            z_old = z
            v = x + u
            z = np.sign(v) * np.maximum(np.abs(v) - wt / rho, 0.0)
            u = u + x - z

            support = np.flatnonzero(z)
            if prev_support is not None and np.array_equal(support, prev_support):
                stable += 1
            else:
                stable = 0
            prev_support = support

            if stable >= 3 and stable % 5 == 3:
                polished = self._certify(support, bt, wt, rho * u)
                if polished is not None:
                    return self._finish(polished, bt, bnorm, w, it, True)
            if it % 25 == 0 and support.size < n:
                # crossover: guess a vertex from the n tightest dual constraints
                g = rho * u
                ratio = np.abs(self.A.T @ (self._P.T @ g)) / wt
                guess = np.sort(np.argpartition(-ratio, n - 1)[:n])
                polished = self._certify(guess, bt, wt, g, drop_zeros=True)
                if polished is not None:
                    return self._finish(polished, bt, bnorm, w, it, True)

            if it % 10 == 0:
                r = np.linalg.norm(x - z)
                s = rho * np.linalg.norm(z - z_old)
                scale = max(np.linalg.norm(x), np.linalg.norm(z), 1.0)
                if r <= feas_tol * scale and s <= feas_tol * max(np.linalg.norm(rho * u), 1.0):
                    return self._finish(x, bt, bnorm, w, it, False)
                if r > 10.0 * s:
                    rho *= 2.0
                    u /= 2.0
                elif s > 10.0 * r:
                    rho /= 2.0
                    u *= 2.0

        best = x * bnorm
        raise ConvergenceError(
            f"weighted l1 ADMM did not converge in {self.max_iter} iterations", best=best
        )

    def _solve_ipm(self, bt, wt, bnorm, w):
        """Mehrotra predictor-corrector on ``min c^T y, [A, -A] y = b, y >= 0``."""
        A = self.A
        n, m = A.shape
        c = np.concatenate([wt, wt])

        def B(y):
            return A @ (y[:m] - y[m:])

        def Bt(v):
            t = A.T @ v
            return np.concatenate([t, -t])

        def normal_solve(d, rhs):
            M = (A * (d[:m] + d[m:])) @ A.T
            M[np.diag_indices_from(M)] += 1e-14 * np.trace(M) / n
            try:
                L = np.linalg.cholesky(M)
            except np.linalg.LinAlgError:
                return np.linalg.lstsq(M, rhs, rcond=None)[0]
            return np.linalg.solve(L.T, np.linalg.solve(L, rhs))

        # Mehrotra's starting point heuristic
        x_ls = self._P @ bt
        y = np.concatenate([np.maximum(x_ls, 0.0), np.maximum(-x_ls, 0.0)])
        nu = np.zeros(n)
        s = c.copy()
        y = y + max(-1.5 * y.min(), 0.0) + 1e-3
        s = s + max(-1.5 * s.min(), 0.0)
        ys = y @ s
        y, s = y + 0.5 * ys / s.sum(), s + 0.5 * ys / y.sum()

        N = 2 * m
        tol = min(self.tol, 1e-9)
        for it in range(1, 201):
            rp = bt - B(y)
            rd = c - Bt(nu) - s
            mu = (y @ s) / N
            pobj = c @ y
            dobj = bt @ nu
            if (np.linalg.norm(rp) <= tol and np.linalg.norm(rd) <= tol * (1.0 + np.linalg.norm(c))
                    and abs(pobj - dobj) <= tol * (1.0 + abs(pobj))):
                break
            if mu <= 1e-14 * (1.0 + abs(pobj)):
                # complementarity is exhausted; the primal residual is now
                # limited by conditioning, and the crossover below polishes it
                break
            d = y / s

            def direction(rc):
                rhs = rp - B((rc - y * rd) / s)
                dnu = normal_solve(d, rhs)
                ds_ = rd - Bt(dnu)
                dy_ = (rc - y * ds_) / s
                return dy_, dnu, ds_

            def max_step(v, dv):
                neg = dv < 0
                return min(1.0, float(np.min(-v[neg] / dv[neg]))) if np.any(neg) else 1.0

            dy_a, dnu_a, ds_a = direction(-y * s)
            ap = max_step(y, dy_a)
            ad = max_step(s, ds_a)
            mu_aff = ((y + ap * dy_a) @ (s + ad * ds_a)) / N
            sigma_c = (mu_aff / mu) ** 3
            dy_c, dnu_c, ds_c = direction(-y * s - dy_a * ds_a + sigma_c * mu)
            ap = 0.99 * max_step(y, dy_c)
            ad = 0.99 * max_step(s, ds_c)
            y = y + ap * dy_c
            nu = nu + ad * dnu_c
            s = s + ad * ds_c
        else:
            it = None

        xt = y[:m] - y[m:]
        g = A.T @ nu
        # crossover: polish on the numerical support, then on the tight dual set
        big = np.abs(xt) > 1e-9 * max(np.abs(xt).max(), 1e-300)
        polished = self._certify(np.flatnonzero(big), bt, wt, g)
        if polished is None and big.sum() != n:
            tight = np.sort(np.argpartition(-(np.abs(g) / wt), n - 1)[:n])
            polished = self._certify(tight, bt, wt, g, drop_zeros=True)
        if polished is not None:
            return self._finish(polished, bt, bnorm, w, it or 200, True)
        if it is None:
            raise ConvergenceError("interior-point iteration limit reached",
                                   best=self._project(xt, bt) * bnorm)
        return self._finish(self._project(xt, bt), bt, bnorm, w, it, False)

    def _finish(self, xt, bt, bnorm, w, it, certified):
        x = xt * bnorm
        residual = float(np.linalg.norm(self.A @ xt - bt)) * bnorm
        return L1Solution(x, float(np.sum(w * np.abs(x))), it, certified, residual)


def solve_weighted_l1(A, b, w=None, tol: float = 1e-8, max_iter: int = 20_000,
                      x0=None, method: str = "ipm") -> np.ndarray:
    """Minimize ``||diag(w) x||_1`` subject to ``A x = b``.

    Raises
    ------
    InfeasibleError
        If the returned point misses the constraints by more than
        ``tol * max(1, ||b||)``.
    ConvergenceError
        If ``max_iter`` ADMM iterations pass without convergence.
    """
    solver = WeightedL1Solver(A, tol=tol, max_iter=max_iter, method=method)
    sol = solver.solve(b, w, x0=x0)
    b = np.asarray(b, dtype=float)
    res = float(np.linalg.norm(solver.A @ sol.x - b))
    if res > tol * max(1.0, float(np.linalg.norm(b))):
        raise InfeasibleError(f"constraint residual {res:.3e} exceeds tolerance")
    return sol.x
