"""Reference estimators: reweighted l1, the support oracle, plain min-l1."""

from __future__ import annotations

import time

import numpy as np

from ..linalg import as_support, least_squares_on_support
from ..weighted_l1 import WeightedL1Solver
from ._common import SolverResult, check_system

__all__ = ["reweighted_l1", "oracle_estimator", "min_l1", "reweight"]


def reweight(x, epsilon: float) -> np.ndarray:
    """Weights ``1 / (|x_i| + epsilon)``; bounded above by ``1 / epsilon``."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return 1.0 / (np.abs(np.asarray(x, dtype=float)) + epsilon)


def min_l1(A, b, solver: WeightedL1Solver | None = None) -> SolverResult:
    """Basis pursuit ``min ||x||_1 s.t. A x = b``."""
    A, b = check_system(A, b)
    start = time.perf_counter()
    solver = WeightedL1Solver(A) if solver is None else solver
    sol = solver.solve(b)
    return SolverResult(sol.x, 1, sol.iterations, (sol.objective,),
                        time.perf_counter() - start, sol.certified,
                        "converged" if sol.certified else "uncertified")


def reweighted_l1(A, b, epsilon: float = 0.1, n_rounds: int = 5,
                  solver: WeightedL1Solver | None = None) -> SolverResult:
    """Iteratively reweighted basis pursuit.

    Round one uses unit weights (plain min-l1); each later round uses
    :func:`reweight` of the previous solution.  ``objective_trace`` holds the
    weighted objective of each round.
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be at least 1")
    A, b = check_system(A, b)
    start = time.perf_counter()
    solver = WeightedL1Solver(A) if solver is None else solver
    w = np.ones(A.shape[1])
    trace = []
    iters = 0
    certified = True
    x = np.zeros(A.shape[1])
    for _ in range(n_rounds):
        sol = solver.solve(b, w)
        x = sol.x
        trace.append(sol.objective)
        iters += sol.iterations
        certified &= sol.certified
        w = reweight(x, epsilon)
    return SolverResult(x, n_rounds, iters, tuple(trace), time.perf_counter() - start,
                        certified, "converged" if certified else "uncertified")


def oracle_estimator(A, b, tau) -> np.ndarray:
    """Least squares on the known support ``tau``, zero elsewhere."""
    A, b = check_system(A, b)
    tau = as_support(tau, A.shape[1])
    x = np.zeros(A.shape[1])
    x[tau] = least_squares_on_support(A, b, tau)
    return x
