"""Sparse recovery by successive concave sparsity approximation.

The package provides the exponential sparsity penalty and its closed-form
thresholding operator (via the real Lambert W branches), a weighted
basis-pursuit solver, the SCSA continuation algorithm with LP, IT and FIT
inner solvers, classic baselines, and a seeded benchmark harness.
"""

from .exceptions import ConvergenceError, InfeasibleError, RankDeficientError
from .lambertw import w0, wm1
from .linalg import gram_spectral_norm, inv_norm_cdf, least_squares_on_support
from .metrics import MetricRecord, msnr_rec, mse, snr_rec, srr, success_rate
from .penalties import big_f, f_sigma, mm_weights
from .problems import Problem, gen_problem, load_problem, save_problem
from .prox import hard, scsa_threshold, soft
from .solvers import (
    LassoParams,
    ScsaConfig,
    SolverResult,
    fista_lasso,
    ilt,
    ist_lasso,
    ist_p,
    lasso_lambda,
    opt_fit,
    oracle_estimator,
    reweighted_l1,
    scsa,
    stationarity_check,
)
from .weighted_l1 import WeightedL1Solver, solve_weighted_l1

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "InfeasibleError", "RankDeficientError",
    "w0", "wm1", "gram_spectral_norm", "inv_norm_cdf", "least_squares_on_support",
    "MetricRecord", "msnr_rec", "mse", "snr_rec", "srr", "success_rate",
    "big_f", "f_sigma", "mm_weights",
    "Problem", "gen_problem", "load_problem", "save_problem",
    "hard", "scsa_threshold", "soft",
    "LassoParams", "ScsaConfig", "SolverResult", "fista_lasso", "ilt", "ist_lasso",
    "ist_p", "lasso_lambda", "opt_fit", "oracle_estimator", "reweighted_l1", "scsa",
    "stationarity_check",
    "WeightedL1Solver", "solve_weighted_l1",
]
