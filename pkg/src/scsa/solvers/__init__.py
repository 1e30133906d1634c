"""Sparse recovery solvers."""

from ._common import SolverResult, rel_change, ist_step, scsa_step
from .baselines import min_l1, oracle_estimator, reweight, reweighted_l1
from .lasso import (
    LassoParams,
    fista_lasso,
    fista_momentum,
    ilt,
    ist_lasso,
    ist_p,
    lasso_lambda,
    lasso_objective,
)
from .scsa import VARIANTS, ScsaConfig, opt_fit, scsa, scsa_objective_value
from .stationarity import StationarityReport, stationarity_check

__all__ = [
    "SolverResult", "rel_change", "ist_step", "scsa_step",
    "min_l1", "oracle_estimator", "reweight", "reweighted_l1",
    "LassoParams", "fista_lasso", "fista_momentum", "ilt", "ist_lasso", "ist_p",
    "lasso_lambda", "lasso_objective",
    "VARIANTS", "ScsaConfig", "opt_fit", "scsa", "scsa_objective_value",
    "StationarityReport", "stationarity_check",
]
