"""Seeded Monte-Carlo harness for the recovery experiments.

An :class:`ExperimentSpec` expands into configurations (``s`` x ``sigma_w``
x ``c``), each run for ``trials`` seeded problems and every requested
algorithm.  One :class:`~scsa.metrics.MetricRecord` row is written per
(configuration, algorithm, trial), followed by a per-configuration summary.

Trial ``t`` always uses ``seed = base_seed + t``, so all configurations that
share ``n, m, s, sigma_w`` see the same problems (common random numbers).
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .linalg import gram_spectral_norm
from .metrics import (
    SUCCESS_DB,
    MetricRecord,
    msnr_from_errors,
    snr_rec,
    srr,
)
from .problems import Problem, gen_problem
from .prox import hard, scsa_threshold, soft
from .solvers import (
    LassoParams,
    ScsaConfig,
    fista_lasso,
    ilt,
    ist_lasso,
    ist_p,
    lasso_lambda,
    min_l1,
    oracle_estimator,
    reweighted_l1,
    scsa,
)
from .solvers._common import ist_step
from .weighted_l1 import WeightedL1Solver

__all__ = [
    "KINDS",
    "ALGORITHMS",
    "DEFAULT_ALGS",
    "LAMBDA_GRID",
    "ExperimentSpec",
    "run_experiment",
    "run_trial",
    "summarize",
    "write_rows",
    "read_rows",
    "tune_lambda",
    "operator_curves",
    "write_operator_csv",
    "parse_list",
    "parse_range",
]

KINDS = (
    "c-sweep",
    "noise-free-sweep",
    "noisy-sweep",
    "rademacher-sweep",
    "noise-level-sweep",
    "operator-plot",
)

ALGORITHMS = (
    "l1", "scsa-lp", "reweighted-l1", "ist", "fista", "scsa-it", "scsa-fit",
    "ilt", "ist-p", "oracle",
)

DEFAULT_ALGS = {
    "c-sweep": ("scsa-fit",),
    "noise-free-sweep": ("l1", "scsa-lp", "reweighted-l1"),
    "noisy-sweep": ("oracle", "fista", "scsa-it", "scsa-fit"),
    "rademacher-sweep": ("oracle", "fista", "scsa-it", "scsa-fit"),
    "noise-level-sweep": ("oracle", "fista", "scsa-it", "scsa-fit"),
    "operator-plot": (),
}

LAMBDA_GRID = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0)
ILT_BETA = 1e-2
REWEIGHT_EPS = 0.1
LASSO_TOL = 1e-4
LASSO_MAX_ITER = 20_000

SUMMARY_COLUMNS = [
    "experiment", "algorithm", "n", "m", "s", "sigma_w", "c", "trials", "n_ok",
    "success_rate", "msnr_db", "mean_snr_db", "mse", "srr", "mean_time_ms",
]


def _check_alg(name: str) -> str:
    if name in ALGORITHMS:
        return name
    if name.startswith("ist-") and name != "ist-p":
        try:
            p = float(name[4:])
        except ValueError:
            pass
        else:
            if 0 < p <= 1:
                return name
    raise ValueError(f"unknown algorithm {name!r}; expected one of {ALGORITHMS} or ist-<p>")


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep.

    ``lambda_multipliers`` maps ``ilt`` / ``ist-<p>`` to the factor applied to
    the noise-calibrated LASSO weight (1 when absent).
    """

    kind: str
    n: int = 250
    m: int = 500
    s_values: tuple = (50,)
    sigma_w_values: tuple = (1e-2,)
    c_values: tuple = (0.1,)
    trials: int = 50
    algorithms: tuple = ()
    base_seed: int = 0
    out_path: str = "results.csv"
    lambda_multipliers: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        algs = tuple(self.algorithms) or DEFAULT_ALGS[self.kind]
        object.__setattr__(self, "algorithms", tuple(_check_alg(a) for a in algs))
        sig = tuple(float(v) for v in self.sigma_w_values)
        if self.kind == "noise-free-sweep":
            sig = (0.0,)
        object.__setattr__(self, "sigma_w_values", sig)
        object.__setattr__(self, "s_values", tuple(int(v) for v in self.s_values))
        object.__setattr__(self, "c_values", tuple(float(v) for v in self.c_values))
        if any(not 0 < c < 0.5 for c in self.c_values):
            raise ValueError("c values must lie in (0, 0.5)")
        if any(v < 0 for v in self.sigma_w_values):
            raise ValueError("sigma_w values must be nonnegative")
        if self.kind != "operator-plot":
            for s in self.s_values:
                if not 1 <= s < self.n < self.m:
                    raise ValueError(f"need 1 <= s < n < m, got s={s}, n={self.n}, m={self.m}")

    @property
    def dist(self) -> str:
        return "rademacher" if self.kind == "rademacher-sweep" else "gaussian"

    def configurations(self):
        """``(s, sigma_w, c)`` triples in output order."""
        return [(s, sw, c) for s in self.s_values for sw in self.sigma_w_values
                for c in self.c_values]

    def summary_path(self) -> Path:
        p = Path(self.out_path)
        return p.with_name(p.stem + "_summary" + (p.suffix or ".csv"))


class _ProblemCache:
    """Per-problem quantities shared by every algorithm on that problem."""

    def __init__(self, problem: Problem):
        self.problem = problem
        self._lmax = None
        self._l1 = None

    @property
    def lmax(self) -> float:
        if self._lmax is None:
            self._lmax = gram_spectral_norm(self.problem.A)
        return self._lmax

    @property
    def l1_solver(self) -> WeightedL1Solver:
        if self._l1 is None:
            self._l1 = WeightedL1Solver(self.problem.A)
        return self._l1


def _lasso_weight(problem: Problem) -> float:
    if problem.sigma_w <= 0:
        raise ValueError("noise-calibrated lambda needs sigma_w > 0")
    return lasso_lambda(problem.sigma_w, problem.m)


def run_algorithm(name: str, cache: _ProblemCache, c: float = 0.1,
                  lambda_multipliers: dict | None = None):
    """Run ``name`` on the cached problem; returns ``(x_hat, iters, converged)``."""
    p = cache.problem
    A, b = p.A, p.b
    mult = (lambda_multipliers or {}).get(name, 1.0)
    if name == "oracle":
        return oracle_estimator(A, b, p.support), 1, True
    if name == "l1":
        r = min_l1(A, b, solver=cache.l1_solver)
    elif name == "reweighted-l1":
        r = reweighted_l1(A, b, epsilon=REWEIGHT_EPS, solver=cache.l1_solver)
    elif name == "scsa-lp":
        r = scsa(A, b, ScsaConfig.default("LP", c=c), l1_solver=cache.l1_solver)
    elif name in ("scsa-it", "scsa-fit"):
        cfg = ScsaConfig.default(name[5:].upper(), _lasso_weight(p), c=c)
        r = scsa(A, b, cfg, lmax=cache.lmax)
    elif name in ("ist", "fista"):
        params = LassoParams(_lasso_weight(p), ist_step(cache.lmax))
        fn = ist_lasso if name == "ist" else fista_lasso
        r = fn(A, b, params, tol=LASSO_TOL, max_iter=LASSO_MAX_ITER)
    elif name == "ilt":
        r = ilt(A, b, mult * _lasso_weight(p), ILT_BETA, ist_step(cache.lmax),
                tol=LASSO_TOL, max_iter=LASSO_MAX_ITER)
    elif name.startswith("ist-"):
        pval = 0.5 if name == "ist-p" else float(name[4:])
        r = ist_p(A, b, mult * _lasso_weight(p), pval, ist_step(cache.lmax),
                  tol=LASSO_TOL, max_iter=LASSO_MAX_ITER)
    else:  # pragma: no cover - guarded by _check_alg
        raise ValueError(name)
    return r.x_hat, r.inner_iters_total, r.converged


def run_trial(kind: str, algorithms, n: int, m: int, s: int, sigma_w: float, c: float,
              trial: int, seed: int, dist: str = "gaussian",
              lambda_multipliers: dict | None = None) -> list[MetricRecord]:
    """All algorithms on one seeded problem; errors become ``status="error"`` rows."""
    problem = gen_problem(n, m, s, dist=dist, sigma_w=sigma_w, seed=seed)
    cache = _ProblemCache(problem)
    rows = []
    for alg in algorithms:
        start = time.perf_counter()
        try:
            x_hat, iters, ok = run_algorithm(alg, cache, c, lambda_multipliers)
        except Exception:  # noqa: BLE001 - a failed solve must not abort the sweep
            elapsed = (time.perf_counter() - start) * 1e3
            rows.append(MetricRecord(kind, alg, n, m, s, sigma_w, c, trial, seed, "error",
                                     math.nan, False, False, math.nan, 0, elapsed))
            continue
        elapsed = (time.perf_counter() - start) * 1e3
        snr = snr_rec(problem.x_true, x_hat)
        rows.append(MetricRecord(
            experiment=kind, algorithm=alg, n=n, m=m, s=s, sigma_w=sigma_w, c=c,
            trial=trial, seed=seed, status="ok" if ok else "maxiter",
            snr_db=snr, success=snr >= SUCCESS_DB,
            support_exact=srr(problem.x_true, x_hat, s),
            sq_error=float(np.sum((x_hat - problem.x_true) ** 2)),
            iters=int(iters), wall_time_ms=elapsed,
        ))
    return rows


def _trial_args(spec: ExperimentSpec):
    for s, sw, c in spec.configurations():
        for t in range(spec.trials):
            yield (spec.kind, spec.algorithms, spec.n, spec.m, s, sw, c, t,
                   spec.base_seed + t, spec.dist, spec.lambda_multipliers)


def _run_packed(args):
    return run_trial(*args)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_rows(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MetricRecord.columns())
        for r in rows:
            w.writerow([_fmt(v) for v in asdict(r).values()])


_INT_COLS = {"n", "m", "s", "trial", "seed", "iters"}
_BOOL_COLS = {"success", "support_exact"}
_STR_COLS = {"experiment", "algorithm", "status"}


def read_rows(path) -> list[MetricRecord]:
    """Parse a per-row CSV written by :func:`write_rows`."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != MetricRecord.columns():
            raise ValueError(f"unexpected header {reader.fieldnames}")
        for row in reader:
            kw = {}
            for k, v in row.items():
                if k in _STR_COLS:
                    kw[k] = v
                elif k in _INT_COLS:
                    kw[k] = int(v)
                elif k in _BOOL_COLS:
                    kw[k] = v == "1"
                else:
                    kw[k] = float(v)
            out.append(MetricRecord(**kw))
    return out


def summarize(rows) -> list[dict]:
    """Per-configuration aggregates over rows with a usable estimate.

    Error rows count toward ``trials`` but not toward the metrics.  The
    median-SNR column uses the signal energy ``s`` for noisy problems (their
    signals are normalized to ``||x|| = sqrt(s)``); noise-free signals are
    not normalized, so there it reports the median of the per-trial SNRs.
    """
    groups: dict = {}
    for r in rows:
        key = (r.experiment, r.algorithm, r.n, r.m, r.s, r.sigma_w, r.c)
        groups.setdefault(key, []).append(r)
    out = []
    for key, rs in groups.items():
        good = [r for r in rs if r.status != "error"]
        rec = dict(zip(SUMMARY_COLUMNS[:7], key))
        rec["trials"] = len(rs)
        rec["n_ok"] = sum(r.status == "ok" for r in rs)
        if good:
            snrs = [r.snr_db for r in good]
            errs = [r.sq_error for r in good]
            if key[5] > 0:
                msnr = msnr_from_errors(float(key[4]), errs)
            else:
                msnr = float(np.median(snrs))
            rec.update(
                success_rate=sum(r.success for r in good) / len(good),
                msnr_db=msnr,
                mean_snr_db=float(np.mean(snrs)),
                mse=float(np.mean(errs)),
                srr=sum(r.support_exact for r in good) / len(good),
                mean_time_ms=float(np.mean([r.wall_time_ms for r in good])),
            )
        else:
            rec.update(success_rate=math.nan, msnr_db=math.nan, mean_snr_db=math.nan,
                       mse=math.nan, srr=math.nan, mean_time_ms=math.nan)
        out.append(rec)
    return out


def write_summary(path, summary) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for rec in summary:
            w.writerow([_fmt(rec[k]) for k in SUMMARY_COLUMNS])


def run_experiment(spec: ExperimentSpec, write: bool = True) -> tuple[list, list]:
    """Run every trial of ``spec``; returns ``(rows, summary)``.

    Rows come out ordered by configuration, then trial, then algorithm, no
    matter how many workers ran them.  ``operator-plot`` specs are rejected;
    use :func:`write_operator_csv`.
    """
    if spec.kind == "operator-plot":
        raise ValueError("operator-plot is not a Monte-Carlo sweep; use write_operator_csv")
    jobs = list(_trial_args(spec))
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_run_packed, jobs))
    else:
        results = [_run_packed(j) for j in jobs]
    rows = [r for trial_rows in results for r in trial_rows]
    summary = summarize(rows)
    if write:
        Path(spec.out_path).parent.mkdir(parents=True, exist_ok=True)
        write_rows(spec.out_path, rows)
        write_summary(spec.summary_path(), summary)
    return rows, summary


def tune_lambda(algorithm: str, n: int, m: int, s: int, sigma_w: float = 1e-2,
                grid=LAMBDA_GRID, trials: int = 10, base_seed: int = 0) -> float:
    """Pick the multiplier of the noise-calibrated weight with the best median SNR.

    Ties go to the earlier grid entry.  The result is meant to be reused at
    other noise levels, where the calibrated weight scales linearly.
    """
    algorithm = _check_alg(algorithm)
    if algorithm != "ilt" and not algorithm.startswith("ist-"):
        raise ValueError("tuning applies to ilt and ist-<p> only")
    grid = tuple(grid)
    if not grid:
        raise ValueError("empty grid")
    if len(grid) == 1:
        return float(grid[0])
    problems = [_ProblemCache(gen_problem(n, m, s, sigma_w=sigma_w, seed=base_seed + t))
                for t in range(trials)]
    best, best_val = grid[0], -math.inf
    for mult in grid:
        errs = []
        for cache in problems:
            try:
                x, _, _ = run_algorithm(algorithm, cache, lambda_multipliers={algorithm: mult})
                errs.append(float(np.sum((x - cache.problem.x_true) ** 2)))
            except Exception:  # noqa: BLE001
                errs.append(math.inf)
        val = msnr_from_errors(float(s), errs) if not all(map(math.isinf, errs)) else -math.inf
        if val > best_val:
            best, best_val = mult, val
    return float(best)


def operator_curves(sigmas, lam: float = 1.0, grid=(-4.0, 4.0, 801), mu: float = 1.0):
    """Thresholding curves on a grid, with ``lambda_sigma = lam * sigma``.

    Returns ``(x0, curves)`` where ``curves`` maps column names to arrays:
    one ``scsa_sigma=<sigma>`` column per sigma plus the soft (``mu lam``)
    and hard (``mu lam sigma_min``) references the curves interpolate
    between.
    """
    a, b_, k = grid
    x0 = np.linspace(float(a), float(b_), int(k))
    sigmas = [float(s) for s in sigmas]
    if not sigmas:
        raise ValueError("need at least one sigma")
    curves = {}
    for sg in sigmas:
        curves[f"scsa_sigma={sg!r}"] = scsa_threshold(x0, mu * lam * sg, sg)
    curves["soft"] = soft(x0, mu * lam)
    curves["hard"] = hard(x0, mu * lam * min(sigmas))
    return x0, curves


def write_operator_csv(path, sigmas, lam: float = 1.0, grid=(-4.0, 4.0, 801),
                       mu: float = 1.0) -> Path:
    x0, curves = operator_curves(sigmas, lam, grid, mu)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x0", *curves])
        for i, v in enumerate(x0):
            w.writerow([repr(float(v)), *(repr(float(c[i])) for c in curves.values())])
    return path


def parse_range(text: str, integer: bool = False) -> list:
    """Parse ``"a,b,c"`` or an inclusive ``"start:stop:step"`` range."""
    conv = int if integer else float
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (conv(p) for p in parts)
        if step <= 0:
            raise ValueError("range step must be positive")
        out = []
        k = 0
        while True:
            v = start + k * step
            if v > stop + (0 if integer else 1e-12 * max(1.0, abs(stop))):
                break
            out.append(conv(round(v, 12)) if not integer else v)
            k += 1
        return out
    return parse_list(text, integer)


def parse_list(text: str, integer: bool = False) -> list:
    conv = int if integer else float
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise ValueError("empty list")
    return [conv(t) for t in items]
