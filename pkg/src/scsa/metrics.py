"""Reconstruction metrics and per-trial records."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

__all__ = [
    "SNR_CAP_DB",
    "SUCCESS_DB",
    "MetricRecord",
    "snr_rec",
    "msnr_rec",
    "msnr_from_errors",
    "srr",
    "success_rate",
    "mse",
]

SNR_CAP_DB = 300.0
SUCCESS_DB = 60.0


def snr_rec(x_true, x_hat) -> float:
    """``20 log10(||x_true|| / ||x_true - x_hat||)``, capped at 300 dB."""
    x_true = np.asarray(x_true, dtype=float)
    sig = float(np.linalg.norm(x_true))
    if sig == 0.0:
        raise ValueError("reconstruction SNR is undefined for a zero signal")
    err = float(np.linalg.norm(x_true - np.asarray(x_hat, dtype=float)))
    if err == 0.0:
        return SNR_CAP_DB
    return min(20.0 * math.log10(sig / err), SNR_CAP_DB)


def _median(values) -> float:
    return float(np.median(np.asarray(values, dtype=float)))


def msnr_from_errors(signal_energy: float, sq_errors) -> float:
    """``10 log10(signal_energy / median(sq_errors))``, capped at 300 dB."""
    sq_errors = list(sq_errors)
    if not sq_errors:
        raise ValueError("median SNR needs at least one trial")
    med = _median(sq_errors)
    if med == 0.0:
        return SNR_CAP_DB
    return min(10.0 * math.log10(signal_energy / med), SNR_CAP_DB)


def msnr_rec(x_true_list, x_hat_list) -> float:
    """Median reconstruction SNR over matched trials.

    Trials are assumed to share the signal energy (noisy instances are
    normalized to ``||x|| = sqrt(s)``); the mean energy is used.
    """
    if len(x_true_list) == 0 or len(x_true_list) != len(x_hat_list):
        raise ValueError("need nonempty, equally long lists")
    energy = float(np.mean([np.sum(np.asarray(x) ** 2) for x in x_true_list]))
    errs = [float(np.sum((np.asarray(x) - np.asarray(y)) ** 2))
            for x, y in zip(x_true_list, x_hat_list)]
    return msnr_from_errors(energy, errs)


def srr(x_true, x_hat, s: int) -> bool:
    """True iff the ``s`` largest-magnitude entries of ``x_hat`` sit on the true support.

    Ties go to the lower index; an all-zero estimate never counts.
    """
    x_hat = np.abs(np.asarray(x_hat, dtype=float))
    if s < 1 or not np.any(x_hat):
        return False
    top = np.sort(np.argsort(-x_hat, kind="stable")[:s])
    return bool(np.array_equal(top, np.flatnonzero(np.asarray(x_true))))


@dataclass(frozen=True)
class MetricRecord:
    experiment: str
    algorithm: str
    n: int
    m: int
    s: int
    sigma_w: float
    c: float
    trial: int
    seed: int
    status: str
    snr_db: float
    success: bool
    support_exact: bool
    sq_error: float
    iters: int
    wall_time_ms: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def _snr_values(records_or_values):
    return [r.snr_db if isinstance(r, MetricRecord) else float(r) for r in records_or_values]


def success_rate(records_or_snrs, threshold_db: float = SUCCESS_DB) -> float:
    """Fraction of trials with ``SNR >= threshold_db``."""
    snrs = _snr_values(records_or_snrs)
    if not snrs:
        raise ValueError("success rate of an empty set")
    return sum(v >= threshold_db for v in snrs) / len(snrs)


def mse(records_or_errors) -> float:
    """Sample mean of squared errors."""
    errs = [r.sq_error if isinstance(r, MetricRecord) else float(r) for r in records_or_errors]
    if not errs:
        raise ValueError("MSE of an empty set")
    return float(np.mean(errs))
