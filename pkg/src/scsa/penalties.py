"""Delta-approximating sparsity penalties.

A delta-approximating function ``f`` is concave on [0, inf), vanishes only
at 0 and tends to 1 at infinity, so ``F_sigma(|x|) = sum_i f(|x_i| / sigma)``
counts nonzeros more and more sharply as ``sigma`` shrinks.  The concrete
family used throughout the package is ``f(t) = 1 - exp(-t)``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DeltaApproximation",
    "ExponentialDA",
    "PenaltyParams",
    "f_sigma",
    "big_f",
    "mm_weights",
    "log_penalty",
]


class DeltaApproximation(ABC):
    """A scalar DA function ``f`` on [0, inf) together with its derivative.

    ``gamma`` is ``f'(0)``; ``sigma * F_sigma / gamma`` tends to the l1 norm
    as ``sigma`` grows.
    """

    gamma: float

    @abstractmethod
    def value(self, t: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def derivative(self, t: np.ndarray) -> np.ndarray: ...

    def scaled_value(self, x_abs, sigma: float):
        return self.value(np.asarray(x_abs, dtype=float) / sigma)

    def scaled_derivative(self, x_abs, sigma: float):
        """Derivative of ``t -> f(t / sigma)`` evaluated at ``x_abs``."""
        return self.derivative(np.asarray(x_abs, dtype=float) / sigma) / sigma


class ExponentialDA(DeltaApproximation):
    """``f(t) = 1 - exp(-t)``."""

    gamma = 1.0

    def value(self, t):
        return -np.expm1(-t)

    def derivative(self, t):
        return np.exp(-t)


EXPONENTIAL = ExponentialDA()


@dataclass(frozen=True)
class PenaltyParams:
    lambda_sigma: float
    gamma: float = 1.0

    def __post_init__(self):
        if self.lambda_sigma < 0:
            raise ValueError("lambda_sigma must be nonnegative")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")


def _check_sigma(sigma):
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")


def f_sigma(x, sigma: float):
    """``1 - exp(-x / sigma)`` for ``x >= 0`` (scalar or array)."""
    _check_sigma(sigma)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("f_sigma takes nonnegative arguments; pass |x|")
    out = -np.expm1(-x / sigma)
    return float(out) if out.ndim == 0 else out


def big_f(x, sigma: float) -> float:
    """Smoothed l0 count ``sum_i f_sigma(|x_i|)``."""
    _check_sigma(sigma)
    return float(np.sum(-np.expm1(-np.abs(np.asarray(x, dtype=float)) / sigma)))


def mm_weights(x_abs, sigma: float) -> np.ndarray:
    """Gradient of ``F_sigma`` at ``x_abs``: ``exp(-x_abs / sigma) / sigma``.

    These are the weights of the weighted-l1 majorizer.  Values that would
    underflow are floored at the smallest normal float so every weight stays
    strictly positive.
    """
    _check_sigma(sigma)
    x_abs = np.asarray(x_abs, dtype=float)
    if np.any(x_abs < 0):
        raise ValueError("mm_weights takes nonnegative arguments")
    w = np.exp(-x_abs / sigma) / sigma
    return np.maximum(w, np.finfo(float).tiny)


def log_penalty(x, beta: float) -> float:
    """``sum_i log(|x_i| + beta)``."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    return float(np.sum(np.log(np.abs(np.asarray(x, dtype=float)) + beta)))
