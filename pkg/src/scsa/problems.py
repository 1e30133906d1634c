"""Seeded random compressed-sensing instances.

Random numbers come from NumPy's counter-based Philox4x64 bit generator
keyed by the problem seed.  Gaussian variates are produced by an explicit
Box-Muller transform of uniform doubles and the random support by ranking
uniforms, so every variate consumes a fixed number of raw draws and the
stream layout is fixed by this module rather than by NumPy's samplers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .linalg import load_matrix_csv, save_matrix_csv

__all__ = ["Problem", "gen_problem", "save_problem", "load_problem", "rng_for"]

DISTRIBUTIONS = ("gaussian", "rademacher")
RNG_ALGORITHM = "philox4x64-boxmuller-v1"


def rng_for(seed: int) -> np.random.Generator:
    if not 0 <= int(seed) < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(int(seed)))


def _std_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    k = (size + 1) // 2
    u1 = 1.0 - rng.random(k)  # (0, 1], keeps the log finite
    u2 = rng.random(k)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2.0 * math.pi * u2), r * np.sin(2.0 * math.pi * u2)])
    return z[:size]


@dataclass(frozen=True)
class Problem:
    A: np.ndarray
    b: np.ndarray
    x_true: np.ndarray
    sigma_w: float
    s: int
    dist: str
    seed: int

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.A.shape[1]

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x_true)

    def metadata(self) -> dict:
        return {"n": self.n, "m": self.m, "s": self.s, "dist": self.dist,
                "sigma_w": self.sigma_w, "seed": self.seed, "rng": RNG_ALGORITHM}


def gen_problem(n: int, m: int, s: int, dist: str = "gaussian",
                sigma_w: float = 0.0, seed: int = 0) -> Problem:
    """Draw ``b = A x + w`` with unit-norm Gaussian columns and an s-sparse ``x``.

    With noise (``sigma_w > 0``) the sparse vector is rescaled to norm
    ``sqrt(s)`` before the measurements are formed.
    """
    if not (1 <= s < n < m):
        raise ValueError(f"need 1 <= s < n < m, got s={s}, n={n}, m={m}")
    if dist not in DISTRIBUTIONS:
        raise ValueError(f"dist must be one of {DISTRIBUTIONS}")
    if sigma_w < 0:
        raise ValueError("sigma_w must be nonnegative")
    rng = rng_for(seed)

    A = _std_normal(rng, n * m).reshape(n, m)
    A /= np.linalg.norm(A, axis=0)

    support = np.sort(np.argsort(rng.random(m), kind="stable")[:s])
    if dist == "gaussian":
        amp = _std_normal(rng, s)
    else:
        amp = np.where(rng.random(s) < 0.5, -1.0, 1.0)
    x = np.zeros(m)
    x[support] = amp

    b = A @ x
    if sigma_w > 0:
        x *= math.sqrt(s) / np.linalg.norm(x)
        b = A @ x + sigma_w * _std_normal(rng, n)
    return Problem(A=A, b=b, x_true=x, sigma_w=float(sigma_w), s=int(s),
                   dist=dist, seed=int(seed))


def save_problem(problem: Problem, directory) -> Path:
    """Write ``A.csv``, ``b.csv``, ``x_true.csv`` and ``meta.json`` into ``directory``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    save_matrix_csv(d / "A.csv", problem.A)
    save_matrix_csv(d / "b.csv", problem.b.reshape(-1, 1))
    save_matrix_csv(d / "x_true.csv", problem.x_true.reshape(-1, 1))
    (d / "meta.json").write_text(json.dumps(problem.metadata(), indent=2) + "\n")
    return d


def load_problem(directory) -> Problem:
    d = Path(directory)
    meta = json.loads((d / "meta.json").read_text())
    A = load_matrix_csv(d / "A.csv")
    b = load_matrix_csv(d / "b.csv").ravel()
    x = load_matrix_csv(d / "x_true.csv").ravel()
    if A.shape != (meta["n"], meta["m"]) or b.size != meta["n"] or x.size != meta["m"]:
        raise ValueError(f"{d}: array shapes disagree with meta.json")
    return Problem(A=A, b=b, x_true=x, sigma_w=float(meta["sigma_w"]), s=int(meta["s"]),
                   dist=meta["dist"], seed=int(meta["seed"]))
