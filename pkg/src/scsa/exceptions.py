"""Exception types shared across the package."""

import numpy as np


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap before meeting its tolerance.

    The best estimate found so far is kept on ``best`` so callers can decide
    whether it is usable.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class RankDeficientError(np.linalg.LinAlgError):
    """Restricted column submatrix is numerically rank deficient."""


class InfeasibleError(ValueError):
    """The equality constraints admit no (numerically) feasible point."""
