"""NumPy implementations of the hot numeric kernels.

These are the fallback backend used when the compiled extension
(:mod:`autoviz._ckernels`) is unavailable; both backends implement the
same contract and are compared directly by ``benchmarks/bench_kernels.py``
and the kernel test suite.
"""

from __future__ import annotations

import numpy as np

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def kde_gaussian(values: np.ndarray, grid: np.ndarray, h: float) -> np.ndarray:
    """Evaluate a Gaussian-kernel density estimate on ``grid``.

    density(g) = 1/(n*h) * sum_i exp(-((g - x_i)/h)^2 / 2) / sqrt(2*pi)
    """
    values = np.asarray(values, dtype=np.float64)
    grid = np.asarray(grid, dtype=np.float64)
    u = (grid[:, None] - values[None, :]) / h
    dens = np.exp(-0.5 * u * u).sum(axis=1)
    return dens / (len(values) * h * _SQRT_2PI)


def masked_distances(x: np.ndarray, present: np.ndarray, row: int) -> np.ndarray:
    """Partial Euclidean distances from ``row`` to every row of ``x``.

    Dimensions missing in either row are skipped; the sum of squares is
    rescaled by total_dims/used_dims before the square root.  Pairs with
    no shared dimension get +inf.  ``x`` must already be standardized and
    hold 0.0 in missing cells (masked by ``present``).
    """
    x = np.asarray(x, dtype=np.float64)
    present = np.asarray(present, dtype=bool)
    n, p = x.shape
    if p == 0:
        return np.full(n, np.inf)
    both = present & present[row]
    used = both.sum(axis=1)
    diff = (x - x[row]) * both
    sq = (diff * diff).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        dist = np.sqrt(sq * (p / used))
    dist[used == 0] = np.inf
    return dist
