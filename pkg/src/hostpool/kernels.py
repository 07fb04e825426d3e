"""Statistical workloads used by the benchmarks.

* Gaussian kernel density estimates on a fixed grid.
* Kendall's tau-b, both by direct pair enumeration (O(n^2)) and by
  Knight's merge-sort method (O(n log n)).
* A Kendall correlation matrix whose outer loop is run on a thread pool.

The heavy loops release the GIL (numpy ufuncs, a ``nogil`` numba kernel)
so they do scale across pool workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from .errors import AllTied, DegenerateSample, LengthMismatch

__all__ = [
    "DensityEstimate",
    "kde_gauss",
    "kendall_matrix",
    "kendall_row",
    "kendall_tau_brute",
    "kendall_tau_knight",
    "silverman_bandwidth",
]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _as_sample(x, min_len: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("sample must be one-dimensional")
    if x.size < min_len:
        raise ValueError(f"sample needs at least {min_len} values, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite values")
    return x


# ---------------------------------------------------------------------------
# Kernel density estimation


@dataclass(frozen=True)
class DensityEstimate:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float

    def integral(self) -> float:
        """Trapezoid-rule mass of the estimate over its grid."""
        y, g = self.density, self.grid
        return float(np.sum((y[1:] + y[:-1]) * np.diff(g)) / 2.0)


def silverman_bandwidth(x) -> float:
    """Silverman's rule of thumb, ``0.9 * min(sd, IQR / 1.349) * n ** -0.2``.

    Falls back to the standard deviation when the IQR is zero.
    """
    x = _as_sample(x, 1)
    n = x.size
    sd = float(np.std(x, ddof=1)) if n > 1 else 0.0
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(sd, (q75 - q25) / 1.349)
    if spread <= 0.0:
        spread = sd
    if spread <= 0.0:
        raise DegenerateSample("all sample values are identical; bandwidth would be 0")
    return 0.9 * spread * n ** -0.2


def kde_gauss(x, n_grid: int = 500, bandwidth: Optional[float] = None,
              block: int = 256) -> DensityEstimate:
    """Gaussian kernel density estimate of ``x`` on ``n_grid`` points.

    The grid spans ``[min(x) - 3h, max(x) + 3h]``.  ``bandwidth`` defaults
    to :func:`silverman_bandwidth`.  Data are processed ``block`` values at
    a time to bound memory use.
    """
    x = _as_sample(x, 1)
    h = silverman_bandwidth(x) if bandwidth is None else float(bandwidth)
    if not h > 0.0:
        raise ValueError("bandwidth must be positive")
    if n_grid < 2:
        raise ValueError("n_grid must be at least 2")
    grid = np.linspace(x.min() - 3.0 * h, x.max() + 3.0 * h, n_grid)
    density = np.zeros(n_grid)
    for start in range(0, x.size, block):
        z = grid[:, None] - x[None, start:start + block]
        z /= h
        np.square(z, out=z)
        z *= -0.5
        np.exp(z, out=z)
        density += z.sum(axis=1)
    density *= _INV_SQRT_2PI / (x.size * h)
    return DensityEstimate(grid, density, h)


# ---------------------------------------------------------------------------
# Kendall's tau


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = _as_sample(x, 2)
    y = _as_sample(y, 2)
    if x.size != y.size:
        raise LengthMismatch(f"samples have lengths {x.size} and {y.size}")
    return x, y


def _tau_b(n: int, concordant_minus_discordant: int, x_ties: int, y_ties: int) -> float:
    n0 = n * (n - 1) // 2
    denom = (n0 - x_ties) * (n0 - y_ties)
    if denom == 0:
        raise AllTied("every pair is tied in one of the samples")
    return concordant_minus_discordant / math.sqrt(denom)


def kendall_tau_brute(x, y) -> float:
    """Kendall's tau-b by looking at all ``n (n - 1) / 2`` pairs."""
    x, y = _pair(x, y)
    n = x.size
    iu = np.triu_indices(n, k=1)
    sx = np.sign(x[:, None] - x[None, :])[iu]
    sy = np.sign(y[:, None] - y[None, :])[iu]
    s = int(np.sum(sx * sy))
    return _tau_b(n, s, int(np.sum(sx == 0)), int(np.sum(sy == 0)))


@numba.njit(nogil=True, cache=True)
def _count_exchanges(a):
    """Sort ``a`` in place with a bottom-up merge sort; return the number of
    exchanges, i.e. pairs ``i < j`` with ``a[i] > a[j]``."""
    n = a.shape[0]
    buf = np.empty_like(a)
    src = a
    dst = buf
    swaps = 0
    passes = 0
    width = 1
    while width < n:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if src[j] < src[i]:
                    dst[k] = src[j]
                    swaps += mid - i
                    j += 1
                else:
                    dst[k] = src[i]
                    i += 1
                k += 1
            while i < mid:
                dst[k] = src[i]
                i += 1
                k += 1
            while j < hi:
                dst[k] = src[j]
                j += 1
                k += 1
            lo += 2 * width
        src, dst = dst, src
        width *= 2
        passes += 1
    if passes % 2 == 1:
        a[:] = src
    return swaps


@numba.njit(nogil=True, cache=True)
def _tied_pairs(sorted_values):
    total = 0
    run = 1
    for i in range(1, sorted_values.shape[0]):
        if sorted_values[i] == sorted_values[i - 1]:
            run += 1
        else:
            total += run * (run - 1) // 2
            run = 1
    return total + run * (run - 1) // 2


@numba.njit(nogil=True, cache=True)
def _joint_tied_pairs(xs, ys):
    total = 0
    run = 1
    for i in range(1, xs.shape[0]):
        if xs[i] == xs[i - 1] and ys[i] == ys[i - 1]:
            run += 1
        else:
            total += run * (run - 1) // 2
            run = 1
    return total + run * (run - 1) // 2


def kendall_tau_knight(x, y) -> float:
    """Kendall's tau-b in O(n log n) with Knight's algorithm.

    Pairs are sorted by x (ties broken by y).  Merge-sorting the y column
    then counts the exchanges, which are exactly the discordant pairs;
    x-ties, y-ties and joint ties are counted from runs in the sorted
    columns.  The result equals :func:`kendall_tau_brute` exactly.
    """
    x, y = _pair(x, y)
    n = x.size
    order = np.lexsort((y, x))
    xs = x[order]
    ys = np.ascontiguousarray(y[order])
    x_ties = int(_tied_pairs(xs))
    joint_ties = int(_joint_tied_pairs(xs, ys))
    discordant = int(_count_exchanges(ys))
    y_ties = int(_tied_pairs(ys))
    n0 = n * (n - 1) // 2
    s = n0 - x_ties - y_ties + joint_ties - 2 * discordant
    return _tau_b(n, s, x_ties, y_ties)


def kendall_row(data: np.ndarray, i: int, out: np.ndarray) -> None:
    """Fill row and column ``i`` of ``out`` for all partners ``j > i``.

    Row ``i`` has ``d - i - 1`` pairs, so early rows cost more than late
    ones.
    """
    d = data.shape[0]
    out[i, i] = 1.0
    for j in range(i + 1, d):
        tau = kendall_tau_knight(data[i], data[j])
        out[i, j] = tau
        out[j, i] = tau


def kendall_matrix(data, pool=None, n_batches: Optional[int] = None) -> np.ndarray:
    """Matrix of pairwise Kendall's tau-b for ``d`` samples of length ``n``.

    ``data`` has shape ``(d, n)``, one sample per row.  With a
    :class:`~hostpool.ThreadPool` the outer loop over rows runs on the pool
    (this call then waits on it, so use it from the host thread); without
    one it runs sequentially.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2 or data.shape[0] < 2:
        raise ValueError("data must have shape (d, n) with d >= 2")
    d = data.shape[0]
    out = np.empty((d, d))
    if pool is None:
        for i in range(d):
            kendall_row(data, i, out)
    else:
        pool.parallel_for(0, d, lambda i: kendall_row(data, i, out), n_batches)
        pool.wait()
    return out
