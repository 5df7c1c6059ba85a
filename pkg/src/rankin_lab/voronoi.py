"""Truncated Voronoi-type expansion of Delta(x) and its truncation error."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .coefficients import CoefficientTable
from .error_terms import delta
from .errors import RangeError


@dataclass
class VoronoiEvaluation:
    x: float
    K: int
    value: float
    exact_delta: float

    @property
    def abs_error(self) -> float:
        return abs(self.value - self.exact_delta)


def voronoi_terms(x: float, K: int, table: CoefficientTable) -> np.ndarray:
    """Terms c_k k^(-5/8) sin(8 pi (k x)^(1/4) + 3 pi / 4) for k = 1..K, unscaled."""
    if K < 1 or K > table.n_max:
        raise RangeError(f"K = {K} outside [1, {table.n_max}]")
    if x < 1:
        raise RangeError(f"x = {x} must be >= 1")
    k = np.arange(1, K + 1, dtype=np.float64)
    phase = 8 * math.pi * (k * x) ** 0.25 + 0.75 * math.pi
    return table.c[1:K + 1] * k ** -0.625 * np.sin(phase)


def _prefactor(x: float) -> float:
    return x ** 0.375 / (2 * math.pi)


def voronoi_delta(x: float, K: int, table: CoefficientTable) -> float:
    """x^(3/8) / (2 pi) * sum_{k<=K} c_k k^(-5/8) sin(8 pi (kx)^(1/4) + 3 pi/4).

    The sum is accumulated with math.fsum in ascending k.
    """
    return _prefactor(x) * math.fsum(voronoi_terms(x, K, table))


def voronoi_partial(x: float, K1: int, K2: int, table: CoefficientTable) -> float:
    """Contribution of K1 < k <= K2 to :func:`voronoi_delta`."""
    terms = voronoi_terms(x, K2, table)
    return _prefactor(x) * math.fsum(terms[K1:])


def voronoi_prefix(x: float, K: int, table: CoefficientTable) -> np.ndarray:
    """voronoi_delta(x, k) for every k = 1..K in one pass (compensated cumsum)."""
    terms = voronoi_terms(x, K, table)
    out = np.empty(K)
    total = comp = 0.0
    for i, t in enumerate(terms.tolist()):
        s = total + t
        if abs(total) >= abs(t):
            comp += (total - s) + t
        else:
            comp += (t - s) + total
        total = s
        out[i] = total + comp
    return _prefactor(x) * out


def evaluate(x: float, K: int, C: float, table: CoefficientTable) -> VoronoiEvaluation:
    return VoronoiEvaluation(x, K, voronoi_delta(x, K, table), delta(x, C, table))


@dataclass
class TruncationScan:
    """Log-log fits of jitter-averaged |truncation error| against K.

    Attributes:
        x_grid: Centre points x.
        K_grid: Truncation parameters.
        mean_abs_error: Array (len(x_grid), len(K_grid)).
        slopes, intercepts: Per-x least-squares fit of log error on log K.
    """

    x_grid: List[float]
    K_grid: List[int]
    mean_abs_error: np.ndarray
    slopes: np.ndarray
    intercepts: np.ndarray


def jitter_points(x: float, count: int = 100, width: float = 1e-2) -> np.ndarray:
    return np.linspace(x, x * (1 + width), count)


def truncation_scan(x_grid: Sequence[float], K_grid: Sequence[int],
                    table: CoefficientTable, C: float, *, jitter: int = 100,
                    width: float = 1e-2) -> TruncationScan:
    """Slope of the mean |voronoi_delta - Delta| against K, per x.

    |error| is averaged over `jitter` points evenly spread in [x, x(1+width)]
    because at a single x it oscillates too much for a meaningful fit.
    """
    if not len(x_grid) or not len(K_grid):
        raise RangeError("grids must be nonempty")
    K_grid = sorted(int(k) for k in K_grid)
    Kmax = K_grid[-1]
    idx = np.array(K_grid) - 1
    errors = np.zeros((len(x_grid), len(K_grid)))
    for i, x in enumerate(x_grid):
        pts = jitter_points(x, jitter, width)
        acc = np.zeros(len(K_grid))
        for xj in pts:
            exact = delta(xj, C, table)
            acc += np.abs(voronoi_prefix(xj, Kmax, table)[idx] - exact)
        errors[i] = acc / len(pts)
    logK = np.log(np.array(K_grid, dtype=np.float64))
    slopes = np.zeros(len(x_grid))
    intercepts = np.zeros(len(x_grid))
    for i in range(len(x_grid)):
        row = errors[i]
        if np.all(row == row[0]):
            slopes[i], intercepts[i] = 0.0, (math.log(row[0]) if row[0] > 0 else -math.inf)
            continue
        slopes[i], intercepts[i] = np.polyfit(logK, np.log(row), 1)
    return TruncationScan(list(x_grid), K_grid, errors, slopes, intercepts)


def crossover_report(x: float, K: int, C: float, table: CoefficientTable,
                     U: float, typical_window: Optional[float] = None) -> dict:
    """Compare truncation error at x with a typical short-interval window size."""
    ev = evaluate(x, K, C, table)
    return {"x": x, "K": K, "U": U, "abs_error": ev.abs_error,
            "typical_window": typical_window,
            "error_exceeds_window": (None if typical_window is None
                                     else ev.abs_error > typical_window)}
