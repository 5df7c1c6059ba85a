"""Partial sums, mean-constant estimation, and the error terms Delta and Delta_2."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .coefficients import CoefficientTable, sieve_divisor
from .errors import RangeError

EULER_GAMMA = 0.57721566490153286061
RS_EXPONENT = 3 / 5


@dataclass
class MeanConstantEstimate:
    """Estimated mean value of a coefficient sequence.

    Attributes:
        value: Point estimate.
        method: "least-squares" or "difference-quotient".
        sample: Human-readable description of the sample points.
        uncertainty: Half-width of the spread across disjoint subsamples.
    """

    value: float
    method: str
    sample: str
    uncertainty: float


@dataclass
class ErrorTermSample:
    x: float
    delta: float

    @property
    def normalized(self) -> float:
        return self.delta / self.x ** RS_EXPONENT


def _check_x(x: float, n_max: int) -> int:
    if not 0 <= x <= n_max:
        raise RangeError(f"x = {x} outside table range [0, {n_max}]")
    return math.floor(x)


def partial_sum_c(x: float, table: CoefficientTable) -> float:
    """sum_{n <= x} c_n."""
    return float(table.prefix_c[_check_x(x, table.n_max)])


def delta(x: float, C: float, table: CoefficientTable) -> float:
    """Delta(x) = sum_{n <= x} c_n - C x."""
    return partial_sum_c(x, table) - C * x


def delta_array(xs, C: float, table: CoefficientTable) -> np.ndarray:
    """Vectorized :func:`delta` over an array of x."""
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size and (xs.min() < 0 or xs.max() > table.n_max):
        raise RangeError(f"x outside table range [0, {table.n_max}]")
    return table.prefix_c[np.floor(xs).astype(np.int64)] - C * xs


def sample_delta(x: float, C: float, table: CoefficientTable) -> ErrorTermSample:
    return ErrorTermSample(x, delta(x, C, table))


def _geometric_integers(lo: int, hi: int, count: int) -> np.ndarray:
    return np.unique(np.round(np.geomspace(lo, hi, count)).astype(np.int64))


def _lsq_slope(prefix: np.ndarray, xs: np.ndarray) -> float:
    x = xs.astype(np.float64)
    return float(np.dot(prefix[xs], x) / np.dot(x, x))


def estimate_C(table: CoefficientTable, method: str = "least-squares", *,
               points: int = 200, subsamples: int = 4,
               min_n: int = 10_000) -> MeanConstantEstimate:
    """Estimate C in sum_{n<=x} c_n ~ C x.

    least-squares fits a line through the origin to the prefix sums at
    ~200 geometrically spaced integers in [n_max/100, n_max]; the subsamples
    are interleaved slices of those points. difference-quotient averages
    (P(2N) - P(N)) / N over the top octaves N = n_max/2, n_max/4, ...
    """
    return estimate_mean(table.prefix_c, method, points=points,
                         subsamples=subsamples, min_n=min_n)


def estimate_mean(prefix: np.ndarray, method: str = "least-squares", *,
                  points: int = 200, subsamples: int = 4,
                  min_n: int = 10_000) -> MeanConstantEstimate:
    """:func:`estimate_C` on a bare prefix-sum array (prefix[0] = 0)."""
    n_max = len(prefix) - 1
    if n_max < min_n:
        raise RangeError(f"table too small for estimation: n_max = {n_max} < {min_n}")
    if method in ("least-squares", "lsq"):
        xs = _geometric_integers(max(1, n_max // 100), n_max, points)
        value = _lsq_slope(prefix, xs)
        parts = [_lsq_slope(prefix, xs[i::subsamples]) for i in range(subsamples)]
        sample = f"{len(xs)} geometric points in [{xs[0]}, {xs[-1]}]"
        method = "least-squares"
    elif method in ("difference-quotient", "diffquot"):
        octaves = []
        N = n_max // 2
        while N >= max(1, n_max // 64):
            octaves.append(N)
            N //= 2
        parts = [(prefix[2 * N] - prefix[N]) / N for N in octaves]
        value = float(np.mean(parts))
        sample = f"{len(octaves)} octaves (N, 2N] with N in [{octaves[-1]}, {octaves[0]}]"
        method = "difference-quotient"
    else:
        raise ValueError(f"unknown method {method!r}")
    spread = (max(parts) - min(parts)) / 2
    return MeanConstantEstimate(float(value), method, sample, float(spread))


def delta_sensitivity(x: float, shift: float) -> float:
    """Change in Delta(x) when C is replaced by C + shift."""
    return -shift * x


@dataclass(frozen=True, eq=False)
class DivisorTable:
    """d(n) and its exact integer prefix sums up to n_max."""

    n_max: int
    d: np.ndarray
    prefix: np.ndarray


def build_divisor_table(n_max: int) -> DivisorTable:
    d = sieve_divisor(n_max)
    prefix = np.cumsum(d, dtype=np.int64)
    return DivisorTable(n_max, d, prefix)


def delta2(x: float, divisors: DivisorTable) -> float:
    """Dirichlet divisor error term sum_{n<=x} d(n) - x (log x + 2 gamma - 1)."""
    if not 1 <= x <= divisors.n_max:
        raise RangeError(f"x = {x} outside divisor table range [1, {divisors.n_max}]")
    return float(divisors.prefix[math.floor(x)]) - x * (math.log(x) + 2 * EULER_GAMMA - 1)


def delta2_window(m: np.ndarray, U: int, divisors: DivisorTable) -> np.ndarray:
    """Delta_2(m + U) - Delta_2(m) at integer m >= 1, integer U >= 0.

    The main-term difference is formed as U (log m + 2 gamma - 1)
    + (m + U) log1p(U / m) to avoid subtracting two O(m log m) numbers.
    """
    m = np.asarray(m, dtype=np.int64)
    if m.size and (m.min() < 1 or m.max() + U > divisors.n_max):
        raise RangeError(f"window [m, m + {U}] leaves divisor table range")
    count = (divisors.prefix[m + U] - divisors.prefix[m]).astype(np.float64)
    mf = m.astype(np.float64)
    main = U * (np.log(mf) + 2 * EULER_GAMMA - 1) + (mf + U) * np.log1p(U / mf)
    return count - main


def sum_a_squared(x: float, table: CoefficientTable) -> Tuple[float, float]:
    """(sum_{n<=x} a(n)^2, that sum / x^kappa)."""
    n = _check_x(x, table.n_max)
    total = sum(int(v) * int(v) for v in table.tau[1:n + 1])
    if x == 0:
        return 0.0, 0.0
    return float(total), float(total / x ** table.kappa)


def running_max_envelope(table: CoefficientTable, C: float, lo: int = 1000,
                         hi: int | None = None,
                         exponent: float = RS_EXPONENT) -> Tuple[np.ndarray, np.ndarray]:
    """Running max of |Delta(x)| / x^exponent over real x in [lo, hi].

    Delta decreases linearly between integers, so the supremum on
    [n, n+1) is attained at n or approached as x -> (n+1)-.

    Returns:
        (n, running maximum up to n) for integer n in [lo, hi].
    """
    hi = table.n_max if hi is None else hi
    n = np.arange(lo, hi + 1, dtype=np.int64)
    p = table.prefix_c[n]
    at_n = np.abs(p - C * n) / n.astype(np.float64) ** exponent
    right = n[:-1] + 1
    before_next = np.abs(p[:-1] - C * right) / right.astype(np.float64) ** exponent
    stat = at_n.copy()
    stat[:-1] = np.maximum(stat[:-1], before_next)
    return n, np.maximum.accumulate(stat)
