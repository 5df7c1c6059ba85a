"""
Continuous and discrete mean squares of Delta(x + U) - Delta(x).

The window Delta(x + U) - Delta(x) = sum_{x < n <= x+U} c_n - CU is a step
function of x, so its integral over [X, 2X] is a finite sum over breakpoints.
With U = Ui + f (0 <= f < 1) each unit cell [m, m+1) splits at m + 1 - f.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from .bounds import (BoundEnvelope, MU_LINDELOF, default_envelopes,
                     improvement_range, trivial_envelope, beta_of_mu)
from .coefficients import CoefficientTable
from .errors import RangeError


@dataclass
class IntervalMeanSquare:
    """Mean squares of one (X, U) cell.

    Attributes:
        continuous: int_X^{2X} (Delta(x+U) - Delta(x))^2 dx.
        discrete: sum over X < n <= 2X of the squared window.
        shifted_discrete: sum over X <= m <= 2X - 1.
        breakpoints: Number of distinct breakpoints in [X, 2X].
        max_window: max |window| over integer starts X <= n <= 2X.
        envelopes: Unfitted envelope shapes keyed by name.
        u: log U / log X when the cell came from a sweep.
    """

    X: int
    U: float
    continuous: float
    discrete: float
    shifted_discrete: float
    breakpoints: int
    max_window: float
    envelopes: Dict[str, float] = field(default_factory=dict)
    u: Optional[float] = None

    @property
    def boundary_gap(self) -> float:
        return abs(self.discrete - self.shifted_discrete)

    @property
    def jutila_statistic(self) -> float:
        """max |window| / sqrt(U); exploratory only."""
        return self.max_window / math.sqrt(self.U) if self.U > 0 else 0.0


def _check_cell(X: int, U: float, table: CoefficientTable) -> None:
    if U < 0:
        raise RangeError(f"U must be >= 0, got {U}")
    if X < 1:
        raise RangeError(f"X must be >= 1, got {X}")
    if 2 * X + U > table.n_max:
        raise RangeError(f"window (X={X}, U={U}) runs past table end {table.n_max}")


def window_diff(m: float, U: float, C: float, table: CoefficientTable) -> float:
    """Delta(m + U) - Delta(m) = sum_{m < n <= m+U} c_n - C U."""
    if U < 0 or m < 0 or m + U > table.n_max:
        raise RangeError(f"window (m={m}, U={U}) outside [0, {table.n_max}]")
    p = table.prefix_c
    return float(p[math.floor(m + U)] - p[math.floor(m)] - C * U)


def windows_at_integers(n: np.ndarray, U: float, C: float,
                        table: CoefficientTable) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64)
    p = table.prefix_c
    return p[n + math.floor(U)] - p[n] - C * U


def mean_square_continuous(X: int, U: float, C: float, table: CoefficientTable) -> float:
    """Exact int_X^{2X} (Delta(x+U) - Delta(x))^2 dx."""
    _check_cell(X, U, table)
    if U == 0:
        return 0.0
    ui = math.floor(U)
    f = U - ui
    m = np.arange(X, 2 * X, dtype=np.int64)
    p = table.prefix_c
    w1 = p[m + ui] - p[m] - C * U
    parts = (1 - f) * w1 * w1
    if f > 0:
        w2 = p[m + ui + 1] - p[m] - C * U
        parts = np.concatenate([parts, f * w2 * w2])
    return math.fsum(parts)


def breakpoint_count(X: int, U: float) -> int:
    f = U - math.floor(U)
    return (X + 1) + (X if f > 0 else 0)


def mean_square_discrete(X: int, U: float, C: float, table: CoefficientTable):
    """(sum_{X < n <= 2X}, sum_{X <= m <= 2X-1}) of the squared window."""
    _check_cell(X, U, table)
    if U == 0:
        return 0.0, 0.0
    w = windows_at_integers(np.arange(X, 2 * X + 1), U, C, table)
    sq = w * w
    return math.fsum(sq[1:]), math.fsum(sq[:-1])


def interval_mean_square(X: int, U: float, C: float, table: CoefficientTable,
                         envelopes: Optional[Sequence[BoundEnvelope]] = None,
                         u: Optional[float] = None) -> IntervalMeanSquare:
    cont = mean_square_continuous(X, U, C, table)
    disc, shifted = mean_square_discrete(X, U, C, table)
    if U > 0:
        w = windows_at_integers(np.arange(X, 2 * X + 1), U, C, table)
        max_window = float(np.max(np.abs(w)))
    else:
        max_window = 0.0
    envs = {}
    if U >= 1:
        for env in (envelopes if envelopes is not None else default_envelopes()):
            envs[env.name] = env.shape(X, U)
    return IntervalMeanSquare(X, U, cont, disc, shifted, breakpoint_count(X, U),
                              max_window, envs, u)


@dataclass
class SweepResult:
    """Cells in grid order plus envelopes with fitted constants.

    Attributes:
        row_K0: For each envelope name, K0 fitted separately per X.
        spearman: Per X, rank correlation between u and the continuous mean square.
    """

    cells: List[IntervalMeanSquare]
    envelopes: List[BoundEnvelope]
    row_K0: Dict[str, Dict[int, float]]
    spearman: Dict[int, float]
    mu: float

    def envelope(self, name: str) -> BoundEnvelope:
        return next(e for e in self.envelopes if e.name == name)

    def k0_spread(self, name: str = "trivial") -> float:
        vals = list(self.row_K0[name].values())
        return max(vals) / min(vals)


def sweep_grid(X_grid: Sequence[int], u_grid: Sequence[float], mu: float = MU_LINDELOF,
               with_range: bool = False) -> List[tuple]:
    u_vals = list(u_grid)
    if with_range:
        lo, hi = improvement_range(mu)
        for v in (lo, hi):
            if not any(abs(v - w) < 1e-12 for w in u_vals):
                u_vals.append(v)
        u_vals.sort()
    return [(int(X), float(u)) for X in X_grid for u in u_vals]


def sweep(X_grid: Sequence[int], u_grid: Sequence[float], C: float,
          table: CoefficientTable, *, mu: float = MU_LINDELOF,
          with_range: bool = False, threads: Optional[int] = None) -> SweepResult:
    """Mean squares at U = X^u over the grid, with envelopes fitted to the cells.

    Cells whose window would run past the table end are skipped with a warning.
    Results keep grid order regardless of `threads`.
    """
    grid = sweep_grid(X_grid, u_grid, mu, with_range)
    if not grid:
        raise RangeError("empty sweep grid")
    envs = default_envelopes(mu)

    def run(cell):
        X, u = cell
        U = X ** u
        try:
            return interval_mean_square(X, U, C, table, envs, u)
        except RangeError as exc:
            warnings.warn(f"skipping cell X={X}, u={u}: {exc}")
            return None

    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(run, grid))
    else:
        results = [run(c) for c in grid]
    cells = [r for r in results if r is not None]

    fitted, row_K0 = [], {}
    for env in envs:
        samples = [(c.X, c.U, c.continuous) for c in cells if c.U >= 1]
        fitted.append(env.fitted(samples) if samples else env)
        per_row = {}
        for X in sorted({c.X for c in cells}):
            rs = [(c.X, c.U, c.continuous) for c in cells if c.X == X and c.U >= 1]
            if rs:
                per_row[X] = env.fitted(rs).K0
        row_K0[env.name] = per_row

    spearman = {}
    for X in sorted({c.X for c in cells}):
        row = [c for c in cells if c.X == X]
        if len(row) >= 2:
            spearman[X] = float(stats.spearmanr([c.u for c in row],
                                                [c.continuous for c in row])[0])
    return SweepResult(cells, fitted, row_K0, spearman, mu)
