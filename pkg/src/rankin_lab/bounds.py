"""
Closed-form exponents for the short-interval mean square, log-log fitting,
and the Dirichlet divisor baseline.

All exponent formulas take mu = mu(1/2), the Lindelof exponent of zeta on the
critical line, as a parameter. mu = 0 is the Lindelof hypothesis; 32/205 is
Huxley's bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .error_terms import DivisorTable, build_divisor_table, delta2_window
from .errors import RangeError

MU_LINDELOF = 0.0
MU_HUXLEY = 32 / 205
DIVISOR_C3 = 8 / math.pi ** 2


def _check_mu(mu: float) -> None:
    if not 0 <= mu < 0.5:
        raise RangeError(f"mu must lie in [0, 1/2), got {mu}")


@dataclass(frozen=True)
class LindelofParams:
    mu_half: float

    def __post_init__(self):
        _check_mu(self.mu_half)

    @property
    def beta(self) -> float:
        return beta_of_mu(self.mu_half)


def beta_of_mu(mu: float) -> float:
    """Exponent in int_0^X Delta^2 << X^(1 + 2 beta + eps): 2 / (5 - 4 mu)."""
    _check_mu(mu)
    return 2 / (5 - 4 * mu)


def theorem1_exponents(mu: float) -> Tuple[float, float]:
    """(alpha, gamma) with the mean square << X^alpha U^gamma (eps dropped)."""
    _check_mu(mu)
    return (9 + 12 * mu) / (7 + 4 * mu), 8 / (7 + 4 * mu)


@dataclass
class ImprovementRange:
    u_low: float
    u_high: float

    @property
    def nonempty(self) -> bool:
        return self.u_low < self.u_high

    def __iter__(self):
        return iter((self.u_low, self.u_high))


def improvement_range(mu: float) -> ImprovementRange:
    """Exponents u with U = X^u where the X^alpha U^gamma bound beats the trivial one."""
    _check_mu(mu)
    return ImprovementRange((1 + 4 * mu) / (3 + 4 * mu),
                            (16 * mu * mu - 8 * mu + 9) / (20 - 16 * mu))


def optimal_T(X: float, U: float, mu: float) -> Tuple[float, bool]:
    """T = X^(3/(7/2 + 2mu)) U^(-2/(7/2 + 2mu)), which balances U^2 T^(3/2+2mu) and X^3 T^-2.

    Returns:
        (T, T <= X).
    """
    _check_mu(mu)
    if not 1 <= U <= X:
        raise RangeError(f"need 1 <= U <= X, got U={U}, X={X}")
    e = 3.5 + 2 * mu
    T = X ** (3 / e) * U ** (-2 / e)
    return T, T <= X


@dataclass(frozen=True)
class BoundEnvelope:
    """K0 * min_i X^alpha_i U^gamma_i.

    Most envelopes have a single (alpha, gamma) piece; the trivial bound
    is the minimum of two.
    """

    name: str
    pieces: Tuple[Tuple[float, float], ...]
    K0: float = 1.0
    note: str = ""

    @property
    def alpha(self) -> float:
        return self.pieces[0][0]

    @property
    def gamma(self) -> float:
        return self.pieces[0][1]

    def shape(self, X: float, U: float) -> float:
        return min(X ** a * U ** g for a, g in self.pieces)

    def __call__(self, X: float, U: float) -> float:
        return self.K0 * self.shape(X, U)

    def fitted(self, samples: Iterable[Tuple[float, float, float]]) -> "BoundEnvelope":
        """Copy with K0 = max measured / shape over (X, U, measured) samples."""
        ratios = [v / self.shape(X, U) for X, U, v in samples]
        if not ratios:
            raise ValueError("no samples to fit")
        return replace(self, K0=max(ratios))


def trivial_bound(mu: float = MU_LINDELOF) -> BoundEnvelope:
    b = beta_of_mu(mu)
    return BoundEnvelope("trivial", ((1 + 2 * b, 0.0), (1.0, 2.0)))


def trivial_envelope(X: float, U: float, beta: float) -> float:
    """min(X^(1 + 2 beta), X U^2) with eps absorbed."""
    if X < 1 or U < 1:
        raise RangeError(f"need X >= 1 and U >= 1, got X={X}, U={U}")
    if not 0 < beta < 0.5:
        raise RangeError(f"beta must lie in (0, 1/2), got {beta}")
    return min(X ** (1 + 2 * beta), X * U * U)


def theorem1_bound(mu: float = MU_LINDELOF) -> BoundEnvelope:
    return BoundEnvelope("theorem1", (theorem1_exponents(mu),))


def lindelof_z_bound() -> BoundEnvelope:
    return BoundEnvelope("lindelofZ", ((1.0, 4 / 3),),
                         note="conditional on Z(1/2 + it) << (|t| + 1)^eps")


def default_envelopes(mu: float = MU_LINDELOF) -> List[BoundEnvelope]:
    return [trivial_bound(mu), theorem1_bound(mu), lindelof_z_bound()]


@dataclass
class ExponentFit:
    slope: float
    intercept: float
    residual_rms: float
    count: int
    stderr: float = float("nan")

    def predict(self, scale):
        return np.exp(self.intercept) * np.asarray(scale, dtype=float) ** self.slope


def fit_exponent(points: Sequence[Tuple[float, float]]) -> ExponentFit:
    """OLS of log(value) on log(scale)."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or len(pts) < 3:
        raise ValueError("need at least 3 (scale, value) points")
    if np.any(pts <= 0):
        raise ValueError("scales and values must be positive")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(ly) == 0:
        return ExponentFit(0.0, float(ly[0]), 0.0, len(pts), 0.0)
    res = stats.linregress(lx, ly)
    resid = ly - (res.intercept + res.slope * lx)
    return ExponentFit(float(res.slope), float(res.intercept),
                       float(np.sqrt(np.mean(resid ** 2))), len(pts), float(res.stderr))


@dataclass
class DivisorBaseline:
    """Cubic fit of M2/(XU) in L = log(sqrt(X)/U).

    Attributes:
        coefficients: (c0, c1, c2, c3).
        L, normalized: The fitted points.
        mean_squares: M2(X, U) per U.
    """

    X: int
    U: List[int]
    L: List[float]
    mean_squares: List[float]
    normalized: List[float]
    coefficients: Tuple[float, float, float, float]
    target: float = DIVISOR_C3

    @property
    def leading(self) -> float:
        return self.coefficients[3]

    @property
    def relative_error(self) -> float:
        return abs(self.leading - self.target) / self.target


def divisor_mean_square(X: int, U: int, divisors: DivisorTable) -> float:
    """M2(X, U) = sum_{X <= m <= 2X-1} (Delta_2(m + U) - Delta_2(m))^2."""
    m = np.arange(X, 2 * X, dtype=np.int64)
    w = delta2_window(m, U, divisors)
    return math.fsum(w * w)


def divisor_leading_coefficient(X: int, U_list: Sequence[int],
                                divisors: Optional[DivisorTable] = None
                                ) -> Tuple[float, DivisorBaseline]:
    """Leading coefficient of the cubic-in-log fit to the divisor mean square."""
    U_list = sorted(int(u) for u in U_list)
    if len(U_list) < 4:
        raise ValueError("need at least 4 U values for a cubic fit")
    if U_list[0] < 1:
        raise RangeError("U values must be >= 1")
    need = 2 * X + U_list[-1]
    if divisors is None:
        divisors = build_divisor_table(need)
    elif divisors.n_max < need:
        raise RangeError(f"divisor table reaches {divisors.n_max}, need {need}")
    L = [math.log(math.sqrt(X) / U) for U in U_list]
    ms = [divisor_mean_square(X, U, divisors) for U in U_list]
    y = [v / (X * U) for v, U in zip(ms, U_list)]
    c3, c2, c1, c0 = np.polyfit(L, y, 3)
    detail = DivisorBaseline(X, U_list, L, ms, y, (float(c0), float(c1), float(c2), float(c3)))
    return float(c3), detail
