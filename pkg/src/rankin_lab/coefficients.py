"""
Exact coefficient sieves for the Rankin-Selberg convolution problem.

Provides:
- Euler's pentagonal series for prod_{k>=1} (1 - x^k)
- Ramanujan tau(n) from x * prod (1 - x^k)^24 (multi-modular, exact)
- An independent tau oracle from (E4^3 - E6^2) / 1728
- Mobius and divisor-count sieves
- The convolution coefficients c_n and the Dirichlet quotient b = mu * c
- CoefficientTable, the immutable bundle every other module reads

c_n = n^(1-kappa) * sum_{m^2 | n} m^(2(kappa-1)) * a(n/m^2)^2 is multiplicative,
nonnegative, and has mean value C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import RangeError, ResourceExhaustedError, UnsupportedRangeError

KAPPA = 12
MAX_SIEVE_N = 5_000_000
ORACLE_LIMIT = 10_000
EXACT_LIMIT = 2000

# Primes just below 2^31: 730-ish slice additions of residues stay far below 2^63.
_MODULI = (
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563,
    2147483549, 2147483543, 2147483497, 2147483489, 2147483477,
)


@dataclass(frozen=True)
class SparseSeries:
    """Truncated power series stored as (exponent, coefficient) pairs.

    Attributes:
        terms: Pairs with strictly increasing exponents, all <= degree.
        degree: Truncation degree N.
    """

    terms: Tuple[Tuple[int, int], ...]
    degree: int

    def __len__(self) -> int:
        return len(self.terms)

    def exponents(self) -> List[int]:
        return [e for e, _ in self.terms]

    def to_dense(self) -> List[int]:
        out = [0] * (self.degree + 1)
        for e, coef in self.terms:
            out[e] = coef
        return out


def pentagonal_euler_product(N: int) -> SparseSeries:
    """Return prod_{k>=1} (1 - x^k) truncated to degree N.

    Nonzero terms sit at the generalized pentagonal numbers k(3k-1)/2,
    k = 0, 1, -1, 2, -2, ..., with sign (-1)^k.
    """
    if N < 0:
        raise RangeError(f"degree bound must be >= 0, got {N}")
    terms = [(0, 1)]
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 > N:
            break
        sign = -1 if k % 2 else 1
        terms.append((e1, sign))
        e2 = k * (3 * k + 1) // 2
        if e2 <= N:
            terms.append((e2, sign))
        k += 1
    return SparseSeries(tuple(terms), N)


def _check_size(N: int, limit: int) -> None:
    if N < 1:
        raise RangeError(f"upper index must be >= 1, got {N}")
    if N > limit:
        raise ResourceExhaustedError(
            f"sieve size {N} exceeds the configured limit {limit}")


def _eta24_residues(N: int, p: int, series: SparseSeries) -> np.ndarray:
    # Coefficients of prod (1 - x^k)^24 up to degree N - 1, reduced mod p.
    deg = N - 1
    acc_len = deg + 1
    a = np.zeros(acc_len, dtype=np.int64)
    a[0] = 1
    for _ in range(24):
        acc = np.zeros(acc_len, dtype=np.int64)
        for e, sign in series.terms:
            if sign > 0:
                acc[e:] += a[:acc_len - e]
            else:
                acc[e:] -= a[:acc_len - e]
        np.remainder(acc, p, out=acc)
        a = acc
    return a


def _crt(residues: Sequence[np.ndarray], moduli: Sequence[int]) -> np.ndarray:
    """Garner reconstruction to symmetric representatives (object array)."""
    k = len(moduli)
    digits = [residues[0].astype(np.int64)]
    for i in range(1, k):
        p = moduli[i]
        v = residues[i].astype(np.int64) % p
        for j in range(i):
            inv = pow(moduli[j], -1, p)
            v = ((v - digits[j]) % p) * inv % p
        digits.append(v)
    value = np.zeros(len(residues[0]), dtype=object)
    radix = 1
    for i in range(k):
        value = value + digits[i].astype(object) * radix
        radix *= moduli[i]
    half = radix // 2
    return np.array([int(v) - radix if v > half else int(v) for v in value],
                    dtype=object)


def sieve_tau(N: int, *, limit: int = MAX_SIEVE_N) -> np.ndarray:
    """Ramanujan tau(n) for n <= N from 24 pentagonal-series multiplications.

    Each multiplication is a sparse-times-dense pass with O(sqrt N) shifts.
    The passes run in residue arithmetic modulo several 31-bit primes and
    the exact integers are recovered by CRT. Enough primes are used to cover
    |tau(n)| <= d(n) n^(11/2) <= 2 n^6, and one spare prime confirms the
    reconstruction.

    Returns:
        Object array of Python ints, length N + 1, with tau[0] = 0.
    """
    _check_size(N, limit)
    bound_bits = (2 * N ** 6).bit_length() + 2
    k = 1
    while math.prod(_MODULI[:k]).bit_length() <= bound_bits:
        k += 1
    moduli = _MODULI[:k + 1]
    series = pentagonal_euler_product(N - 1)
    residues = [_eta24_residues(N, p, series) for p in moduli]
    values = _crt(residues[:k], moduli[:k])
    spare = moduli[k]
    check = np.array([v % spare for v in values], dtype=np.int64)
    if not np.array_equal(check, residues[k]):
        raise ArithmeticError("CRT reconstruction of tau failed the spare-prime check")
    tau = np.zeros(N + 1, dtype=object)
    tau[0] = 0
    tau[1:] = values
    return tau


def _sigma_power(N: int, power: int) -> List[int]:
    sig = [0] * (N + 1)
    for d in range(1, N + 1):
        dp = d ** power
        for m in range(d, N + 1, d):
            sig[m] += dp
    return sig


def _pack(coeffs: Sequence[int], width: int) -> int:
    # Kronecker substitution; coefficients must be nonnegative and < 2^width.
    return int.from_bytes(
        b"".join(int(c).to_bytes(width // 8, "little") for c in coeffs), "little")


def _unpack(value: int, width: int, count: int) -> List[int]:
    step = width // 8
    raw = (value & ((1 << (width * count)) - 1)).to_bytes(step * count, "little")
    return [int.from_bytes(raw[i * step:(i + 1) * step], "little") for i in range(count)]


def _dense_mul(a: Sequence[int], b: Sequence[int], count: int) -> List[int]:
    """Truncated product of nonnegative integer series via one big-int multiply."""
    top = max(max(a), 1) * max(max(b), 1) * count
    width = (top.bit_length() + 8) // 8 * 8
    prod = _pack(a[:count], width) * _pack(b[:count], width)
    return _unpack(prod, width, count)


def oracle_tau_eisenstein(N: int, *, limit: int = ORACLE_LIMIT) -> np.ndarray:
    """Independent tau(n) from Delta = (E4^3 - E6^2) / 1728.

    E4 = 1 + 240 sum sigma_3(n) q^n and E6 = 1 - 504 sum sigma_5(n) q^n.
    Series products are dense, done by Kronecker substitution on Python
    integers, so no code is shared with :func:`sieve_tau`.
    """
    if N < 1:
        raise RangeError(f"upper index must be >= 1, got {N}")
    if N > limit:
        raise RangeError(f"oracle limit is {limit}, got {N}")
    count = N + 1
    s3 = _sigma_power(N, 3)
    s5 = _sigma_power(N, 5)
    e4 = [1] + [240 * s3[n] for n in range(1, count)]
    e4_sq = _dense_mul(e4, e4, count)
    e4_cube = _dense_mul(e4_sq, e4, count)
    # E6^2 = 1 - 1008 S + 504^2 S^2 with S = sum sigma_5(n) q^n (nonnegative).
    s = [0] + s5[1:count]
    s_sq = _dense_mul(s, s, count) if N >= 2 else [0] * count
    tau = np.zeros(count, dtype=object)
    tau[0] = 0
    for n in range(1, count):
        e6_sq = -1008 * s[n] + 504 * 504 * s_sq[n]
        num = e4_cube[n] - e6_sq
        q, r = divmod(num, 1728)
        if r:
            raise ArithmeticError(f"E4^3 - E6^2 not divisible by 1728 at n={n}")
        tau[n] = q
    return tau


def sieve_mobius(N: int) -> np.ndarray:
    """mu(n) for n <= N as int8, mu[0] = 0."""
    if N < 1:
        raise RangeError(f"upper index must be >= 1, got {N}")
    mu = np.ones(N + 1, dtype=np.int8)
    mu[0] = 0
    is_prime = np.ones(N + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(N) + 1):
        if is_prime[i]:
            is_prime[i * i::i] = False
    for p in np.flatnonzero(is_prime):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= N:
            mu[p * p::p * p] = 0
    return mu


def sieve_divisor(N: int) -> np.ndarray:
    """d(n) for n <= N as int32, d[0] = 0."""
    if N < 1:
        raise RangeError(f"upper index must be >= 1, got {N}")
    d = np.zeros(N + 1, dtype=np.int32)
    for i in range(1, math.isqrt(N) + 1):
        # each divisor pair (i, n/i) with i <= n/i, counted twice, once if square
        d[i * i::i] += 2
        d[i * i] -= 1
    return d


def _convolution_numerators(a: np.ndarray, kappa: int) -> np.ndarray:
    N = len(a) - 1
    a2 = np.array([int(v) * int(v) for v in a], dtype=object)
    s = a2.copy()
    w = 2 * (kappa - 1)
    for m in range(2, math.isqrt(N) + 1):
        mm = m * m
        s[mm::mm] += (m ** w) * a2[1:N // mm + 1]
    return s


def compute_c(tau: np.ndarray, kappa: int = KAPPA) -> np.ndarray:
    """Convolution coefficients c_n as float64, c[0] = 0.

    Each numerator sum_{m^2|n} m^(2(kappa-1)) a(n/m^2)^2 is an exact integer;
    the division by n^(kappa-1) is a single correctly rounded int/int.
    """
    s = _convolution_numerators(tau, kappa)
    c = np.zeros(len(tau), dtype=np.float64)
    e = kappa - 1
    for n in range(1, len(tau)):
        c[n] = s[n] / n ** e
    return c


def compute_c_exact(tau: np.ndarray, kappa: int = KAPPA,
                    n_limit: Optional[int] = None) -> List[Fraction]:
    """c_n as exact Fractions for n <= n_limit (index 0 holds 0)."""
    N = len(tau) - 1 if n_limit is None else min(n_limit, len(tau) - 1)
    s = _convolution_numerators(tau[:N + 1], kappa)
    return [Fraction(0)] + [Fraction(int(s[n]), n ** (kappa - 1)) for n in range(1, N + 1)]


def dirichlet_convolve(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(f * g)(n) = sum_{d|n} f(d) g(n/d), index 0 ignored."""
    N = len(f) - 1
    out = np.zeros(N + 1, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    for d in range(1, N + 1):
        fd = f[d]
        if fd:
            out[d::d] += fd * g[1:N // d + 1]
    return out


def divisor_sum(values: np.ndarray) -> np.ndarray:
    """S(n) = sum_{d|n} values[d]."""
    N = len(values) - 1
    out = np.zeros(N + 1, dtype=np.float64)
    for d in range(1, N + 1):
        out[d::d] += values[d]
    return out


def compute_b(c: np.ndarray, mobius: np.ndarray) -> np.ndarray:
    """Coefficients of B(s) = Z(s) / zeta(s), i.e. b = mu * c, in float arithmetic."""
    return dirichlet_convolve(mobius, c)


def _b_numerators(c_num: np.ndarray, mobius: np.ndarray, kappa: int) -> np.ndarray:
    # n^e b_n = sum_{d|n} mu(d) d^e (n/d)^e c_{n/d}, an integer when n^e c_n is
    N = len(c_num) - 1
    e = kappa - 1
    out = c_num.copy()
    for d in range(2, N + 1):
        mu = int(mobius[d])
        if mu:
            out[d::d] += (mu * d ** e) * c_num[1:N // d + 1]
    return out


def compute_b_exact(tau: np.ndarray, mobius: np.ndarray, kappa: int = KAPPA) -> np.ndarray:
    """b = mu * c with each b_n correctly rounded from its exact rational value.

    Float convolution loses everything to cancellation where b_n or c_n is tiny
    (c_n ~ 1e-9 happens when a(p) is small relative to p^((kappa-1)/2)).
    """
    num = _b_numerators(_convolution_numerators(tau, kappa), mobius, kappa)
    b = np.zeros(len(tau), dtype=np.float64)
    e = kappa - 1
    for n in range(1, len(tau)):
        b[n] = num[n] / n ** e
    return b


def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Neumaier running sums; out[0] = 0 and out[n] = values[1] + ... + values[n]."""
    out = np.zeros(len(values), dtype=np.float64)
    total = 0.0
    comp = 0.0
    for n, v in enumerate(values.tolist()[1:], start=1):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        out[n] = total + comp
    return out


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """Immutable bundle of exact and derived coefficient arrays.

    All arrays have length n_max + 1 and are indexed by n; index 0 is padding
    (prefix_c[0] = 0 is meaningful). tau holds Python ints.
    """

    n_max: int
    kappa: int
    tau: np.ndarray
    c: np.ndarray
    b: np.ndarray
    mobius: np.ndarray
    d: np.ndarray
    prefix_c: np.ndarray

    def __post_init__(self):
        for name in ("tau", "c", "b", "mobius", "d", "prefix_c"):
            arr = getattr(self, name)
            if len(arr) != self.n_max + 1:
                raise ValueError(f"{name} has length {len(arr)}, expected {self.n_max + 1}")
            arr.flags.writeable = False


def check_int128(tau: Sequence[int]) -> None:
    """Raise UnsupportedRangeError unless every value fits a signed 128-bit int."""
    for n, v in enumerate(tau):
        if not -(1 << 127) <= int(v) < (1 << 127):
            raise UnsupportedRangeError(f"tau({n}) does not fit in 128 bits")


def build_table(n_max: int, *, kappa: int = KAPPA,
                tau: Optional[np.ndarray] = None,
                limit: int = MAX_SIEVE_N) -> CoefficientTable:
    """Sieve (or accept) a(n) and derive every array of a CoefficientTable.

    Args:
        n_max: Largest index.
        kappa: Weight of the form; 12 for tau.
        tau: Optional precomputed a(n) array of length n_max + 1 (index 0 ignored).
        limit: Sieve size cap.
    """
    if tau is None:
        tau = sieve_tau(n_max, limit=limit)
    else:
        if len(tau) != n_max + 1:
            raise ValueError(f"coefficient array has length {len(tau)}, expected {n_max + 1}")
        tau = np.array([int(v) for v in tau], dtype=object)
        tau[0] = 0
    if int(tau[1]) != 1:
        raise ValueError("coefficients must be normalized with a(1) = 1")
    check_int128(tau)
    c = compute_c(tau, kappa)
    mobius = sieve_mobius(n_max)
    return CoefficientTable(
        n_max=n_max,
        kappa=kappa,
        tau=tau,
        c=c,
        b=compute_b_exact(tau, mobius, kappa),
        mobius=mobius,
        d=sieve_divisor(n_max),
        prefix_c=compensated_cumsum(c),
    )


@dataclass
class InversionReport:
    max_discrepancy: float
    worst_n: int
    n_checked: int
    exact: bool


@dataclass
class RoundTripReport:
    """Worst discrepancy of sum_{d|n} b_d against c_n.

    In float mode `max_discrepancy` is relative to sum_{d|n} |b_d| (the
    conditioning scale) and `max_relative_to_c` to c_n itself; in exact mode
    both are exact and must be 0.
    """

    max_discrepancy: float
    worst_n: int
    max_relative_to_c: float
    worst_n_relative_to_c: int
    n_checked: int
    exact: bool


def verify_dirichlet_round_trip(table: CoefficientTable, *, exact: bool = False,
                                n_limit: Optional[int] = None) -> RoundTripReport:
    """Check that summing b over divisors gives back c.

    Exact mode redoes both convolutions in integers scaled by n^(kappa-1).
    """
    N = table.n_max if n_limit is None else min(n_limit, table.n_max)
    if exact:
        e = table.kappa - 1
        c_num = _convolution_numerators(table.tau[:N + 1], table.kappa)
        b_num = _b_numerators(c_num, table.mobius[:N + 1], table.kappa)
        powers = np.array([k ** e for k in range(N + 1)], dtype=object)
        back = np.zeros(N + 1, dtype=object)
        for d in range(1, N + 1):
            back[d::d] += b_num[d] * powers[1:N // d + 1]
        bad = [n for n in range(1, N + 1) if back[n] != c_num[n]]
        worst = 0.0 if not bad else math.inf
        return RoundTripReport(worst, bad[0] if bad else 1, worst,
                               bad[0] if bad else 1, N, True)

    b = table.b[:N + 1]
    c = table.c[1:N + 1]
    back = divisor_sum(b)[1:]
    scale = divisor_sum(np.abs(b))[1:]
    diff = np.abs(back - c)
    rel = diff / np.maximum(scale, np.finfo(float).tiny)
    rel_c = diff / np.maximum(c, np.finfo(float).tiny)
    i, j = int(np.argmax(rel)), int(np.argmax(rel_c))
    return RoundTripReport(float(rel[i]), i + 1, float(rel_c[j]), j + 1, N, False)


def verify_mobius_square_inversion(table: CoefficientTable, *, exact: bool = False,
                                   n_limit: Optional[int] = None) -> InversionReport:
    """Check a(n)^2 n^(1-kappa) = sum_{d^2|n} mu(d) c_{n/d^2}.

    Float mode measures |lhs - rhs| relative to the largest term magnitude
    entering the sum. Exact mode (n <= 2000) compares Fractions and reports
    the largest absolute difference, which must be 0.
    """
    e = table.kappa - 1
    if exact:
        N = min(table.n_max, EXACT_LIMIT if n_limit is None else n_limit)
        if N > EXACT_LIMIT:
            raise RangeError(f"exact mode is limited to n <= {EXACT_LIMIT}")
        c = compute_c_exact(table.tau, table.kappa, N)
        worst, worst_n = Fraction(0), 1
        for n in range(1, N + 1):
            lhs = Fraction(int(table.tau[n]) ** 2, n ** e)
            rhs = Fraction(0)
            d = 1
            while d * d <= n:
                if n % (d * d) == 0 and table.mobius[d]:
                    rhs += int(table.mobius[d]) * c[n // (d * d)]
                d += 1
            diff = abs(lhs - rhs)
            if diff > worst:
                worst, worst_n = diff, n
        return InversionReport(float(worst), worst_n, N, True)

    N = table.n_max if n_limit is None else min(n_limit, table.n_max)
    c = table.c[:N + 1]
    rhs = c.copy()
    scale = c.copy()
    for d in range(2, math.isqrt(N) + 1):
        mu = int(table.mobius[d])
        if mu:
            dd = d * d
            rhs[dd::dd] += mu * c[1:N // dd + 1]
            scale[dd::dd] += c[1:N // dd + 1]
    lhs = np.array([0.0] + [int(table.tau[n]) ** 2 / n ** e for n in range(1, N + 1)])
    rel = np.abs(lhs[1:] - rhs[1:]) / np.maximum(scale[1:], np.finfo(float).tiny)
    i = int(np.argmax(rel))
    return InversionReport(float(rel[i]), i + 1, N, False)
