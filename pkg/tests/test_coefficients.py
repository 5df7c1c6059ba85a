import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rankin_lab.bounds import fit_exponent
from rankin_lab.coefficients import (EXACT_LIMIT, build_table, compensated_cumsum,
                                     compute_b, compute_c, compute_c_exact, divisor_sum,
                                     oracle_tau_eisenstein, pentagonal_euler_product,
                                     sieve_divisor, sieve_mobius, sieve_tau,
                                     verify_dirichlet_round_trip,
                                     verify_mobius_square_inversion)
from rankin_lab.errors import RangeError, ResourceExhaustedError, UnsupportedRangeError

from oracles import (c_exact, divisors, euler_product_dense, mobius_brute,
                     tau_by_expansion)


class TestPentagonal:
    def test_degree_zero(self):
        assert pentagonal_euler_product(0).terms == ((0, 1),)

    def test_degree_seven(self):
        s = pentagonal_euler_product(7)
        assert s.terms == ((0, 1), (1, -1), (2, -1), (5, 1), (7, 1))

    @pytest.mark.parametrize("N", [1, 7, 12, 40, 100])
    def test_matches_direct_product(self, N):
        assert pentagonal_euler_product(N).to_dense() == euler_product_dense(N)

    def test_degree_100_exponents(self):
        s = pentagonal_euler_product(100)
        assert s.exponents() == [0, 1, 2, 5, 7, 12, 15, 22, 26, 35, 40, 51, 57, 70, 77, 92, 100]
        assert len(s) == 17

    def test_sqrt_sparsity(self):
        for N in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6):
            # terms ~ 2 * sqrt(2N/3)
            ratio = len(pentagonal_euler_product(N)) / math.sqrt(N)
            assert 1.5 < ratio < 1.7

    def test_negative_degree(self):
        with pytest.raises(RangeError):
            pentagonal_euler_product(-1)


class TestTau:
    def test_small_values(self):
        tau = sieve_tau(6)
        assert list(tau[1:]) == [1, -24, 252, -1472, 4830, -6048]
        assert tau[6] == tau[2] * tau[3]

    def test_against_polynomial_expansion(self):
        assert list(sieve_tau(40)) == tau_by_expansion(40)

    def test_oracle_small(self):
        assert list(oracle_tau_eisenstein(1)) == [0, 1]
        assert list(oracle_tau_eisenstein(6)) == list(sieve_tau(6))

    def test_oracle_against_expansion(self):
        assert list(oracle_tau_eisenstein(40)) == tau_by_expansion(40)

    def test_known_large_value(self):
        # tau(997) from Hecke: tau(p)^2 - tau(p^2) = p^11 checked below instead
        tau = sieve_tau(2000)
        for p in (2, 3, 5, 7, 11, 13, 31, 43):
            assert tau[p * p] == tau[p] ** 2 - p ** 11

    def test_oracle_limit(self):
        with pytest.raises(RangeError):
            oracle_tau_eisenstein(10, limit=5)

    def test_sieve_limit(self):
        with pytest.raises(ResourceExhaustedError):
            sieve_tau(100, limit=50)

    def test_deligne_bound(self, small_table):
        d = small_table.d
        for n in range(1, small_table.n_max + 1):
            assert int(small_table.tau[n]) ** 2 <= int(d[n]) ** 2 * n ** 11


class TestSieves:
    def test_mobius_examples(self):
        mu = sieve_mobius(100)
        assert mu[1] == 1 and mu[12] == 0
        assert all(mu[n] == mobius_brute(n) for n in range(1, 101))

    def test_divisor_examples(self):
        d = sieve_divisor(100)
        assert d[1] == 1 and d[12] == 6
        assert all(d[n] == len(divisors(n)) for n in range(1, 101))
        assert int(d[1:].sum()) == 482

    def test_divisor_sum_double_loop(self):
        brute = sum(1 for n in range(1, 101) for k in range(1, n + 1) if n % k == 0)
        assert brute == 482


class TestConvolution:
    def test_c_examples(self, small_table):
        c = small_table.c
        assert c[1] == 1.0
        assert c[2] == 0.28125
        assert c[4] == 6361088 / 4194304
        assert c[4] == pytest.approx(1.5166015625, abs=1e-12)

    def test_c_matches_exact_rational(self, small_table):
        tau = [int(v) for v in small_table.tau]
        for n in range(1, 400):
            assert small_table.c[n] == float(c_exact(tau, n))

    def test_nonnegative(self, small_table):
        assert np.all(small_table.c[1:] >= 0)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 3000), st.integers(1, 3000))
    def test_multiplicative(self, small_table, m, n):
        if math.gcd(m, n) != 1 or m * n > small_table.n_max:
            return
        c = small_table.c
        assert abs(c[m * n] - c[m] * c[n]) <= 1e-9 * max(1.0, c[m * n])

    def test_multiplicative_exact(self, small_table):
        c = compute_c_exact(small_table.tau, 12, 600)
        for m in range(1, 600):
            for n in range(1, 600 // m + 1):
                if math.gcd(m, n) == 1:
                    assert c[m * n] == c[m] * c[n]

    def test_b_examples(self, small_table):
        b, c = small_table.b, small_table.c
        assert b[1] == 1.0
        assert b[2] == -0.71875
        assert sum(b[d] for d in divisors(12)) == pytest.approx(c[12], rel=1e-12)

    def test_dirichlet_round_trip(self, small_table):
        back = divisor_sum(small_table.b)
        c = small_table.c
        assert np.all(np.abs(back[1:] - c[1:]) <= 1e-9 * np.maximum(1.0, c[1:]))

    def test_b_correctly_rounded(self, small_table):
        c = compute_c_exact(small_table.tau, 12, 500)
        for n in range(1, 501):
            exact = sum(mobius_brute(d) * c[n // d] for d in divisors(n))
            assert small_table.b[n] == float(exact)

    def test_float_b_close_to_exact(self, small_table):
        bf = compute_b(small_table.c, small_table.mobius)
        scale = divisor_sum(np.abs(small_table.c))
        assert np.all(np.abs(bf - small_table.b) <= 1e-14 * np.maximum(scale, 1))

    def test_round_trip_report(self, small_table):
        ex = verify_dirichlet_round_trip(small_table, exact=True)
        assert ex.exact and ex.max_discrepancy == 0 and ex.n_checked == small_table.n_max
        fl = verify_dirichlet_round_trip(small_table)
        assert fl.max_discrepancy < 1e-15

    def test_general_kappa(self):
        a = np.array([0, 1, 3, 5, 7], dtype=object)
        c = compute_c(a, kappa=4)
        # c_4 = 4^-3 (7^2 + 2^6 * 1^2)
        assert c[4] == (49 + 64) / 64
        assert c[2] == 9 / 8


class TestMobiusSquareInversion:
    def test_exact_mode_is_zero(self, small_table):
        rep = verify_mobius_square_inversion(small_table, exact=True)
        assert rep.exact and rep.n_checked == EXACT_LIMIT
        assert rep.max_discrepancy == 0.0

    def test_float_mode(self, small_table):
        rep = verify_mobius_square_inversion(small_table)
        assert rep.max_discrepancy < 1e-13

    def test_n4_terms(self, small_table):
        c = small_table.c
        lhs = 1472 ** 2 / 4 ** 11
        assert lhs == pytest.approx(c[4] - c[1], rel=1e-15)
        assert lhs == 2166784 / 4194304


class TestTable:
    def test_prefix(self, small_table):
        p, c = small_table.prefix_c, small_table.c
        assert p[0] == 0.0
        diffs = np.diff(p)
        assert np.all(np.abs(diffs - c[1:]) <= 4 * np.spacing(p[1:]))
        assert p[-1] == pytest.approx(math.fsum(c), rel=1e-15)

    def test_compensated_beats_naive(self):
        vals = np.array([0.0] + [0.1] * 10 ** 6)
        exact = Fraction(0.1) * 10 ** 6
        comp = compensated_cumsum(vals)[-1]
        naive = np.cumsum(vals)[-1]
        assert abs(Fraction(comp) - exact) <= abs(Fraction(float(naive)) - exact)
        assert comp == float(exact)

    def test_immutable(self, small_table):
        with pytest.raises(ValueError):
            small_table.c[1] = 5.0

    def test_normalization_required(self):
        tau = np.array([0, 2, 3], dtype=object)
        with pytest.raises(ValueError):
            build_table(2, tau=tau)

    def test_int128_guard(self):
        tau = np.array([0, 1, 1 << 130], dtype=object)
        with pytest.raises(UnsupportedRangeError):
            build_table(2, tau=tau)


@pytest.mark.slow
def test_slow_growth_of_running_max(big_table):
    n = np.unique(np.round(np.geomspace(1000, big_table.n_max, 60)).astype(int))
    running = np.maximum.accumulate(big_table.c[1:])
    fit = fit_exponent(list(zip(n, running[n - 1])))
    assert fit.slope <= 0.1
