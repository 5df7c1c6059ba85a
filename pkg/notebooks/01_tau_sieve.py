"""
Ramanujan tau: sieve, oracle, and the coefficient table
========================================================

The sieve multiplies out x * prod(1 - x^k)^24 with the sparse pentagonal
series; the oracle goes through Eisenstein series instead. They share no code.
"""

# %%
import numpy as np

from rankin_lab.coefficients import (build_table, oracle_tau_eisenstein,
                                     pentagonal_euler_product, sieve_tau,
                                     verify_dirichlet_round_trip,
                                     verify_mobius_square_inversion)

# %% The Euler product has only ~2 sqrt(2N/3) nonzero terms
s = pentagonal_euler_product(100)
print(s.exponents())

# %% Sieve vs oracle
N = 5000
tau = sieve_tau(N)
assert np.array_equal(tau, oracle_tau_eisenstein(N))
print("tau(1..6) =", list(tau[1:7]))

# %% c_n, b_n and prefix sums
table = build_table(20_000)
print("c[2] =", table.c[2], " b[2] =", table.b[2])
print("largest c_n below 2e4:", table.c.max(), "at n =", int(table.c.argmax()))

# %% Identity checks: exact rational / integer modes report 0
print(verify_mobius_square_inversion(table, exact=True))
print(verify_dirichlet_round_trip(table, exact=True))
