"""
Exponent bookkeeping and the divisor-problem baseline
======================================================
"""

# %%
from rankin_lab.bounds import (MU_HUXLEY, beta_of_mu, divisor_leading_coefficient,
                               improvement_range, optimal_T, theorem1_exponents)

for mu in (0.0, MU_HUXLEY):
    a, g = theorem1_exponents(mu)
    r = improvement_range(mu)
    print(f"mu={mu:.5f} beta={beta_of_mu(mu):.7f} alpha={a:.5f} gamma={g:.5f} "
          f"range=({r.u_low:.5f}, {r.u_high:.5f})")

# %% Optimal T balances the two error terms
T, admissible = optimal_T(1e8, 1e3, 0.0)
print(T, admissible)

# %% Divisor baseline: cubic fit in log(sqrt X / U); the leading coefficient
# is poorly determined at this scale because lower-order terms dominate
lead, detail = divisor_leading_coefficient(2 ** 16, [2 ** k for k in range(2, 7)])
print("c0..c3 =", detail.coefficients, " target c3 =", detail.target)
