"""
The mean constant C and the error term Delta(x)
================================================
"""

# %%
import numpy as np

from rankin_lab.coefficients import build_table
from rankin_lab.error_terms import (delta, delta_sensitivity, estimate_C,
                                    running_max_envelope, sum_a_squared)
from rankin_lab.bounds import fit_exponent

table = build_table(50_000)

# %% Two estimators; they should agree within the larger uncertainty
for method in ("least-squares", "difference-quotient"):
    est = estimate_C(table, method)
    print(f"{method:20s} C = {est.value:.7f} +- {est.uncertainty:.1e}")
C = estimate_C(table).value

# %% Delta(x) and how much an error in C moves it
x = 40_000
print("Delta(4e4) =", delta(x, C, table), " shift per 1e-5 in C:", delta_sensitivity(x, 1e-5))

# %% |Delta(x)| / x^(3/5): the running max should flatten out
n, run = running_max_envelope(table, C)
idx = np.unique(np.round(np.geomspace(n[0], n[-1], 60)).astype(int)) - n[0]
print("running-max slope:", fit_exponent(list(zip(n[idx], run[idx]))).slope)

# %% sum a(n)^2 / x^kappa settles to a constant
for x in (10_000, 25_000, 50_000):
    print(x, sum_a_squared(x, table)[1])
