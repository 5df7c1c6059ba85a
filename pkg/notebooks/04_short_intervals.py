"""
Short-interval mean squares and the envelope sweep
===================================================
"""

# %%
from rankin_lab.coefficients import build_table
from rankin_lab.error_terms import estimate_C
from rankin_lab.short_interval import interval_mean_square, sweep

table = build_table(50_000)
C = estimate_C(table).value

# %% Continuous integral vs the two discrete sums
cell = interval_mean_square(10_000, 30, C, table)
print(cell.continuous, cell.shifted_discrete, cell.discrete)
print("boundary gap", cell.boundary_gap, "<= 2 w^2 =", 2 * cell.max_window ** 2)

# %% Sweep U = X^u; the improvement range (1/3, 9/20) is added with with_range
res = sweep([4096, 8192, 16384], [0.2, 0.4, 0.5], C, table, with_range=True, threads=4)
for c in res.cells:
    print(f"X={c.X:6d} u={c.u:.3f} M={c.continuous:12.1f} "
          f"trivial ratio={c.continuous / c.envelopes['trivial']:.3f}")
print("per-X K0 (trivial):", res.row_K0["trivial"], "spread", res.k0_spread())
