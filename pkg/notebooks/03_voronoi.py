"""
Truncated Voronoi-type sum
===========================

At desk scale the truncated sum tracks Delta(x) only loosely; the scan shows
how the jitter-averaged error behaves as K grows.
"""

# %%
from rankin_lab.coefficients import build_table
from rankin_lab.error_terms import estimate_C
from rankin_lab.voronoi import evaluate, truncation_scan

table = build_table(50_000)
C = estimate_C(table).value

# %%
for K in (16, 256, 4096):
    ev = evaluate(10_000.0, K, C, table)
    print(f"K={K:5d}  voronoi={ev.value:+.4f}  Delta={ev.exact_delta:+.4f}  |err|={ev.abs_error:.3f}")

# %%
scan = truncation_scan([5_000.0, 10_000.0], [16, 64, 256, 1024, 4096], table, C, jitter=40)
for x, errs, slope in zip(scan.x_grid, scan.mean_abs_error, scan.slopes):
    print(x, errs.round(3), "slope", round(float(slope), 3))
