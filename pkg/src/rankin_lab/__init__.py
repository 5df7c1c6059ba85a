"""Numerical experiments on the Rankin-Selberg error term in short intervals."""

from .bounds import (BoundEnvelope, ExponentFit, LindelofParams, beta_of_mu,
                     divisor_leading_coefficient, fit_exponent, improvement_range,
                     optimal_T, theorem1_exponents, trivial_envelope)
from .coefficients import (CoefficientTable, SparseSeries, build_table, compute_b,
                           compute_b_exact, compute_c, oracle_tau_eisenstein,
                           pentagonal_euler_product, sieve_divisor, sieve_mobius, sieve_tau,
                           verify_dirichlet_round_trip, verify_mobius_square_inversion)
from .error_terms import (MeanConstantEstimate, build_divisor_table, delta, delta2,
                          estimate_C, partial_sum_c, sum_a_squared)
from .persistence import import_external_tau, load_table, save_table
from .short_interval import (IntervalMeanSquare, mean_square_continuous,
                             mean_square_discrete, sweep, window_diff)
from .voronoi import truncation_scan, voronoi_delta

__version__ = "0.1.0"
