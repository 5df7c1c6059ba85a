import numpy as np
import pytest

from rankin_lab.coefficients import (CoefficientTable, build_table, compensated_cumsum,
                                     compute_b, sieve_divisor, sieve_mobius)
from rankin_lab.error_terms import estimate_C

BIG_N = 200_000


def make_synthetic_table(c):
    """Table whose c-array is given directly; tau is a placeholder."""
    c = np.asarray(c, dtype=np.float64)
    n_max = len(c) - 1
    tau = np.ones(n_max + 1, dtype=object)
    tau[0] = 0
    mu = sieve_mobius(n_max)
    return CoefficientTable(n_max=n_max, kappa=12, tau=tau, c=c.copy(),
                            b=compute_b(c, mu), mobius=mu, d=sieve_divisor(n_max),
                            prefix_c=compensated_cumsum(c))


@pytest.fixture(scope="session")
def small_table():
    return build_table(3000)


@pytest.fixture(scope="session")
def big_table():
    return build_table(BIG_N)


@pytest.fixture(scope="session")
def big_C(big_table):
    return estimate_C(big_table, "least-squares").value


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = {}


@pytest.fixture
def criterion():
    def record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
