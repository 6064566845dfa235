import numpy as np
import pytest

from mildflow.spectral import ScalarField, VelocityField, eigenvalue_table


def random_coeffs(rng, K, decay=1.0):
    return rng.standard_normal((K, K)) / eigenvalue_table(K) ** decay


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def rand_scalar(rng):
    def make(K=8, scale=1.0):
        return ScalarField(scale * random_coeffs(rng, K))
    return make


@pytest.fixture
def rand_velocity(rng):
    def make(K=8, scale=1.0):
        return VelocityField(scale * random_coeffs(rng, K, 1.5))
    return make


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion; printed in the terminal summary."""
    def record(number, title, ok, detail):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
