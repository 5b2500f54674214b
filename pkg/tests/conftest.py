import warnings
from functools import reduce

import numpy as np
import pytest

from metricgrover.metric import AdvantageWarning


@pytest.fixture(autouse=True)
def _quiet_advantage_warning():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdvantageWarning)
        yield


def kron_hadamard(n):
    """H^n built from Kronecker products; independent of the library's Walsh signs."""
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    return reduce(np.kron, [h] * n)


def oracle_matrix(n, solutions):
    d = np.ones(1 << n)
    d[list(solutions)] = -1.0
    return np.diag(d)


def reflection_about_uniform(n):
    N = 1 << n
    psi = np.full((N, 1), 1 / np.sqrt(N))
    return 2 * psi @ psi.T - np.eye(N)


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
