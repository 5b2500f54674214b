import math

import numpy as np
import pytest

from metricgrover.blockenc import (
    QueryLedger,
    amplified_register,
    amplified_success,
    amplified_success_closed_form,
    block_encode,
    chebyshev_block,
    chebyshev_values,
    degree_for_error,
    flag_probability,
    rounds_needed,
)
from metricgrover.errors import InvalidArgument, TargetUnreachable
from metricgrover.grover import theta
from metricgrover.metric import metric_params, optimal_phi
from metricgrover.problem import alpha_beta, new_problem


def _encoding(n, sols, phi=None):
    p = new_problem(n, sols)
    return p, block_encode(metric_params(p, optimal_phi(p) if phi is None else phi))


def test_block_encode_unitary_case():
    p = new_problem(4, [5])
    b = block_encode(metric_params(p, theta(p).theta))
    np.testing.assert_allclose(b.a_diag, [1] + [-1] * 15, atol=1e-12)
    np.testing.assert_allclose(b.complement(), 0, atol=1e-7)


def test_block_encode_optimal_n4():
    _, b = _encoding(4, [5])
    np.testing.assert_allclose(b.a_diag, [1 / 7] + [-1] * 15, atol=1e-12)
    assert b.complement()[0] == pytest.approx(math.sqrt(1 - 1 / 49), abs=1e-12)
    assert b.complement()[0] == pytest.approx(0.98974, abs=1e-5)
    assert np.abs(b.a_diag).max() == pytest.approx(1.0, abs=1e-12)


def test_block_encode_dense_unitarity():
    rng = np.random.default_rng(1)
    for n in range(2, 7):
        p = new_problem(n, [1])
        b = block_encode(metric_params(p, float(rng.uniform(0.05, 1.5))))
        for w in (b.dense(), b.dense_walk()):
            np.testing.assert_allclose(w.conj().T @ w, np.eye(2 * p.N), atol=1e-12)
            np.testing.assert_array_equal(w[: p.N, : p.N], np.diag(b.a_diag))


def test_chebyshev_examples():
    _, b = _encoding(4, [5])
    np.testing.assert_array_equal(chebyshev_block(b, 1), b.a_diag)
    t2 = chebyshev_block(b, 2)
    assert t2[0] == pytest.approx(2 / 49 - 1, abs=1e-12)
    assert t2[0] == pytest.approx(-0.95918367, abs=1e-8)
    assert t2[1] == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_array_equal(chebyshev_block(b, 0), 1.0)
    with pytest.raises(InvalidArgument):
        chebyshev_values([0.5], -1)


def test_chebyshev_recurrence_against_cosine():
    x = np.linspace(-1, 1, 101)
    for d in range(0, 40):
        np.testing.assert_allclose(chebyshev_values(x, d), np.cos(d * np.arccos(x)), atol=1e-10)


@pytest.mark.parametrize("n", range(2, 7))
def test_walk_power_block_identity(n):
    rng = np.random.default_rng(n)
    p = new_problem(n, [1])
    b = block_encode(metric_params(p, float(rng.uniform(0.05, 1.5))))
    w = b.dense_walk()
    power = np.eye(2 * p.N)
    for d in range(1, 33):
        power = power @ w
        block = power[: p.N, : p.N]
        np.testing.assert_allclose(block, np.diag(chebyshev_block(b, d)), atol=1e-10)


def test_dilation_powers_alternate():
    # U is a reflection, so its own powers do not produce Chebyshev blocks
    _, b = _encoding(3, [5])
    u = b.dense()
    np.testing.assert_allclose(u @ u, np.eye(16), atol=1e-12)


@pytest.mark.parametrize(
    "p_norm, eps, d", [(1.0, 0.5, 2), (0.25, 1e-3, 16), (1 / 256, 1e-3, 122)]
)
def test_degree_for_error(p_norm, eps, d):
    assert degree_for_error(p_norm, eps) == d


def test_degree_bounds_and_monotone():
    for p_norm in np.geomspace(1e-4, 1.0, 15):
        prev = None
        for eps in np.geomspace(0.9, 1e-9, 25):
            d = degree_for_error(p_norm, eps)
            assert 1 <= d * math.sqrt(p_norm) / math.log(2 / eps) <= 2
            if prev is not None:
                assert d >= prev
            prev = d
    for bad in ((0.0, 0.1), (1.5, 0.1), (0.5, 0.0), (0.5, 1.0)):
        with pytest.raises(InvalidArgument):
            degree_for_error(*bad)


def test_amplified_success_examples():
    p = new_problem(4, [5])
    phi = optimal_phi(p)
    assert flag_probability(p, phi) == pytest.approx(0.25, abs=1e-12)
    assert amplified_success(p, phi, 0) == pytest.approx(0.25, abs=1e-9)
    assert amplified_success(p, phi, 1) == pytest.approx(1.0, abs=1e-9)
    x = amplified_register(p, phi, 1)
    flagged = x[0] / np.linalg.norm(x[0])
    assert abs(np.vdot(alpha_beta(p)[1].amps, flagged)) == pytest.approx(1.0, abs=1e-9)
    p = new_problem(10, [5])
    val = amplified_success(p, optimal_phi(p), 12)
    assert val == pytest.approx(math.sin(25 * math.asin(1 / 16)) ** 2, abs=1e-9)
    assert val == pytest.approx(0.99995, abs=1e-5)
    with pytest.raises(InvalidArgument):
        amplified_success(p, optimal_phi(p), -1)


def test_amplified_simulation_matches_closed_form():
    rng = np.random.default_rng(3)
    for n in range(2, 11):
        p = new_problem(n, [int(rng.integers(1, 1 << n))])
        th = theta(p).theta
        for phi in (optimal_phi(p), float(rng.uniform(th, math.pi / 2 - 1e-3))):
            p0 = flag_probability(p, phi)
            for j in range(0, 6):
                assert amplified_success(p, phi, j) == pytest.approx(
                    amplified_success_closed_form(p0, j), abs=1e-9
                )


def test_ledger_counts_simulation():
    p = new_problem(6, [9])
    ledger = QueryLedger()
    amplified_register(p, optimal_phi(p), 3, ledger)
    assert ledger == QueryLedger(oracle_calls=7, walk_steps=7, reflections=6)


@pytest.mark.parametrize("n, j, calls", [(4, 1, 3), (10, 12, 25), (2, 0, 1)])
def test_rounds_needed(n, j, calls):
    rounds, ledger = rounds_needed(new_problem(n, [1]), target=0.99)
    assert rounds == j and ledger.oracle_calls == calls
    assert ledger.walk_steps == calls and ledger.reflections == 2 * j


def test_rounds_needed_fallback_and_strict():
    p = new_problem(5, [1])
    j, ledger = rounds_needed(p, target=0.99)
    # first lobe peaks at j=2 with sin^2(5 asin(sqrt(1/8))) ~ 0.945
    assert j == 2 and ledger.oracle_calls == 5
    with pytest.raises(TargetUnreachable):
        rounds_needed(p, target=0.99, strict=True)
    with pytest.raises(InvalidArgument):
        rounds_needed(p, target=1.0)


def test_scaling_exponent():
    ns = range(4, 13)
    N = np.array([2.0**n for n in ns])
    results = [rounds_needed(new_problem(n, [1]), target=0.99) for n in ns]
    calls = np.array([r[1].oracle_calls for r in results], dtype=float)
    js = np.array([r[0] for r in results], dtype=float)
    assert 0.45 <= np.polyfit(np.log(N), np.log(calls), 1)[0] <= 0.55
    assert 0.45 <= np.polyfit(np.log(N), np.log(js), 1)[0] <= 0.55
