"""Desk-scale self-check: every closed form against a brute-force route.

Used by ``metricgrover verify``. Each check returns ``(name, ok, detail)``.
"""
from __future__ import annotations

import math
import warnings

import numpy as np

from . import blockenc, grover, kraus, metric
from .problem import alpha_beta, apply_phase_oracle, new_problem, random_solutions
from .statevec import dense_from_columns, fwht, hadamard_matrix, uniform_state


def _problems(n_values, per_n, seed=0, max_fraction=0.5):
    """Random problems with ``M < N/2`` (or ``M <= max_fraction * N`` if smaller)."""
    rng = np.random.default_rng(seed)
    for n in n_values:
        N = 1 << n
        m_hi = max(1, min((N - 1) // 2, int(max_fraction * N)))
        for _ in range(per_n):
            m = int(rng.integers(1, m_hi + 1))
            yield new_problem(n, random_solutions(n, m, int(rng.integers(2**31))))


def check_fwht():
    worst = 0.0
    for n in range(1, 7):
        dense = dense_from_columns(fwht, 1 << n).entries
        worst = max(worst, float(np.abs(dense - hadamard_matrix(n).entries).max()))
    return "fwht matches explicit Walsh matrix", worst < 1e-12, f"max err {worst:.2e}"


def check_grover_closed_form():
    worst = 0.0
    for p in _problems(range(2, 9), 4, seed=1):
        th = grover.theta(p).theta
        s = uniform_state(p.n)
        for k in range(2 * grover.optimal_iterations(p) + 1):
            ref = grover.closed_form_state(p, th / 2 + k * th)
            worst = max(worst, float(np.abs(s.amps - ref.amps).max()))
            s = grover.grover_step(p, s)
    return "grover iteration closed form", worst < 1e-10, f"max err {worst:.2e}"


def check_single_shot():
    worst = 0.0
    for p in _problems(range(3, 11), 5, seed=2):
        s = metric.single_shot(p, metric.optimal_phi(p))
        worst = max(worst, abs(grover.success_probability(p, s) - 1.0))
    return "single shot reaches the solution subspace", worst < 1e-9, f"max err {worst:.2e}"


def check_identity_sums():
    worst = 0.0
    for p in _problems(range(2, 7), 5, seed=3):
        half = grover.theta(p).half_theta
        want = (math.tan(half) ** 2, 1 / math.tan(half) ** 2, -1.0)
        got = metric.basis_identity_sums(p)
        worst = max(worst, max(abs(a - b) for a, b in zip(got, want)))
    return "overlap identity sums", worst < 1e-9, f"max err {worst:.2e}"


def check_kraus():
    worst = 0.0
    for p in _problems(range(3, 9), 4, seed=4, max_fraction=0.25):
        if 0 in p:
            continue
        worst = max(worst, abs(kraus.total_success(p, metric.optimal_phi(p)) - p.M / p.N))
    p = new_problem(3, [3])
    rng = np.random.default_rng(5)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", metric.AdvantageWarning)
        for conv in kraus.Convention:
            k = kraus.kraus_pair(metric.metric_params(p, float(rng.uniform(0.05, 1.5))), conv)
            kk, ff = k.dense_k().entries, k.dense_f().entries
            comp = kk.conj().T @ kk + ff.conj().T @ ff
            worst = max(worst, float(np.abs(comp - np.eye(p.N)).max()))
    return "kraus totals and completeness", worst < 1e-10, f"max err {worst:.2e}"


def check_block():
    worst = 0.0
    p = new_problem(3, [5])
    b = blockenc.block_encode(metric.metric_params(p, metric.optimal_phi(p)))
    w = b.dense_walk()
    worst = max(worst, float(np.abs(w.conj().T @ w - np.eye(2 * p.N)).max()))
    power = np.eye(2 * p.N)
    for d in range(1, 33):
        power = power @ w
        worst = max(worst, float(np.abs(np.diag(power[: p.N, : p.N]) - blockenc.chebyshev_block(b, d)).max()))
    j, ledger = blockenc.rounds_needed(new_problem(10, [5]), target=0.99)
    ok = worst < 1e-10 and ledger.oracle_calls == 25
    return "block encoding identities", ok, f"max err {worst:.2e}, calls at N=1024: {ledger.oracle_calls}"


def check_alpha_beta():
    worst = 0.0
    for p in _problems(range(2, 7), 3, seed=6):
        alpha, beta = alpha_beta(p)
        half = grover.theta(p).half_theta
        recon = math.cos(half) * alpha.amps + math.sin(half) * beta.amps
        worst = max(worst, float(np.abs(recon - uniform_state(p.n).amps).max()))
        twice = apply_phase_oracle(p, apply_phase_oracle(p, uniform_state(p.n)))
        worst = max(worst, float(np.abs(twice.amps - uniform_state(p.n).amps).max()))
    return "uniform state decomposition", worst < 1e-12, f"max err {worst:.2e}"


CHECKS = (
    check_fwht,
    check_alpha_beta,
    check_grover_closed_form,
    check_single_shot,
    check_identity_sums,
    check_kraus,
    check_block,
)


def run_all():
    return [check() for check in CHECKS]
