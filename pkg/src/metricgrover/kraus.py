"""Post-selection realization of the generalized diffusion as a Kraus pair.

The target operator A is rescaled to ``K = sqrt(p) A`` with the largest
admissible ``p = 1/||A||^2`` and completed by ``F = sqrt(I - K K^dagger)`` so
that ``rho -> K rho K^dagger + F rho F^dagger`` is trace preserving.

Two choices of A are supported:

``Convention.PAPER``
    A is the bare diagonal g, applied to ``U_f|psi>`` and measured directly.
    This equals ``D' (V U_f|psi>)`` with D' the singular values and V the sign
    diagonal, since ``D' V = g``.
``Convention.FULL``
    A is the full generalized diffusion ``H g H``, applied to ``U_f|psi>``.
    At the optimal angle the surviving branch is exactly the solution state.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BranchImpossible, DimensionMismatch, OracleSizeExceeded, PhiOutOfRange
from .metric import MetricDiagonal, apply_generalized_diffusion, metric_params
from .problem import SearchProblem, apply_phase_oracle
from .statevec import DenseOperator, StateVector, apply_diagonal, hadamard_matrix, uniform_state

MAX_CHANNEL_QUBITS = 6
SHOT_BLOCK = 8192


class Convention(str, enum.Enum):
    PAPER = "paper"
    FULL = "full"


@dataclass(frozen=True)
class KrausPair:
    metric: MetricDiagonal
    convention: Convention
    p_norm: float

    @property
    def n(self) -> int:
        return self.metric.n

    def apply_a(self, s: StateVector) -> StateVector:
        """Unscaled target operator A applied to ``s``."""
        if self.convention is Convention.PAPER:
            return apply_diagonal(s, self.metric.diagonal())
        return apply_generalized_diffusion(self.metric, s)

    def apply_k(self, s: StateVector) -> StateVector:
        out = self.apply_a(s)
        return StateVector(out.n, math.sqrt(self.p_norm) * out.amps)

    def dense_a(self) -> DenseOperator:
        diag = np.diag(self.metric.diagonal()).astype(np.complex128)
        if self.convention is Convention.PAPER:
            return DenseOperator(self.metric.N, diag)
        h = hadamard_matrix(self.n).entries
        return DenseOperator(self.metric.N, h @ diag @ h)

    def dense_k(self) -> DenseOperator:
        return DenseOperator(self.metric.N, math.sqrt(self.p_norm) * self.dense_a().entries)

    def dense_f(self) -> DenseOperator:
        """sqrt(I - K K^dagger) by eigendecomposition, clamping tiny negatives."""
        k = self.dense_k().entries
        gram = np.eye(k.shape[0]) - k @ k.conj().T
        gram = (gram + gram.conj().T) / 2
        w, v = np.linalg.eigh(gram)
        w = np.where(w < 0, np.where(w >= -1e-12, 0.0, w), w)
        if np.any(w < 0):
            raise ValueError(f"I - K K^dagger is not PSD (min eigenvalue {w.min():.3e})")
        return DenseOperator(k.shape[0], (v * np.sqrt(w)) @ v.conj().T)


@dataclass(frozen=True)
class ShotStats:
    shots: int
    branch_successes: int
    solution_successes: int
    seed: int
    empirical_p_branch: float
    empirical_p_total: float


def kraus_pair(m: MetricDiagonal, convention=Convention.PAPER) -> KrausPair:
    # H g H and g share singular values, so ||A|| = max(|g00|, lam) either way
    convention = Convention(convention)
    norm = m.spectral_norm()
    p_norm = 1.0 if norm == 1.0 else 1.0 / norm**2
    return KrausPair(m, convention, p_norm)


def _check(k: KrausPair, p: SearchProblem):
    if k.n != p.n:
        raise DimensionMismatch(f"Kraus pair has {k.n} qubits, problem has {p.n}")


def _unscaled_output(k: KrausPair, p: SearchProblem) -> StateVector:
    return k.apply_a(apply_phase_oracle(p, uniform_state(p.n)))


def branch_probability(k: KrausPair, p: SearchProblem) -> float:
    """Probability that the K branch fires: ``p ||A U_f|psi>||^2``."""
    _check(k, p)
    return k.p_norm * _unscaled_output(k, p).norm() ** 2


def closed_form_branch_probability(p: SearchProblem, phi: float) -> float:
    """``1 - (1 - (g00/lam)^2)/N``, valid for theta < phi < pi/2."""
    m = metric_params(p, phi)
    if not m.theta < phi < math.pi / 2:
        raise PhiOutOfRange(f"phi={phi!r} outside (theta={m.theta!r}, pi/2)")
    return 1.0 - (1.0 - (m.g00 / m.lam) ** 2) / p.N


def post_selected_state(k: KrausPair, p: SearchProblem) -> StateVector:
    _check(k, p)
    out = _unscaled_output(k, p)
    if k.p_norm * out.norm() ** 2 <= 1e-15:
        raise BranchImpossible("post-selected branch has zero probability")
    return out.normalized()


def solution_overlap_sum(p: SearchProblem, phi: float, convention=Convention.PAPER) -> float:
    """Unscaled solution mass ``sum_{x in S} |<x|A U_f|psi>|^2``."""
    k = kraus_pair(metric_params(p, phi), convention)
    out = _unscaled_output(k, p)
    return float(np.sum(np.abs(out.amps[p.mask]) ** 2))


def closed_form_overlap_sum(p: SearchProblem, phi: float) -> float:
    """Paper-convention solution mass ``(g00^2 [0 in S] + (M - [0 in S]) lam^2) / N``."""
    m = metric_params(p, phi)
    zero = 1 if 0 in p else 0
    return (zero * m.g00**2 + (p.M - zero) * m.lam**2) / p.N


def total_success(p: SearchProblem, phi: float, convention=Convention.PAPER) -> float:
    """Branch fires and the measurement lands on a solution."""
    k = kraus_pair(metric_params(p, phi), convention)
    return k.p_norm * solution_overlap_sum(p, phi, k.convention)


def _block_counts(seed, block, size, p_branch, probs, mask):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))
    fired = rng.random(size) < p_branch
    idx = rng.choice(probs.shape[0], size=size, p=probs)
    return int(fired.sum()), int((fired & mask[idx]).sum())


def sample_shots(
    p: SearchProblem,
    phi: float,
    convention=Convention.PAPER,
    shots: int = 1000,
    seed: int = 0,
    workers: int = 1,
) -> ShotStats:
    """Monte Carlo of the branch measurement followed by a basis measurement.

    Shots are cut into fixed blocks of ``SHOT_BLOCK``; block ``b`` draws from
    the PCG64 stream seeded by ``SeedSequence(seed, spawn_key=(b,))``. The
    partition never depends on ``workers``, so counts are identical for any
    worker count.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    k = kraus_pair(metric_params(p, phi), convention)
    p_branch = branch_probability(k, p)
    if abs(p_branch - 1.0) < 1e-12:
        p_branch = 1.0
    probs = post_selected_state(k, p).probabilities()
    probs = probs / probs.sum()
    mask = np.asarray(p.mask)

    sizes = [min(SHOT_BLOCK, shots - start) for start in range(0, shots, SHOT_BLOCK)]
    jobs = [(seed, b, size, p_branch, probs, mask) for b, size in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda job: _block_counts(*job), jobs))
    else:
        counts = [_block_counts(*job) for job in jobs]
    branch = sum(c[0] for c in counts)
    solved = sum(c[1] for c in counts)
    return ShotStats(shots, branch, solved, seed, branch / shots, solved / shots)


def channel_apply_density(k: KrausPair, rho: DenseOperator) -> DenseOperator:
    """K rho K^dagger + F rho F^dagger on a dense density matrix."""
    if k.n > MAX_CHANNEL_QUBITS:
        raise OracleSizeExceeded(f"dense channel limited to n <= {MAX_CHANNEL_QUBITS}")
    if rho.dim != k.metric.N:
        raise DimensionMismatch(f"rho dim {rho.dim} != {k.metric.N}")
    kk = k.dense_k().entries
    ff = k.dense_f().entries
    r = rho.entries
    return DenseOperator(rho.dim, kk @ r @ kk.conj().T + ff @ r @ ff.conj().T)
