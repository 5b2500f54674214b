"""Generalized diffusion built from the diagonal tensor g(theta, phi).

``g = diag(g00, -lam, ..., -lam)`` with ``g00 = cos(phi)/cos(theta)`` and
``lam = sin(phi)/sin(theta)``. Sandwiching g between Walsh-Hadamard
transforms gives a (generally non-unitary) diffusion; at ``phi = theta`` it is
the usual Grover reflection and at ``phi = pi/2 - theta/2`` one application
after the oracle lands exactly on the solution subspace.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, MetricDegenerate, OracleSizeExceeded, PhiOutOfRange
from .grover import theta as grover_theta
from .problem import SearchProblem, apply_phase_oracle
from .statevec import MAX_DENSE_DIM, StateVector, fwht, uniform_state, walsh_sign


class AdvantageWarning(UserWarning):
    """phi <= theta: the rotation is no larger than a plain Grover step."""


@dataclass(frozen=True)
class MetricDiagonal:
    n: int
    g00: float
    lam: float
    theta: float
    phi: float

    @property
    def N(self) -> int:
        return 1 << self.n

    def diagonal(self) -> np.ndarray:
        """Signed diagonal of g."""
        d = np.full(self.N, -self.lam)
        d[0] = self.g00
        return d

    def spectral_norm(self) -> float:
        return max(abs(self.g00), self.lam)


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """g = D' V with U = I: nonnegative singular values and a sign diagonal."""

    d_prime: np.ndarray
    v_signs: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.d_prime * self.v_signs


def _require_nondegenerate(p: SearchProblem):
    if 2 * p.M >= p.N:
        raise MetricDegenerate(f"M={p.M} >= N/2={p.N // 2}: cos(theta) <= 0")


def metric_params(p: SearchProblem, phi: float) -> MetricDiagonal:
    _require_nondegenerate(p)
    if not 0.0 < phi < math.pi / 2:
        raise PhiOutOfRange(f"phi={phi!r} outside (0, pi/2)")
    th = grover_theta(p).theta
    if phi <= th:
        warnings.warn(
            f"phi={phi:.6g} <= theta={th:.6g}; no rotation advantage over Grover",
            AdvantageWarning,
            stacklevel=2,
        )
    if abs(phi - th) <= 1e-12:
        # snap to the exact reflection so the unitary case has no rounding noise
        g00, lam = 1.0, 1.0
    else:
        g00, lam = math.cos(phi) / math.cos(th), math.sin(phi) / math.sin(th)
    return MetricDiagonal(p.n, g00, lam, th, phi)


def optimal_phi(p: SearchProblem) -> float:
    _require_nondegenerate(p)
    return math.pi / 2 - grover_theta(p).half_theta


def apply_generalized_diffusion(m: MetricDiagonal, s: StateVector) -> StateVector:
    """H^n g H^n applied to ``s``. The output is not renormalized."""
    if s.n != m.n:
        raise DimensionMismatch(f"state has {s.n} qubits, metric has {m.n}")
    t = fwht(s).amps
    t[0] *= m.g00
    t[1:] *= -m.lam
    return fwht(StateVector(s.n, t))


def single_shot(p: SearchProblem, phi: float) -> StateVector:
    """One oracle call followed by the generalized diffusion, from |psi>."""
    m = metric_params(p, phi)
    return apply_generalized_diffusion(m, apply_phase_oracle(p, uniform_state(p.n)))


def basis_identity_sums(p: SearchProblem) -> tuple[float, float, float]:
    """Explicit sums over ell >= 1 of the alpha/beta overlap families.

    Returns ``(sum |<a|a_l>|^2, sum |<b|b_l>|^2, sum <a|a_l><b_l|b>)``, which
    should equal ``(tan^2(theta/2), cot^2(theta/2), -1)``. Every overlap is
    evaluated by direct O(N^2) summation of Walsh signs, not by a transform.
    """
    if p.N > MAX_DENSE_DIM:
        raise OracleSizeExceeded(f"N={p.N} exceeds {MAX_DENSE_DIM}")
    N, M = p.N, p.M
    idx = np.arange(N)
    sols = idx[p.mask]
    non = idx[~p.mask]
    s_aa = s_bb = s_ab = 0.0
    chunk = 256
    for start in range(1, N, chunk):
        ell = idx[start : start + chunk, None]
        a_ov = walsh_sign(ell, non[None, :]).sum(axis=1) / (N - M)
        b_ov = walsh_sign(ell, sols[None, :]).sum(axis=1) / M
        s_aa += float(np.sum(a_ov**2))
        s_bb += float(np.sum(b_ov**2))
        s_ab += float(np.sum(a_ov * b_ov))
    return s_aa, s_bb, s_ab


def svd_factor(m: MetricDiagonal) -> SvdFactors:
    d_prime = np.full(m.N, m.lam)
    d_prime[0] = abs(m.g00)
    v_signs = -np.ones(m.N)
    v_signs[0] = 1.0 if m.g00 >= 0 else -1.0
    return SvdFactors(d_prime, v_signs)
