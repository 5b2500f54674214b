"""One-ancilla block encoding of the normalized tensor and its amplification.

Register layout for ``n + 1`` qubits: the ancilla is the most significant bit,
so an array of shape ``(2, N)`` holds the ancilla-0 (flagged) half in row 0.

``U = [[A, B], [B, -A]]`` with ``A = g/||g||`` and ``B = sqrt(I - A^2)`` is the
Hermitian dilation; it is a reflection, so its own powers alternate between U
and I. The walk operator ``W = (Z (x) I) U = [[A, B], [-B, A]]`` rotates each
2x2 index block by ``arccos(a_i)``, so the top-left block of ``W^d`` is the
Chebyshev polynomial ``T_d(A)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, OracleSizeExceeded, TargetUnreachable
from .kraus import Convention, branch_probability, kraus_pair
from .metric import MetricDiagonal, metric_params, optimal_phi
from .problem import SearchProblem
from .statevec import MAX_DENSE_DIM, fwht_array


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    n: int
    a_diag: np.ndarray

    @property
    def N(self) -> int:
        return 1 << self.n

    def complement(self) -> np.ndarray:
        return np.sqrt(np.clip(1.0 - self.a_diag**2, 0.0, None))

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Dilation U on a ``(2, N)`` register."""
        a, b = self.a_diag, self.complement()
        return np.stack([a * x[0] + b * x[1], b * x[0] - a * x[1]])

    def apply_walk(self, x: np.ndarray) -> np.ndarray:
        a, b = self.a_diag, self.complement()
        return np.stack([a * x[0] + b * x[1], -b * x[0] + a * x[1]])

    def dense(self) -> np.ndarray:
        """Dense U; oracle only."""
        if 2 * self.N > MAX_DENSE_DIM:
            raise OracleSizeExceeded(f"dense block encoding of dim {2 * self.N}")
        a = np.diag(self.a_diag)
        b = np.diag(self.complement())
        return np.block([[a, b], [b, -a]])

    def dense_walk(self) -> np.ndarray:
        z = np.diag(np.r_[np.ones(self.N), -np.ones(self.N)])
        return z @ self.dense()


@dataclass
class QueryLedger:
    oracle_calls: int = 0
    walk_steps: int = 0
    reflections: int = 0


def block_encode(m: MetricDiagonal) -> BlockEncoding:
    return BlockEncoding(m.n, m.diagonal() / m.spectral_norm())


def chebyshev_values(x: np.ndarray, d: int) -> np.ndarray:
    """T_d(x) elementwise via T_{k+1} = 2x T_k - T_{k-1}."""
    if d < 0:
        raise InvalidArgument(f"degree must be >= 0, got {d}")
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), x.copy()
    if d == 0:
        return prev
    for _ in range(d - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def chebyshev_block(b: BlockEncoding, d: int) -> np.ndarray:
    """Diagonal of the flagged block of W^d, i.e. T_d(A)."""
    return chebyshev_values(b.a_diag, d)


def degree_for_error(p_norm: float, epsilon: float) -> int:
    """ceil(ln(2/epsilon) / sqrt(p_norm))."""
    if not 0.0 < p_norm <= 1.0:
        raise InvalidArgument(f"p_norm must lie in (0, 1], got {p_norm}")
    if not 0.0 < epsilon < 1.0:
        raise InvalidArgument(f"epsilon must lie in (0, 1), got {epsilon}")
    return math.ceil(math.log(2.0 / epsilon) / math.sqrt(p_norm))


def flag_probability(p: SearchProblem, phi: float) -> float:
    """Flag-0 probability after one pass: the full-diffusion branch probability."""
    return branch_probability(kraus_pair(metric_params(p, phi), Convention.FULL), p)


def amplified_success_closed_form(p0: float, rounds: int) -> float:
    return math.sin((2 * rounds + 1) * math.asin(math.sqrt(min(max(p0, 0.0), 1.0)))) ** 2


class _FlagAmplifier:
    """Explicit (n+1)-qubit simulation of amplitude amplification on the flag."""

    def __init__(self, p: SearchProblem, phi: float, ledger: QueryLedger | None = None):
        self.enc = block_encode(metric_params(p, phi))
        self.signs = np.where(p.mask, -1.0, 1.0)
        self.N = p.N
        self.ledger = ledger if ledger is not None else QueryLedger()

    def _oracle(self, x):
        self.ledger.oracle_calls += 1
        return x * self.signs

    def prepare(self, x):
        # H, U_f, H, U, H: the flagged block is H (g/||g||) H U_f H
        x = fwht_array(x)
        x = self._oracle(x)
        x = fwht_array(x)
        x = self.enc.apply(x)
        self.ledger.walk_steps += 1
        return fwht_array(x)

    def unprepare(self, x):
        x = fwht_array(x)
        x = self.enc.apply(x)
        self.ledger.walk_steps += 1
        x = fwht_array(x)
        x = self._oracle(x)
        return fwht_array(x)

    def initial(self):
        x = np.zeros((2, self.N), dtype=np.complex128)
        x[0, 0] = 1.0
        return self.prepare(x)

    def round(self, x):
        x = x.copy()
        x[0] = -x[0]
        x = self.unprepare(x)
        x[0, 0] = -x[0, 0]
        x = -self.prepare(x)
        self.ledger.reflections += 2
        return x


def amplified_register(p: SearchProblem, phi: float, rounds: int, ledger: QueryLedger | None = None):
    """The ``(2, N)`` register after ``rounds`` amplification rounds."""
    if rounds < 0:
        raise InvalidArgument(f"rounds must be >= 0, got {rounds}")
    amp = _FlagAmplifier(p, phi, ledger)
    x = amp.initial()
    for _ in range(rounds):
        x = amp.round(x)
    return x


def amplified_success(p: SearchProblem, phi: float, rounds: int) -> float:
    """Flag-0 probability after ``rounds`` reflections, by explicit simulation."""
    x = amplified_register(p, phi, rounds)
    return float(np.sum(np.abs(x[0]) ** 2))


def rounds_needed(
    p: SearchProblem,
    phi: float | None = None,
    target: float = 0.99,
    strict: bool = False,
) -> tuple[int, QueryLedger]:
    """Fewest rounds reaching ``target`` within the first amplification lobe.

    If no round count in the first lobe reaches ``target``, the count with the
    highest success is returned instead; with ``strict`` this raises
    :class:`TargetUnreachable` once that best value is below ``target - 1e-9``.
    """
    if not 0.0 < target < 1.0:
        raise InvalidArgument(f"target must lie in (0, 1), got {target}")
    if phi is None:
        phi = optimal_phi(p)
    p0 = flag_probability(p, phi)
    a = math.asin(math.sqrt(min(max(p0, 0.0), 1.0)))
    if a <= 0.0:
        raise TargetUnreachable("flag probability is zero")
    j_hi = max(0, math.ceil(math.pi / (4 * a) - 0.5))
    probs = [amplified_success_closed_form(p0, j) for j in range(j_hi + 1)]
    hits = [j for j, q in enumerate(probs) if q >= target]
    if hits:
        j = hits[0]
    else:
        j = int(np.argmax(probs))
        if strict and probs[j] < target - 1e-9:
            raise TargetUnreachable(f"best success {probs[j]:.6g} < target {target}")
    ledger = QueryLedger(oracle_calls=2 * j + 1, walk_steps=2 * j + 1, reflections=2 * j)
    return j, ledger
