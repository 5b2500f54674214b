"""Dense statevector substrate.

Amplitudes are stored as complex128 numpy arrays of length ``2**n``. The
Walsh-Hadamard transform is the unitary butterfly form: every pass scales by
``1/sqrt(2)`` so intermediate vectors keep their norm.

Dense operators exist only as a brute-force oracle for verification and are
capped at dimension 4096.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, InvalidArgument, OracleSizeExceeded

MAX_QUBITS = 24
MAX_DENSE_DIM = 4096

_SQRT1_2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class StateVector:
    """``n``-qubit amplitude vector. Not necessarily normalized."""

    n: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] != 1 << self.n:
            raise DimensionMismatch(
                f"expected {1 << self.n} amplitudes for n={self.n}, got shape {amps.shape}"
            )
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    @classmethod
    def from_amps(cls, amps) -> "StateVector":
        amps = np.asarray(amps, dtype=np.complex128)
        size = amps.shape[0]
        n = size.bit_length() - 1
        if size < 2 or (1 << n) != size:
            raise DimensionMismatch(f"length {size} is not a power of two >= 2")
        return cls(n, amps)

    @classmethod
    def basis(cls, n: int, index: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "StateVector":
        return StateVector(self.n, self.amps / self.norm())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def __array__(self, dtype=None, copy=None):
        return self.amps if dtype is None else self.amps.astype(dtype)

    def __repr__(self):
        return f"StateVector(n={self.n}, norm={self.norm():.12g})"


@dataclass(frozen=True, eq=False)
class DenseOperator:
    dim: int
    entries: np.ndarray

    def __post_init__(self):
        if self.dim > MAX_DENSE_DIM:
            raise OracleSizeExceeded(f"dense dim {self.dim} exceeds {MAX_DENSE_DIM}")
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"entries shape {entries.shape} != ({self.dim}, {self.dim})")
        object.__setattr__(self, "entries", entries)

    def __matmul__(self, other):
        if isinstance(other, DenseOperator):
            return DenseOperator(self.dim, self.entries @ other.entries)
        return self.entries @ np.asarray(other)

    @property
    def H(self) -> "DenseOperator":
        return DenseOperator(self.dim, self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def _check_same(a: StateVector, b: StateVector):
    if a.n != b.n:
        raise DimensionMismatch(f"qubit counts differ: {a.n} vs {b.n}")


def uniform_state(n: int) -> StateVector:
    """H^n|0>: every amplitude is 1/sqrt(2**n)."""
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise InvalidArgument(f"n must be an integer in [1, {MAX_QUBITS}], got {n!r}")
    N = 1 << int(n)
    return StateVector(int(n), np.full(N, 1.0 / np.sqrt(N), dtype=np.complex128))


def fwht_array(arr: np.ndarray) -> np.ndarray:
    """Unitary Walsh-Hadamard transform along the last axis (returns a copy).

    Leading axes are treated as a batch, so a ``(2, N)`` array transforms
    both rows independently.
    """
    out = np.array(arr, dtype=np.complex128, copy=True)
    size = out.shape[-1]
    batch = out.shape[:-1]
    h = 1
    while h < size:
        view = out.reshape(*batch, size // (2 * h), 2, h)
        u = view[..., 0, :].copy()
        v = view[..., 1, :]
        view[..., 0, :] = (u + v) * _SQRT1_2
        view[..., 1, :] = (u - v) * _SQRT1_2
        h *= 2
    return out


def fwht(state: StateVector) -> StateVector:
    return StateVector(state.n, fwht_array(state.amps))


def apply_diagonal(state: StateVector, diag) -> StateVector:
    """Elementwise product with ``diag``; the result may be unnormalized."""
    diag = np.asarray(diag)
    if diag.shape != (state.dim,):
        raise DimensionMismatch(f"diagonal shape {diag.shape} != ({state.dim},)")
    return StateVector(state.n, state.amps * diag)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugating the first argument."""
    _check_same(a, b)
    return complex(np.vdot(a.amps, b.amps))


def dense_from_columns(apply: Callable[[StateVector], StateVector], dim: int) -> DenseOperator:
    """Materialize ``apply`` column by column from basis inputs."""
    if dim > MAX_DENSE_DIM:
        raise OracleSizeExceeded(f"dense dim {dim} exceeds {MAX_DENSE_DIM}")
    n = dim.bit_length() - 1
    if (1 << n) != dim or n < 1:
        raise DimensionMismatch(f"dim {dim} is not a power of two >= 2")
    cols = np.empty((dim, dim), dtype=np.complex128)
    for j in range(dim):
        cols[:, j] = apply(StateVector.basis(n, j)).amps
    return DenseOperator(dim, cols)


def walsh_sign(ell, m):
    """(-1)**(ell . m) where the dot product is popcount(ell & m) mod 2."""
    x = np.bitwise_and(np.asarray(ell, dtype=np.int64), np.asarray(m, dtype=np.int64))
    parity = np.zeros_like(x)
    while np.any(x):
        parity ^= x & 1
        x = x >> 1
    return 1 - 2 * parity


def hadamard_matrix(n: int) -> DenseOperator:
    """Explicit H^n with entries (-1)**(ell . m) / sqrt(N); oracle only."""
    N = 1 << n
    idx = np.arange(N)
    return DenseOperator(N, walsh_sign(idx[:, None], idx[None, :]) / np.sqrt(N))
