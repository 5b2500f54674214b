"""Search problem, phase oracle and the alpha/beta vector families."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, InvalidProblem
from .statevec import StateVector, walsh_sign


@dataclass(frozen=True, eq=False)
class SearchProblem:
    n: int
    solutions: tuple[int, ...]
    _mask: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        N = 1 << self.n
        mask = np.zeros(N, dtype=bool)
        mask[list(self.solutions)] = True
        object.__setattr__(self, "_mask", mask)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def M(self) -> int:
        return len(self.solutions)

    @property
    def mask(self) -> np.ndarray:
        """Boolean indicator of the solution set (read-only view)."""
        view = self._mask.view()
        view.flags.writeable = False
        return view

    def __contains__(self, x) -> bool:
        return 0 <= x < self.N and bool(self._mask[x])

    def __eq__(self, other):
        return isinstance(other, SearchProblem) and (self.n, self.solutions) == (
            other.n,
            other.solutions,
        )

    def __hash__(self):
        return hash((self.n, self.solutions))


def new_problem(n: int, solutions, strict: bool = False) -> SearchProblem:
    """Validate and build a :class:`SearchProblem`.

    Duplicates are dropped silently unless ``strict`` is set.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidProblem(f"n must be a positive integer, got {n!r}")
    n = int(n)
    N = 1 << n
    sols = [int(x) for x in solutions]
    if not sols:
        raise InvalidProblem("solution set is empty")
    bad = [x for x in sols if not 0 <= x < N]
    if bad:
        raise InvalidProblem(f"indices out of range [0, {N}): {bad}")
    unique = sorted(set(sols))
    if strict and len(unique) != len(sols):
        raise InvalidProblem("duplicate solution indices")
    if len(unique) >= N:
        raise InvalidProblem("every index is a solution; f needs at least one non-solution")
    return SearchProblem(n, tuple(unique))


def random_solutions(n: int, m: int, seed: int, exclude_zero: bool = False) -> list[int]:
    """``m`` distinct indices drawn with ``numpy.random.default_rng(seed)``."""
    N = 1 << n
    lo = 1 if exclude_zero else 0
    if not 1 <= m <= N - 1:
        raise InvalidProblem(f"cannot draw {m} solutions from N={N}")
    rng = np.random.default_rng(seed)
    return sorted(int(x) + lo for x in rng.choice(N - lo, size=m, replace=False))


def parse_solutions(n: int, spec: str) -> SearchProblem:
    """Parse ``"3,5,9"`` or ``"random:M:seed"`` into a problem over ``n`` qubits."""
    spec = spec.strip()
    if spec.startswith("random:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise InvalidProblem(f"expected random:M:seed, got {spec!r}")
        try:
            m, seed = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise InvalidProblem(f"bad random specifier {spec!r}") from exc
        return new_problem(n, random_solutions(n, m, seed))
    try:
        sols = [int(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError as exc:
        raise InvalidProblem(f"bad solution list {spec!r}") from exc
    return new_problem(n, sols, strict=True)


def apply_phase_oracle(p: SearchProblem, s: StateVector) -> StateVector:
    """Negate the amplitudes indexed by solutions."""
    if s.n != p.n:
        raise DimensionMismatch(f"state has {s.n} qubits, problem has {p.n}")
    return StateVector(s.n, np.where(p._mask, -s.amps, s.amps))


def alpha_beta(p: SearchProblem) -> tuple[StateVector, StateVector]:
    """Uniform superpositions over non-solutions and over solutions."""
    return alpha_ell(p, 0), beta_ell(p, 0)


def _twisted(p: SearchProblem, ell: int, on_solutions: bool) -> StateVector:
    if not 0 <= ell < p.N:
        raise IndexOutOfRange(f"ell={ell} outside [0, {p.N})")
    support = p._mask if on_solutions else ~p._mask
    count = p.M if on_solutions else p.N - p.M
    signs = walsh_sign(ell, np.arange(p.N)) if ell else 1.0
    amps = np.where(support, signs / np.sqrt(count), 0.0).astype(np.complex128)
    return StateVector(p.n, amps)


def alpha_ell(p: SearchProblem, ell: int) -> StateVector:
    """sum over non-solutions m of (-1)**(ell . m) |m>, normalized."""
    return _twisted(p, ell, on_solutions=False)


def beta_ell(p: SearchProblem, ell: int) -> StateVector:
    return _twisted(p, ell, on_solutions=True)
