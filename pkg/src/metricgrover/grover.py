"""Standard Grover search: diffusion, iteration and closed forms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidArgument
from .problem import SearchProblem, alpha_beta, apply_phase_oracle
from .statevec import StateVector, fwht, uniform_state


@dataclass(frozen=True)
class GroverAngles:
    theta: float
    half_theta: float


def theta(p: SearchProblem) -> GroverAngles:
    """Rotation angle per iteration, ``2 asin(sqrt(M/N))``."""
    half = math.asin(math.sqrt(p.M / p.N))
    return GroverAngles(2.0 * half, half)


def pseudo_metric(n: int) -> np.ndarray:
    """diag(1, -1, ..., -1)."""
    diag = -np.ones(1 << n)
    diag[0] = 1.0
    return diag


def apply_diffusion(s: StateVector) -> StateVector:
    """2|psi><psi| - I, computed as H^n diag(1,-1,...,-1) H^n."""
    t = fwht(s).amps
    t[1:] = -t[1:]
    return fwht(StateVector(s.n, t))


def grover_step(p: SearchProblem, s: StateVector) -> StateVector:
    return apply_diffusion(apply_phase_oracle(p, s))


def grover_iterate(p: SearchProblem, k: int) -> StateVector:
    """(D U_f)^k applied to the uniform state."""
    if k < 0:
        raise InvalidArgument(f"k must be >= 0, got {k}")
    s = uniform_state(p.n)
    for _ in range(k):
        s = grover_step(p, s)
    return s


def closed_form_state(p: SearchProblem, angle: float) -> StateVector:
    """cos(angle)|alpha> + sin(angle)|beta>."""
    alpha, beta = alpha_beta(p)
    return StateVector(p.n, math.cos(angle) * alpha.amps + math.sin(angle) * beta.amps)


def closed_form_probability(p: SearchProblem, k: int) -> float:
    th = theta(p).theta
    return math.sin(th / 2 + k * th) ** 2


def optimal_iterations(p: SearchProblem) -> int:
    """Best of floor/ceil of pi/(2 theta) - 1/2; ties go to the smaller k."""
    th = theta(p).theta
    x = math.pi / (2 * th) - 0.5
    candidates = sorted({max(0, math.floor(x)), max(0, math.ceil(x))})
    best = candidates[0]
    for k in candidates[1:]:
        if closed_form_probability(p, k) > closed_form_probability(p, best) + 1e-12:
            best = k
    return best


def success_probability(p: SearchProblem, s: StateVector) -> float:
    """Squared mass on the solution set (raw, no renormalization)."""
    if s.n != p.n:
        raise DimensionMismatch(f"state has {s.n} qubits, problem has {p.n}")
    return float(np.sum(np.abs(s.amps[p.mask]) ** 2))
