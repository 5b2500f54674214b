"""Statevector simulation of Grover search with a generalized, non-unitary diffusion."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .problem import SearchProblem, new_problem, parse_solutions  # noqa: F401
from .statevec import DenseOperator, StateVector, fwht, uniform_state  # noqa: F401
