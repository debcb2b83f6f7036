"""Closed-form moments and quadratic-exponential functionals of Gaussian quantum states."""

__version__ = "0.1.0"

from .ccr import CcrMatrix, canonicalize, validate
from .errors import DomainError, GaussQefError, InputError
from .moments import product_moment_EY, product_moment_EYY, single_variable_qem
from .qef import QefProblem, classical_limit, compute_qef, risk_sweep
from .state import GaussianState, admissible, thermal, vacuum
from .williamson import williamson

__all__ = [
    "CcrMatrix",
    "DomainError",
    "GaussQefError",
    "GaussianState",
    "InputError",
    "QefProblem",
    "__version__",
    "admissible",
    "canonicalize",
    "classical_limit",
    "compute_qef",
    "product_moment_EY",
    "product_moment_EYY",
    "risk_sweep",
    "single_variable_qem",
    "thermal",
    "vacuum",
    "validate",
    "williamson",
]
