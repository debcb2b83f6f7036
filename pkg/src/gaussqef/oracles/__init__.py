"""Independent ground-truth engines used to cross-check the closed forms."""

from .fock import FockOscillator, FockResult, fock_expectation, gaussian_density, verify_weyl_factorization
from .heat import HeatCheckReport, heat_sandwich_check, split_exponents
from .montecarlo import McEstimate, mc_product_moment, mc_qef, mc_single_variable

__all__ = [
    "FockOscillator",
    "FockResult",
    "HeatCheckReport",
    "McEstimate",
    "fock_expectation",
    "gaussian_density",
    "heat_sandwich_check",
    "mc_product_moment",
    "mc_qef",
    "mc_single_variable",
    "split_exponents",
    "verify_weyl_factorization",
]
