"""Zero-mean Gaussian quantum states over a CCR matrix."""

from dataclasses import dataclass

import numpy as np

from .ccr import CcrMatrix, canonical_j, validate
from .errors import DimensionError, HeisenbergViolationError
from .matrix_core import require_symmetric

__all__ = ["GaussianState", "admissible", "mgf", "qcf", "thermal", "vacuum"]


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Zero-mean Gaussian state with quantum covariance ``P + i Theta``.

    Attributes:
        P: real symmetric covariance part
        ccr: the CCR matrix
        min_eigenvalue: smallest eigenvalue of ``P + i Theta`` (certifies admissibility)
    """

    P: np.ndarray
    ccr: CcrMatrix
    min_eigenvalue: float

    @property
    def n(self):
        return self.P.shape[0]

    @property
    def theta(self):
        return self.ccr.theta

    def qcf(self, u):
        return qcf(self, u)

    def mgf(self, u, transform=None):
        return mgf(self, u, transform)

    def with_ccr(self, ccr):
        return admissible(self.P, ccr)


def admissible(P, ccr, tol=None):
    """Construct a state, checking the uncertainty relation ``P + i Theta >= 0``.

    Raises:
        SymmetryError: ``P`` not symmetric
        DimensionError: ``P`` and ``Theta`` of different orders
        HeisenbergViolationError: min eigenvalue below ``-tol``; the default is
            ``1e-10 (1 + max|P|)``
    """
    if not isinstance(ccr, CcrMatrix):
        ccr = validate(ccr)
    P = require_symmetric(np.asarray(P, dtype=float), "P")
    if P.shape != ccr.theta.shape:
        raise DimensionError(f"P has shape {P.shape} but Theta has shape {ccr.theta.shape}")
    tol = 1e-10 * (1.0 + np.max(np.abs(P), initial=0.0)) if tol is None else tol
    w = np.linalg.eigvalsh(P + 1j * ccr.theta)
    lo = float(w[0]) if w.size else 0.0
    if lo < -tol:
        raise HeisenbergViolationError(
            f"P + i Theta is not positive semidefinite (min eigenvalue {lo:.6g})", lo
        )
    P.setflags(write=False)
    return GaussianState(P=P, ccr=ccr, min_eigenvalue=lo)


def vacuum(nu):
    """Vacuum of ``nu`` canonical modes: ``P = I/2``, ``Theta = J``."""
    return admissible(0.5 * np.eye(2 * nu), canonical_j(nu))


def thermal(s, nu=1):
    """Thermal state ``P = s I`` of ``nu`` canonical modes (``s >= 1/2``)."""
    return admissible(s * np.eye(2 * nu), canonical_j(nu))


def _vector(u, n):
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.shape[0] != n:
        raise DimensionError(f"expected a vector of length {n}, got {u.shape[0]}")
    return u


def qcf(state, u):
    """Quasi-characteristic function ``E exp(i u^T X) = exp(-u^T P u / 2)``."""
    u = _vector(u, state.n)
    return complex(np.exp(-0.5 * u @ state.P @ u))


def mgf(state, u, transform=None):
    """Moment-generating function ``E exp(u^T M X) = exp(|M^T u|_P^2 / 2)``.

    Args:
        u: vector of length ``m``
        transform: ``m x n`` matrix ``M`` of the linear image ``M X``; identity
            when omitted
    """
    if transform is None:
        v = _vector(u, state.n)
    else:
        M = np.asarray(transform, dtype=float)
        if M.ndim != 2 or M.shape[1] != state.n:
            raise DimensionError(f"transform must have {state.n} columns, got shape {M.shape}")
        v = M.T @ _vector(u, M.shape[0])
    return float(np.exp(0.5 * v @ state.P @ v))
