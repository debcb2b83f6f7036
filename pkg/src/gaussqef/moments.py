"""Closed-form quadratic-exponential product moments of Gaussian states.

For ``Y = exp(-X_1^2/2) ... exp(-X_n^2/2)`` (factors in index order)::

    E Y      = det(P + I_n + i Theta^diam)^(-1/2)
    E Y Y^+  = det(I_2n + K^diam)^(-1/2),   K = [I; R] (P + i Theta) [I, R]

with ``R`` the order-``n`` reversal matrix.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .matrix_core import diam, matrix_sqrt_psd, reversal

__all__ = [
    "ProductMomentReport",
    "augmented_covariance",
    "product_moment_EY",
    "product_moment_EYY",
    "single_variable_qem",
]


def single_variable_qem(Sigma2, sigma2):
    """``E exp(-sigma2 xi^2 / 2)`` for a zero-mean Gaussian variable of variance ``Sigma2``."""
    if Sigma2 < 0 or sigma2 < 0:
        raise DomainError(f"variances must be nonnegative, got Sigma2={Sigma2}, sigma2={sigma2}")
    return 1.0 / np.sqrt(1.0 + Sigma2 * sigma2)


def _inv_sqrt_det(A, B):
    """``det(A + iB)^(-1/2)`` for real symmetric ``A > 0`` and real symmetric ``B``.

    Writing ``A + iB = A^{1/2} (I + i M) A^{1/2}`` with ``M`` real symmetric,
    the determinant factors as ``det A * prod(1 + i mu_k)``. Every factor has
    positive real part along the path ``A + i t B``, ``t`` in ``[0, 1]``, so the
    product of principal roots is the branch continuous from the commuting
    case ``B = 0``.
    """
    root = matrix_sqrt_psd(A)
    root_inv = np.linalg.inv(root)
    M = root_inv @ B @ root_inv
    mu = np.linalg.eigvalsh((M + M.T) / 2)
    _, logdet_a = np.linalg.slogdet(A)
    log_value = -0.5 * logdet_a - 0.5 * np.sum(np.log1p(1j * mu))
    return complex(np.exp(log_value))


def product_moment_EY(state):
    """``E Y`` for the ordered product of ``exp(-X_k^2/2)``; complex in general."""
    n = state.n
    return _inv_sqrt_det(state.P + np.eye(n), diam(state.theta))


def augmented_covariance(state):
    """Quantum covariance ``K`` of ``(X_1..X_n, X_n..X_1)``."""
    n = state.n
    IR = np.vstack([np.eye(n), reversal(n)])
    return IR @ (state.P + 1j * state.theta) @ IR.T


@dataclass(frozen=True)
class ProductMomentReport:
    """``E Y Y^+`` with its upper bound.

    Attributes:
        value: the (real) moment
        imag_residual: discarded imaginary part of the closed form
        upper_bound: ``det(I_n + 2P)^(-1/2)``
        K: augmented ``2n x 2n`` quantum covariance
    """

    value: float
    imag_residual: float
    upper_bound: float
    K: np.ndarray


def product_moment_EYY(state):
    K = augmented_covariance(state)
    Kd = diam(K)
    n2 = K.shape[0]
    raw = _inv_sqrt_det(np.eye(n2) + Kd.real, Kd.imag)
    _, logdet = np.linalg.slogdet(np.eye(state.n) + 2.0 * state.P)
    return ProductMomentReport(
        value=raw.real,
        imag_residual=abs(raw.imag),
        upper_bound=float(np.exp(-0.5 * logdet)),
        K=K,
    )
