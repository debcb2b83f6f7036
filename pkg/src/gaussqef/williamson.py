"""Williamson symplectic diagonalization with respect to ``J = (I kron bJ)/2``."""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .ccr import canonical_j
from .errors import DegeneracyWarning, DimensionError, NotPositiveDefiniteError
from .matrix_core import matrix_exp, matrix_sqrt_psd, require_symmetric

__all__ = ["WilliamsonDecomposition", "symplectic_from_generator", "williamson"]

DEGENERACY_GAP = 1e-8


@dataclass(frozen=True)
class WilliamsonDecomposition:
    """``V^T M V = Lambda kron I_2`` with ``V J V^T = J``.

    Attributes:
        V: real symplectic matrix
        lambdas: symplectic eigenvalues, descending
        degenerate: whether two symplectic eigenvalues are closer than 1e-8
    """

    V: np.ndarray
    lambdas: np.ndarray
    degenerate: bool = False

    @property
    def Lambda(self):
        return np.diag(self.lambdas)

    @property
    def nu(self):
        return self.lambdas.shape[0]

    def permuted(self, order):
        """Same decomposition with the mode blocks reordered by ``order``."""
        order = np.asarray(order)
        perm = np.concatenate([[2 * k, 2 * k + 1] for k in order])
        return WilliamsonDecomposition(self.V[:, perm], self.lambdas[order], self.degenerate)


def williamson(M):
    r"""Symplectic diagonalization of a real symmetric positive definite matrix.

    With ``K = M^{1/2} (2J) M^{1/2}`` (antisymmetric), the real Schur form
    ``K = O (Lambda kron bJ) O^T`` gives ``V = M^{-1/2} O (Lambda^{1/2} kron I_2)``.
    The :math:`\lambda_k` are the positive imaginary parts of the eigenvalues
    of ``2 J M``. Schur vectors are orthonormal, so degenerate eigenvalues
    need no separate treatment; they only trigger a :class:`DegeneracyWarning`.

    Raises:
        DimensionError: odd order
        NotPositiveDefiniteError: ``M`` not positive definite
    """
    M = require_symmetric(np.asarray(M, dtype=float), "M")
    n = M.shape[0]
    if n == 0 or n % 2:
        raise DimensionError(f"Williamson decomposition needs an even order, got {n}")
    w = np.linalg.eigvalsh(M)
    if w[0] <= 0:
        raise NotPositiveDefiniteError(f"matrix is not positive definite (min eigenvalue {w[0]:.3e})")
    nu = n // 2

    root = matrix_sqrt_psd(M)
    root_inv = np.linalg.inv(root)
    K = root @ (2.0 * canonical_j(nu)) @ root
    K = (K - K.T) / 2
    B, O = scipy.linalg.schur(K, output="real")
    O = O.copy()
    lambdas = np.empty(nu)
    for k in range(nu):
        j = 2 * k
        b = 0.5 * (B[j, j + 1] - B[j + 1, j])
        if b < 0:
            O[:, [j, j + 1]] = O[:, [j + 1, j]]
            b = -b
        lambdas[k] = b
    order = np.argsort(-lambdas, kind="stable")
    perm = np.concatenate([[2 * k, 2 * k + 1] for k in order])
    O = O[:, perm]
    lambdas = lambdas[order]

    V = root_inv @ O * np.repeat(np.sqrt(lambdas), 2)
    degenerate = bool(nu > 1 and np.min(np.abs(np.diff(lambdas))) < DEGENERACY_GAP)
    if degenerate:
        warnings.warn("near-degenerate symplectic spectrum; V is not unique", DegeneracyWarning, stacklevel=2)
    return WilliamsonDecomposition(V=V, lambdas=lambdas, degenerate=degenerate)


def symplectic_from_generator(H, J=None):
    """Symplectic matrix ``exp(J H)`` (``S J S^T = J``) from a symmetric ``H``."""
    H = np.asarray(H, dtype=float)
    H = (H + H.T) / 2
    if J is None:
        J = canonical_j(H.shape[0] // 2)
    return matrix_exp(J @ H)
