"""Dense real/complex matrix substrate.

Thin, validated wrappers over numpy/scipy for the standard matrix functions,
plus the few bespoke operations the rest of the package is built on:
:func:`diam` (upper-triangle symmetrization), :func:`reversal` (anti-diagonal
permutation) and :func:`upsilon` (the entire function ``(e^z - 1)/z``).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    BranchCutError,
    DimensionError,
    InputError,
    NotPositiveDefiniteError,
    SingularMatrixError,
    SymmetryError,
)

__all__ = [
    "SymmetryTag",
    "as_square",
    "classify_symmetry",
    "default_tol",
    "det",
    "diam",
    "kron",
    "matrix_exp",
    "matrix_sqrt_psd",
    "principal_log",
    "require_symmetric",
    "reversal",
    "spectral_radius",
    "symmetrize",
    "upsilon",
]

# Taylor series for upsilon is used below this spectral radius.
UPSILON_SERIES_RADIUS = 0.5


def as_square(M, name="matrix"):
    """Return ``M`` as a finite 2-d square ndarray or raise."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{name} has non-finite entries")
    return M


def default_tol(M):
    """Symmetry tolerance ``1e-9 * (1 + max|m_jk|)``."""
    M = np.asarray(M)
    return 1e-9 * (1.0 + (np.max(np.abs(M)) if M.size else 0.0))


@dataclass(frozen=True)
class SymmetryTag:
    """Symmetry class of a matrix together with the tolerance it was checked at."""

    kind: str  # "symmetric", "antisymmetric", "hermitian" or "none"
    tolerance: float


def classify_symmetry(M, tol=None):
    """Detect the symmetry class of a square matrix.

    Symmetric is preferred over Hermitian when both apply (real symmetric input).
    The zero matrix is reported as symmetric.
    """
    M = as_square(M)
    tol = default_tol(M) if tol is None else tol
    if np.max(np.abs(M - M.T), initial=0.0) <= tol:
        return SymmetryTag("symmetric", tol)
    if np.max(np.abs(M + M.T), initial=0.0) <= tol:
        return SymmetryTag("antisymmetric", tol)
    if np.max(np.abs(M - M.conj().T), initial=0.0) <= tol:
        return SymmetryTag("hermitian", tol)
    return SymmetryTag("none", tol)


def require_symmetric(M, name="matrix", tol=None, anti=False):
    """Validate (anti)symmetry and return the exactly (anti)symmetrized matrix."""
    M = as_square(M, name)
    tol = default_tol(M) if tol is None else tol
    sign = -1.0 if anti else 1.0
    residual = np.max(np.abs(M - sign * M.T), initial=0.0)
    if residual > tol:
        kind = "antisymmetric" if anti else "symmetric"
        raise SymmetryError(f"{name} is not {kind}: residual {residual:.3e} > {tol:.3e}")
    return (M + sign * M.T) / 2


def symmetrize(M):
    """Return ``((M + M^T)/2, max|M - M^T|)``."""
    M = np.asarray(M)
    return (M + M.T) / 2, float(np.max(np.abs(M - M.T), initial=0.0))


def diam(M):
    r"""Symmetric matrix inheriting the diagonal and upper triangle of ``M``.

    ``(M^\diamond)_{jk} = m_{jk}`` for ``j <= k`` and ``m_{kj}`` otherwise.
    """
    M = as_square(M)
    upper = np.triu(M)
    return upper + np.triu(M, 1).T


def reversal(n):
    """Order-``n`` matrix with ones on the anti-diagonal (an involution)."""
    if int(n) != n or n < 1:
        raise DimensionError(f"reversal order must be a positive integer, got {n}")
    return np.eye(int(n))[::-1].copy()


def spectral_radius(M):
    M = as_square(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(M))))


def kron(A, B):
    return np.kron(np.asarray(A), np.asarray(B))


def det(M):
    M = as_square(M)
    return np.linalg.det(M)


def matrix_exp(M):
    """Matrix exponential (scaling and squaring with Pade approximants)."""
    M = as_square(M)
    return scipy.linalg.expm(M)


def matrix_sqrt_psd(M, tol=None):
    """Unique positive semidefinite square root of a Hermitian PSD matrix.

    Raises:
        SymmetryError: input not Hermitian
        NotPositiveDefiniteError: an eigenvalue is below ``-tol``
    """
    M = as_square(M)
    tol = default_tol(M) if tol is None else tol
    if np.max(np.abs(M - M.conj().T), initial=0.0) > tol:
        raise SymmetryError("matrix_sqrt_psd requires a Hermitian matrix")
    H = (M + M.conj().T) / 2
    w, U = np.linalg.eigh(H)
    if w.size and w[0] < -tol:
        raise NotPositiveDefiniteError(f"matrix is not PSD: min eigenvalue {w[0]:.3e}")
    root = (U * np.sqrt(np.clip(w, 0.0, None))) @ U.conj().T
    return root.real if np.isrealobj(M) else root


def principal_log(M, tol=1e-12):
    r"""Principal matrix logarithm.

    The eigenvalues of the result have imaginary parts in :math:`(-\pi, \pi)`.

    Args:
        M (array): square real or complex matrix
        tol (float): relative distance from zero / from the negative real axis
            below which an eigenvalue counts as singular / on the branch cut

    Raises:
        SingularMatrixError: ``M`` has a (numerically) zero eigenvalue
        BranchCutError: an eigenvalue lies on the closed negative real axis
    """
    M = as_square(M)
    n = M.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    eig = np.linalg.eigvals(M)
    scale = max(np.max(np.abs(M)), 1.0)
    small = np.abs(eig) <= tol * scale
    if np.any(small):
        raise SingularMatrixError(f"matrix logarithm of a singular matrix (|eig| = {np.min(np.abs(eig)):.3e})")
    on_cut = (eig.real < 0) & (np.abs(eig.imag) <= tol * np.abs(eig))
    if np.any(on_cut):
        bad = eig[on_cut][0]
        raise BranchCutError(f"eigenvalue {bad:.6g} on the branch cut of the principal logarithm", value=bad)
    L = scipy.linalg.logm(M.astype(complex))
    return np.asarray(L, dtype=complex)


def upsilon(Z):
    r"""Entire function :math:`\Upsilon(Z) = \sum_{k \ge 0} Z^k/(k+1)!`.

    Equals ``Z^{-1}(e^Z - I)`` for invertible ``Z``. Small ``Z`` (spectral radius
    below 0.5) is summed as a Taylor series; otherwise the exponential is
    divided through by ``Z`` when that is well conditioned and the block
    identity ``exp([[Z, I], [0, 0]]) = [[e^Z, Upsilon(Z)], [0, I]]`` is used
    when it is not.
    """
    Z = as_square(Z)
    n = Z.shape[0]
    I = np.eye(n, dtype=np.result_type(Z, float))
    if n == 0:
        return I
    if spectral_radius(Z) < UPSILON_SERIES_RADIUS and np.linalg.norm(Z, 2) < 1.0:
        out = I.copy()
        term = I.copy()
        for k in range(1, 60):
            term = term @ Z / (k + 1)
            out = out + term
            if np.max(np.abs(term)) <= 1e-17 * np.max(np.abs(out)):
                break
        return out
    if np.linalg.cond(Z) < 1e8:
        return np.linalg.solve(Z, scipy.linalg.expm(Z) - I)
    block = np.zeros((2 * n, 2 * n), dtype=np.result_type(Z, float))
    block[:n, :n] = Z
    block[:n, n:] = np.eye(n)
    return scipy.linalg.expm(block)[:n, n:]

