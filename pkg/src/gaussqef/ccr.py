"""CCR matrices: validation, canonical form ``Theta = T J T^T``, process assembly."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import DimensionError, MalformedCCRError, SingularCCRError
from .matrix_core import as_square, default_tol

__all__ = [
    "BJ",
    "CcrCanonicalization",
    "CcrMatrix",
    "ProcessCcr",
    "assemble_process",
    "canonical_j",
    "canonicalize",
    "validate",
]

BJ = np.array([[0.0, 1.0], [-1.0, 0.0]])


def canonical_j(nu):
    """``J = (I_nu kron bJ) / 2``: CCR matrix of ``nu`` position-momentum pairs."""
    return 0.5 * np.kron(np.eye(nu), BJ)


@dataclass(frozen=True, eq=False)
class CcrMatrix:
    """Real antisymmetric commutator matrix ``Theta`` with ``[X, X^T] = 2i Theta``.

    Build through :func:`validate`. The canonical form is computed lazily and
    cached on first access of :attr:`canonical`.
    """

    theta: np.ndarray
    singular: bool
    tol: float

    @property
    def order(self):
        return self.theta.shape[0]

    @cached_property
    def canonical(self):
        return canonicalize(self)

    def scaled(self, eps):
        return validate(eps * self.theta)


def validate(theta, tol=None):
    """Certify antisymmetry of a real square matrix and flag singularity.

    Raises:
        MalformedCCRError: input not real, or antisymmetry residual above ``tol``
    """
    theta = as_square(theta, "theta")
    if np.iscomplexobj(theta):
        if np.max(np.abs(theta.imag), initial=0.0) > 0:
            raise MalformedCCRError("CCR matrix must be real")
        theta = theta.real
    theta = theta.astype(float)
    tol = default_tol(theta) if tol is None else tol
    residual = np.max(np.abs(theta + theta.T), initial=0.0)
    if residual > tol:
        raise MalformedCCRError(f"CCR matrix is not antisymmetric: residual {residual:.3e} > {tol:.3e}")
    theta = (theta - theta.T) / 2
    n = theta.shape[0]
    if n == 0 or n % 2:
        singular = True
    else:
        sv = np.linalg.svd(theta, compute_uv=False)
        singular = bool(sv[-1] <= 1e-12 * max(sv[0], 1.0))
    theta.setflags(write=False)
    return CcrMatrix(theta=theta, singular=singular, tol=tol)


@dataclass(frozen=True)
class CcrCanonicalization:
    """``Theta = T J T^T`` with ``J = (I_nu kron bJ)/2``.

    Attributes:
        T: real invertible matrix
        nu: number of canonical pairs
        blocks: the positive 2x2 block magnitudes ``theta_k`` (descending)
        residual: ``max|Theta - T J T^T|``
    """

    T: np.ndarray
    nu: int
    blocks: np.ndarray
    residual: float

    @property
    def J(self):
        return canonical_j(self.nu)

    @cached_property
    def T_inv(self):
        return np.linalg.inv(self.T)


def canonicalize(ccr):
    """Reduce a nonsingular CCR matrix to canonical form.

    Uses the real Schur form of the antisymmetric matrix: ``Theta = Q B Q^T``
    with ``B`` block diagonal, blocks ``theta_k * bJ`` (``theta_k > 0``), which
    gives ``T = Q blockdiag(sqrt(2 theta_k) I_2)``. Blocks are sorted by
    descending ``theta_k``; ties keep their Schur order.

    Raises:
        DimensionError: odd order
        SingularCCRError: ``Theta`` singular
    """
    if not isinstance(ccr, CcrMatrix):
        ccr = validate(ccr)
    theta = ccr.theta
    n = ccr.order
    if n == 0 or n % 2:
        raise DimensionError(f"canonical form needs an even order, got {n}")
    if ccr.singular:
        raise SingularCCRError("canonical form requires a nonsingular CCR matrix")
    nu = n // 2

    B, Q = scipy.linalg.schur(theta, output="real")
    Q = Q.copy()
    mags = np.empty(nu)
    for k in range(nu):
        j = 2 * k
        b = 0.5 * (B[j, j + 1] - B[j + 1, j])
        if b < 0:
            Q[:, [j, j + 1]] = Q[:, [j + 1, j]]
            b = -b
        mags[k] = b
    order = np.argsort(-mags, kind="stable")
    perm = np.concatenate([[2 * k, 2 * k + 1] for k in order])
    Q = Q[:, perm]
    mags = mags[order]

    T = Q * np.repeat(np.sqrt(2.0 * mags), 2)
    residual = float(np.max(np.abs(theta - T @ canonical_j(nu) @ T.T)))
    scale = max(np.max(np.abs(theta)), 1.0)
    if residual > 1e-9 * scale:
        raise SingularCCRError(f"canonicalization residual {residual:.3e} too large")
    T.setflags(write=False)
    return CcrCanonicalization(T=T, nu=nu, blocks=mags, residual=residual)


@dataclass(frozen=True)
class ProcessCcr:
    """Block CCR matrix ``Theta_N`` of ``(X_0, ..., X_N)`` built step by step.

    ``blocks[0]`` is ``theta_0``; ``blocks[k]`` for ``k >= 1`` is ``(sigma_k, theta_k)``.
    """

    n: int
    blocks: tuple
    assembled: np.ndarray = field(repr=False)

    @property
    def N(self):
        return len(self.blocks) - 1

    def extend(self, sigma, theta):
        sigma = np.asarray(sigma, dtype=float)
        theta = _block_theta(theta, self.n)
        size = self.assembled.shape[0]
        if sigma.shape != (self.n, size):
            raise DimensionError(f"sigma must have shape {(self.n, size)}, got {sigma.shape}")
        out = np.zeros((size + self.n, size + self.n))
        out[:size, :size] = self.assembled
        out[:size, size:] = -sigma.T
        out[size:, :size] = sigma
        out[size:, size:] = theta
        out.setflags(write=False)
        return ProcessCcr(n=self.n, blocks=self.blocks + ((sigma, theta),), assembled=out)

    def ccr(self):
        return validate(self.assembled)


def _block_theta(theta, n=None):
    theta = validate(theta).theta
    if n is not None and theta.shape != (n, n):
        raise DimensionError(f"theta block must be {n}x{n}, got {theta.shape}")
    return theta


def assemble_process(theta0, blocks=()):
    """Assemble ``Theta_N = [[Theta_{N-1}, -sigma_N^T], [sigma_N, theta_N]]``.

    Args:
        theta0: antisymmetric ``n x n`` CCR matrix of ``X_0``
        blocks: iterable of ``(sigma_k, theta_k)`` with ``sigma_k`` of shape
            ``n x k n`` and ``theta_k`` antisymmetric ``n x n``
    """
    theta0 = _block_theta(theta0)
    proc = ProcessCcr(n=theta0.shape[0], blocks=(theta0,), assembled=theta0)
    for sigma, theta in blocks:
        proc = proc.extend(sigma, theta)
    return proc
