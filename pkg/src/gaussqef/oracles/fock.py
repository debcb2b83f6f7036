"""Brute-force oracle: position/momentum operators in a truncated Fock basis.

Operators act on ``C^(d^nu)``. Quadratic products are formed from ladder
operators of order ``d + 2`` before truncating, so every matrix element of
``Z_j Z_k`` inside the ``d``-block is exact; the only truncation effects are
those of exponentiating a finite section of an unbounded operator.
"""

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from ..errors import DegeneracyWarning, DimensionError, HeisenbergViolationError, TruncationWarning
from ..matrix_core import diam
from ..williamson import williamson

__all__ = [
    "FockOscillator",
    "FockResult",
    "fock_expectation",
    "gaussian_density",
    "operator_exp",
    "verify_weyl_factorization",
]

MAX_MODES = 2
# Stand-in for -log(zeta)/2 of a pure mode; exp(-2 * 40) is far below double precision.
_PURE_COUPLING = 40.0


def _ladder(d):
    return sp.diags(np.sqrt(np.arange(1, d)), 1, format="csr")


class FockOscillator:
    """``nu`` modes truncated at ``d`` photons each, with ``[q_k, p_j] = i delta_kj``.

    Operators are assembled sparsely and densified only when exponentiated.

    Args:
        modes: number of modes (1 or 2)
        truncation: photons per mode ``d``
        T: optional real ``2nu x 2nu`` matrix expressing the physical variables as
            ``X = T Z`` in terms of ``Z = (q_1, p_1, ...)``; identity by default
        P: optional real covariance of ``X``; enables :attr:`rho`
    """

    def __init__(self, modes, truncation, T=None, P=None):
        if modes < 1 or modes > MAX_MODES:
            raise DimensionError(f"Fock oracle supports 1 or 2 modes, got {modes}")
        if truncation < 2:
            raise DimensionError("truncation must be at least 2")
        self.modes = int(modes)
        self.d = int(truncation)
        self.T = np.eye(2 * modes) if T is None else np.asarray(T, dtype=float)
        if self.T.shape != (2 * modes, 2 * modes):
            raise DimensionError(f"T must be {2 * modes}x{2 * modes}")
        self.P = None if P is None else np.asarray(P, dtype=float)

    @classmethod
    def for_state(cls, state, truncation=None):
        """Oscillator carrying ``state`` in its canonical coordinates."""
        if state.n % 2:
            raise DimensionError("Fock oracle needs an even number of variables")
        modes = state.n // 2
        if truncation is None:
            truncation = 80 if modes == 1 else 30
        return cls(modes, truncation, state.ccr.canonical.T, state.P)

    def resized(self, truncation):
        return FockOscillator(self.modes, truncation, self.T, self.P)

    @property
    def dim(self):
        return self.d**self.modes

    @cached_property
    def _single(self):
        d, D = self.d, self.d + 2
        a = _ladder(D)
        q = (a + a.T) / np.sqrt(2)
        p = (a - a.T) / (1j * np.sqrt(2))
        lin = [q[:d, :d].tocsr(), p[:d, :d].tocsr()]
        quad = [[(x @ y)[:d, :d].tocsr() for y in (q, p)] for x in (q, p)]
        return lin, quad

    def _embed(self, mode, op):
        if self.modes == 1:
            return op
        eye = sp.identity(self.d, format="csr")
        return sp.kron(op, eye, format="csr") if mode == 0 else sp.kron(eye, op, format="csr")

    @cached_property
    def _z_sparse(self):
        lin, _ = self._single
        return [self._embed(m, lin[r]) for m in range(self.modes) for r in (0, 1)]

    @property
    def z_ops(self):
        """Truncated ``(q_1, p_1, ..., q_nu, p_nu)`` as dense matrices."""
        return [z.toarray() for z in self._z_sparse]

    @property
    def x_ops(self):
        """Truncated ``X = T Z`` as dense matrices."""
        Z = self._z_sparse
        return [sum(self.T[a, j] * Z[j] for j in range(len(Z))).toarray() for a in range(len(Z))]

    def _zz(self, j, k):
        mj, rj = divmod(j, 2)
        mk, rk = divmod(k, 2)
        _, quad = self._single
        if mj == mk:
            return self._embed(mj, quad[rj][rk])
        Z = self._z_sparse
        return Z[j] @ Z[k]

    def quadratic_z(self, G):
        """Dense ``sum_jk G_jk Z_j Z_k`` (operator order as written)."""
        G = np.asarray(G)
        out = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        for j in range(G.shape[0]):
            for k in range(G.shape[1]):
                if G[j, k] != 0:
                    out = out + G[j, k] * self._zz(j, k)
        return out.toarray()

    def quadratic(self, C):
        """Dense ``X^T C X`` for ``X = T Z``."""
        return self.quadratic_z(self.T.T @ np.asarray(C) @ self.T)

    def linear(self, u):
        """Dense ``u^T X``."""
        v = self.T.T @ np.asarray(u, dtype=float)
        Z = self._z_sparse
        return sum(v[j] * Z[j] for j in range(len(v))).toarray()

    def safe_mask(self, margin):
        """Basis states whose occupation in every mode is below ``d - margin``."""
        idx = np.arange(self.d) < self.d - margin
        mask = idx
        for _ in range(self.modes - 1):
            mask = np.kron(mask, idx).astype(bool)
        return mask

    def ccr_residual(self, margin=5):
        """Max deviation of ``[q_k, p_j] - i delta_kj`` on the safe block."""
        Z = self._z_sparse
        m = self.safe_mask(margin)
        worst = 0.0
        for k in range(self.modes):
            for j in range(self.modes):
                c = (Z[2 * k] @ Z[2 * j + 1] - Z[2 * j + 1] @ Z[2 * k]).toarray()
                if k == j:
                    c = c - 1j * np.eye(self.dim)
                worst = max(worst, float(np.max(np.abs(c[np.ix_(m, m)]))))
        return worst

    @cached_property
    def rho(self):
        """Density matrix of the zero-mean Gaussian state with covariance ``P``."""
        if self.P is None:
            raise DimensionError("oscillator was built without a covariance")
        return gaussian_density(self, self.P)


def operator_exp(H):
    """Exponential of a truncated operator; Hermitian input goes through ``eigh``."""
    H = np.asarray(H)
    if np.allclose(H, H.conj().T, rtol=0, atol=1e-13 * max(1.0, np.max(np.abs(H)))):
        w, U = np.linalg.eigh((H + H.conj().T) / 2)
        return (U * np.exp(w)) @ U.conj().T
    return scipy.linalg.expm(H)


def gaussian_density(osc, P):
    """Density matrix of the zero-mean Gaussian state with real covariance ``P``.

    In ``Z``-coordinates the covariance ``T^{-1} P T^{-T}`` is symplectically
    thermal: with its Williamson decomposition the state is proportional to
    ``exp(-sum_k c_k (q_k'^2 + p_k'^2))``, ``Z' = V^T Z``,
    ``c_k = log((lam_k + 1/2)/(lam_k - 1/2)) / 2``. The quadratic form
    ``V diag(c) V^T`` does not depend on the Williamson gauge.
    """
    Tinv = np.linalg.inv(osc.T)
    Pz = Tinv @ np.asarray(P, dtype=float) @ Tinv.T
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegeneracyWarning)
        dec = williamson((Pz + Pz.T) / 2)
    lam = dec.lambdas
    if np.any(lam < 0.5 - 1e-9):
        raise HeisenbergViolationError("covariance violates the uncertainty relation", float(np.min(lam) - 0.5))
    excess = np.maximum(lam - 0.5, 0.0)
    pure = excess <= 1e-12
    c = np.where(pure, _PURE_COUPLING, 0.5 * np.log((lam + 0.5) / np.where(pure, 1.0, excess)))
    G = dec.V @ np.diag(np.repeat(c, 2)) @ dec.V.T
    H = osc.quadratic_z(G)
    w, U = np.linalg.eigh((H + H.conj().T) / 2)
    weights = np.exp(-(w - w[0]))
    rho = (U * weights) @ U.conj().T
    return rho / np.trace(rho).real


@dataclass(frozen=True)
class FockResult:
    """Truncated-basis expectation; ``truncation_error`` compares ``d`` with ``d - 10``."""

    value: complex
    truncation_error: float
    truncation: int

    def __complex__(self):
        return self.value


def _expect(osc, factors):
    op = np.eye(osc.dim, dtype=complex)
    for C in factors:
        op = op @ operator_exp(osc.quadratic(C))
    return complex(np.sum(osc.rho * op.T))


def fock_expectation(osc, factors, tol=1e-6, compare=True):
    """``Tr(rho prod_k exp(X^T C_k X))`` in the truncated Fock basis.

    Args:
        osc: :class:`FockOscillator` built with a covariance (see
            :meth:`FockOscillator.for_state`)
        factors: coefficient matrices ``C_k`` (complex allowed), multiplied
            left to right
        tol: a :class:`TruncationWarning` is issued when ``d`` and ``d - 10``
            disagree by more than this
        compare: skip the ``d - 10`` run when False (error reported as nan)

    Returns:
        FockResult
    """
    value = _expect(osc, factors)
    err = float("nan")
    if compare and osc.d > 12:
        err = abs(value - _expect(osc.resized(osc.d - 10), factors))
        if err > tol:
            warnings.warn(f"truncation {osc.d} vs {osc.d - 10} differ by {err:.2e}", TruncationWarning, stacklevel=2)
    return FockResult(value=value, truncation_error=err, truncation=osc.d)


def verify_weyl_factorization(osc, u, theta, margin=None):
    """Spectral-norm residual of ``e^{iu^T X} = e^{(i/2) u^T Theta^diam u} prod_k e^{i u_k X_k}``.

    Evaluated on the block of basis states at least ``margin`` (default ``d/2``)
    below the truncation edge.
    """
    u = np.asarray(u, dtype=float)
    margin = osc.d // 2 if margin is None else margin
    lhs = operator_exp(1j * osc.linear(u))
    rhs = np.exp(0.5j * u @ diam(np.asarray(theta)) @ u) * np.eye(osc.dim, dtype=complex)
    for k, Xk in enumerate(osc.x_ops):
        if u[k] != 0:
            rhs = rhs @ operator_exp(1j * u[k] * Xk)
    m = osc.safe_mask(margin)
    return float(np.linalg.norm((lhs - rhs)[np.ix_(m, m)], 2))
