"""Quadratic-exponential functional ``Xi = E exp(X^T Pi X)`` of a Gaussian state.

Pipeline: canonicalize ``Theta = T J T^T``; symplectically diagonalize
``T^T Pi T``; split every mode factor ``exp(lam (q^2 + p^2))`` into
``exp(a q^2) exp(b p^2) exp(a q^2)``; randomize the three exponents with
independent classical Gaussians. The result is a Gaussian integral::

    Xi = det(I - Mho L^diam)^(-1/2)

with ``L`` the quantum covariance of the tripled vector ``(q1, p1, q1, ...)``
and ``Mho = 2 blockdiag(a_k, b_k, a_k)`` the classical covariance.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .ccr import CcrCanonicalization, canonical_j
from .errors import DimensionError, InfeasibleError, NotPositiveDefiniteError
from .matrix_core import diam, require_symmetric, spectral_radius
from .state import GaussianState
from .williamson import WilliamsonDecomposition, williamson

__all__ = [
    "QefIntermediates",
    "QefProblem",
    "QefReport",
    "classical_limit",
    "compute_qef",
    "qef_intermediates",
    "risk_sweep",
    "sufficient_condition",
    "triple_matrix",
]

_TRIPLE = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])


def triple_matrix(nu):
    """Binary ``3nu x 2nu`` matrix mapping ``(q_k, p_k)`` to ``(q_k, p_k, q_k)``."""
    return np.kron(np.eye(nu), _TRIPLE)


@dataclass(frozen=True, eq=False)
class QefProblem:
    """State, weight matrix ``Pi > 0`` and risk multiplier (``Pi -> risk * Pi``)."""

    state: GaussianState
    Pi: np.ndarray
    risk: float = 1.0

    def __post_init__(self):
        Pi = require_symmetric(np.asarray(self.Pi, dtype=float), "Pi")
        if Pi.shape != self.state.P.shape:
            raise DimensionError(f"Pi has shape {Pi.shape}, expected {self.state.P.shape}")
        if not self.risk > 0:
            raise NotPositiveDefiniteError(f"risk multiplier must be positive, got {self.risk}")
        if np.linalg.eigvalsh(Pi)[0] <= 0:
            raise NotPositiveDefiniteError("Pi must be positive definite")
        object.__setattr__(self, "Pi", Pi)

    @property
    def weight(self):
        """Effective weight ``risk * Pi``."""
        return self.risk * self.Pi

    def scaled(self, risk):
        return replace(self, risk=risk)


@dataclass(frozen=True)
class QefIntermediates:
    T: np.ndarray
    V: np.ndarray
    lambdas: np.ndarray
    F: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray
    L: np.ndarray
    mho: np.ndarray  # diagonal of the classical covariance, length 3 nu

    @property
    def Omega_mho(self):
        return np.diag(self.mho)


@dataclass(frozen=True)
class QefReport:
    """Result of :func:`compute_qef`.

    ``xi`` is the analytic expression; it is only a moment of the state when
    ``feasible`` holds. ``spectral_radius`` is that of ``Mho Re L``;
    ``spectral_radius_abs`` that of the entrywise modulus ``|Mho L^diam|``,
    exposed for inspection only.
    """

    xi: complex
    feasible: bool
    sufficient_condition: bool
    sufficient_margin: float
    spectral_radius: float
    spectral_radius_abs: float
    classical_limit: float | None
    lambdas: np.ndarray
    branch_ok: bool
    intermediates: QefIntermediates = field(repr=False)

    @property
    def trusted(self):
        return self.feasible and self.branch_ok and bool(np.isfinite(self.xi))

    @property
    def imag_residual(self):
        return abs(self.xi.imag) / max(abs(self.xi), 1e-300)


def qef_intermediates(problem, canonical=None, decomposition=None):
    """Matrices of the pipeline.

    Args:
        canonical: optional :class:`CcrCanonicalization` or bare ``T`` replacing
            the default canonical form (any ``T`` with ``Theta = T J T^T``)
        decomposition: optional :class:`WilliamsonDecomposition` of ``T^T Pi T``
            replacing the default one
    """
    state = problem.state
    if canonical is None:
        T = state.ccr.canonical.T
    elif isinstance(canonical, CcrCanonicalization):
        T = canonical.T
    else:
        T = np.asarray(canonical, dtype=float)
    nu = T.shape[0] // 2
    J = canonical_j(nu)
    if decomposition is None:
        M = T.T @ problem.weight @ T
        decomposition = williamson((M + M.T) / 2)
    elif not isinstance(decomposition, WilliamsonDecomposition):
        raise TypeError("decomposition must be a WilliamsonDecomposition")
    V, lambdas = decomposition.V, decomposition.lambdas

    alphas = 0.5 * np.tanh(lambdas)
    betas = 0.5 * np.sinh(2.0 * lambdas)
    mho = 2.0 * np.column_stack([alphas, betas, alphas]).reshape(-1)
    F = triple_matrix(nu)
    W = F @ np.linalg.solve(T @ V, np.eye(2 * nu))
    L = W @ state.P @ W.T + 1j * (F @ J @ F.T)
    return QefIntermediates(T=T, V=V, lambdas=lambdas, F=F, alphas=alphas, betas=betas, L=L, mho=mho)


def _xi_from(inter):
    """``det(I - Mho L^diam)^(-1/2)`` on the branch continuous along ``t Mho``.

    ``det(I - t Mho L) = prod(1 - t kappa_j)``; each factor moves on a segment
    from 1, so the product of principal roots is continuous unless a segment
    ends on the closed negative real axis (then ``branch_ok`` is False).
    """
    Ld = diam(inter.L)
    kappa = np.linalg.eigvals(inter.mho[:, None] * Ld)
    w = 1.0 - kappa
    branch_ok = not np.any((w.real <= 0) & (np.abs(w.imag) <= 1e-12 * np.maximum(np.abs(w), 1.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = complex(np.exp(-0.5 * np.sum(np.log(w.astype(complex)))))
    return xi, branch_ok, Ld


def _feasibility_radius(inter):
    root = np.sqrt(inter.mho)
    S = root[:, None] * inter.L.real * root[None, :]
    return float(np.max(np.linalg.eigvalsh((S + S.T) / 2)))


def sufficient_condition(problem, lambdas=None):
    """``rho(P Pi) max_k sinh(2 lam_k)/lam_k < 1``; returns ``(holds, margin)``.

    ``margin`` is the left-hand side.
    """
    if lambdas is None:
        T = problem.state.ccr.canonical.T
        lambdas = williamson(T.T @ problem.weight @ T).lambdas
    lambdas = np.asarray(lambdas, dtype=float)
    x = 2.0 * lambdas
    safe = np.where(x > 1e-6, x, 1.0)
    # sinh(x)/x, series below 1e-6
    sinhc = np.where(x > 1e-6, np.sinh(safe) / safe, 1.0 + x**2 / 6)
    margin = spectral_radius(problem.state.P @ problem.weight) * float(np.max(2.0 * sinhc))
    return bool(margin < 1.0), margin


def _classical_value(problem):
    PPi = problem.state.P @ problem.weight
    if spectral_radius(2.0 * PPi) >= 1.0:
        return None
    sign, logdet = np.linalg.slogdet(np.eye(PPi.shape[0]) - 2.0 * PPi)
    return float(np.exp(-0.5 * logdet)) if sign > 0 else None


def classical_limit(problem):
    """``det(I - 2 P Pi)^(-1/2)``, the commuting-variable value of ``Xi``.

    Raises:
        InfeasibleError: ``rho(2 P Pi) >= 1``
    """
    value = _classical_value(problem)
    if value is None:
        raise InfeasibleError("classical moment diverges: spectral radius of 2 P Pi is at least 1")
    return value


def compute_qef(problem, canonical=None, decomposition=None):
    """Evaluate ``Xi`` with feasibility diagnostics.

    Infeasible problems are not an error: the analytic expression is still
    returned, with ``feasible=False`` marking it untrusted.
    """
    inter = qef_intermediates(problem, canonical, decomposition)
    xi, branch_ok, Ld = _xi_from(inter)
    holds, margin = sufficient_condition(problem, inter.lambdas)
    radius = _feasibility_radius(inter)
    return QefReport(
        xi=xi,
        feasible=radius < 1.0,
        sufficient_condition=holds,
        sufficient_margin=margin,
        spectral_radius=radius,
        spectral_radius_abs=spectral_radius(np.abs(inter.mho[:, None] * Ld)),
        classical_limit=_classical_value(problem),
        lambdas=inter.lambdas,
        branch_ok=branch_ok,
        intermediates=inter,
    )


def risk_sweep(problem, grid):
    """Reports for ``Pi -> r Pi`` over a grid of risk multipliers ``r``."""
    return [compute_qef(problem.scaled(float(r))) for r in grid]
