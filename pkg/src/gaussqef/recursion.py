"""Recursive weights ``Pi_N`` turning multiplicative costs into single exponentials.

For a process ``(X_0, X_1, ...)`` with block CCR matrix ``Theta_N`` the
sandwich ``Q_N = e^{X^T C_N X} Q_{N-1} e^{X^T C_N X}`` (``Q_0 = e^{X_0^T C_0 X_0}``)
equals ``E_N = e^{X^T Pi_N X}`` when::

    exp(4i Theta_N Pi_N) = exp(4i Theta_N C_N) M_N exp(4i Theta_N C_N)
    M_N = [[exp(Z), 0], [4i sigma_N Pi_{N-1} Upsilon(Z), I]],  Z = 4i Theta_{N-1} Pi_{N-1}

``M_N`` is the exponential of ``4i Theta_N blockdiag(Pi_{N-1}, 0)`` written
in closed form, so no dense exponential of the grown matrix is needed.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .ccr import assemble_process
from .errors import BranchRiskWarning, ConjugationSymmetryError, DimensionError, SingularCCRError
from .lie import BRANCH_GUARD, log_to_quadratic
from .matrix_core import matrix_exp, require_symmetric, upsilon

__all__ = ["MAX_HORIZON", "RecursionState", "initialize", "run", "step_current", "step_general"]

MAX_HORIZON = 64


@dataclass(frozen=True, eq=False)
class RecursionState:
    """Value object for one horizon ``N``.

    Attributes:
        N: horizon index
        Pi: real symmetric ``(N+1)n`` weight of ``E_N``
        process: :class:`~gaussqef.ccr.ProcessCcr` holding ``Theta_N``
        S: cached ``exp(4i Theta_N Pi_N)`` (the exact three-factor product)
        imag_residual: imaginary part discarded when realifying ``Pi_N``
        asymmetry: asymmetry removed when symmetrizing ``Pi_N``
        guard: accumulated ``||4 Theta_N C_k||_2`` over all factors
    """

    N: int
    Pi: np.ndarray
    process: object
    S: np.ndarray = field(repr=False)
    imag_residual: float = 0.0
    asymmetry: float = 0.0
    guard: float = 0.0

    @property
    def n(self):
        return self.process.n

    @property
    def theta(self):
        return self.process.assembled

    @property
    def branch_risk(self):
        return self.guard >= BRANCH_GUARD

    def symplectic_residual(self):
        """``max|S Theta S^T - Theta|`` for ``S = exp(4i Theta_N Pi_N)``."""
        th = self.theta
        S = matrix_exp(4j * th @ self.Pi)
        return float(np.max(np.abs(S @ th @ S.T - th)))


def initialize(C0, theta0):
    """Horizon 0: ``Pi_0 = C_0``."""
    proc = assemble_process(theta0)
    C0 = require_symmetric(np.asarray(C0, dtype=float), "C0")
    if C0.shape != proc.assembled.shape:
        raise DimensionError(f"C0 must be {proc.assembled.shape}, got {C0.shape}")
    th = proc.assembled
    return RecursionState(
        N=0,
        Pi=C0,
        process=proc,
        S=matrix_exp(4j * th @ C0),
        guard=float(np.linalg.norm(4 * th @ C0, 2)),
    )


def _middle(state, sigma):
    """Closed form of ``exp(4i Theta_N blockdiag(Pi_{N-1}, 0))``."""
    size = state.Pi.shape[0]
    n = state.n
    Z = 4j * state.theta @ state.Pi
    out = np.zeros((size + n, size + n), dtype=complex)
    out[:size, :size] = state.S
    out[size:, :size] = 4j * sigma @ state.Pi @ upsilon(Z)
    out[size:, size:] = np.eye(n)
    return out


def _finish(state, proc, outer, guard_add, tol):
    ccr = proc.ccr()
    if ccr.singular:
        raise SingularCCRError(f"Theta_{state.N + 1} is singular")
    rhs = outer @ _middle(state, proc.blocks[-1][0]) @ outer
    E, asym = log_to_quadratic(rhs, ccr)
    imag = float(np.max(np.abs(E.imag)))
    scale = max(1.0, float(np.max(np.abs(E.real))))
    if imag > tol * scale:
        raise ConjugationSymmetryError(f"Pi_{state.N + 1} has imaginary part {imag:.3e}")
    guard = state.guard + guard_add
    if guard >= BRANCH_GUARD:
        warnings.warn(f"accumulated weight norm {guard:.3g} >= pi; Pi_N may be off the principal branch", BranchRiskWarning, stacklevel=3)
    return RecursionState(
        N=state.N + 1,
        Pi=E.real,
        process=proc,
        S=rhs,
        imag_residual=imag,
        asymmetry=asym,
        guard=guard,
    )


def _check_horizon(state, max_horizon):
    if state.N + 1 > max_horizon:
        raise DimensionError(f"horizon cap {max_horizon} reached")


def step_general(state, C, sigma, theta, tol=1e-8, max_horizon=MAX_HORIZON):
    """Advance with a general real symmetric weight ``C`` of order ``(N+1)n``."""
    _check_horizon(state, max_horizon)
    proc = state.process.extend(sigma, theta)
    th = proc.assembled
    C = require_symmetric(np.asarray(C, dtype=float), "C")
    if C.shape != th.shape:
        raise DimensionError(f"C must be {th.shape}, got {C.shape}")
    G = 4j * th @ C
    return _finish(state, proc, matrix_exp(G), 2 * np.linalg.norm(G, 2), tol)


def step_current(state, D, sigma, theta, tol=1e-8, max_horizon=MAX_HORIZON):
    """Advance with a weight ``D`` on the current variable ``X_N`` only.

    Equivalent to :func:`step_general` with ``C = blockdiag(0, D)``; the outer
    factor is ``[[I, -4i sigma^T D Upsilon(4i theta D)], [0, exp(4i theta D)]]``.
    """
    _check_horizon(state, max_horizon)
    proc = state.process.extend(sigma, theta)
    n = state.n
    D = require_symmetric(np.asarray(D, dtype=float), "D")
    if D.shape != (n, n):
        raise DimensionError(f"D must be {(n, n)}, got {D.shape}")
    sigma, theta_n = proc.blocks[-1]
    size = state.Pi.shape[0]
    A = 4j * theta_n @ D
    outer = np.zeros((size + n, size + n), dtype=complex)
    outer[:size, :size] = np.eye(size)
    outer[:size, size:] = -4j * sigma.T @ D @ upsilon(A)
    outer[size:, size:] = matrix_exp(A)
    guard_add = 2 * np.linalg.norm(4 * proc.assembled[:, size:] @ D, 2)
    return _finish(state, proc, outer, guard_add, tol)


def run(theta0, weights, tol=1e-8, max_horizon=MAX_HORIZON):
    """Run a whole recursion.

    Args:
        theta0: CCR matrix of ``X_0``
        weights: sequence of dicts; entry 0 holds ``C`` (or ``D``), entry
            ``k >= 1`` holds ``sigma``, ``theta`` and either ``C`` or ``D``

    Returns:
        list of :class:`RecursionState`, one per horizon
    """
    weights = list(weights)
    if not weights:
        raise DimensionError("at least the initial weight is required")
    first = weights[0]
    states = [initialize(first["C"] if "C" in first else first["D"], theta0)]
    for w in weights[1:]:
        if "C" in w:
            nxt = step_general(states[-1], w["C"], w["sigma"], w["theta"], tol, max_horizon)
        else:
            nxt = step_current(states[-1], w["D"], w["sigma"], w["theta"], tol, max_horizon)
        states.append(nxt)
    return states
