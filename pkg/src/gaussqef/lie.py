"""Quadratic forms ``X^T C X`` under the CCRs and their complex symplectic images.

The map ``X^T C X  <->  4i Theta C`` is a Lie algebra isomorphism, so
``exp(X^T A X) exp(X^T B X) = exp(X^T E X)`` with
``E = (4i Theta)^{-1} log(exp(4i Theta A) exp(4i Theta B))``. Products are
formed through the principal matrix logarithm rather than the Dynkin series.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .ccr import BJ, CcrMatrix, validate
from .errors import BranchRiskWarning, ConjugationSymmetryError, DimensionError, DomainError, SingularCCRError
from .matrix_core import matrix_exp, principal_log, require_symmetric, symmetrize

__all__ = [
    "E1",
    "E2",
    "Factorization2x2",
    "ProductResult",
    "SymplecticImage",
    "antisymmetric_trace_constant",
    "dynkin_product",
    "exp_map",
    "factorize_2x2",
    "generator",
    "log_to_quadratic",
    "product_chain",
    "quad_commutator",
    "symmetric_sandwich",
]

E1 = np.array([[1.0, 0.0], [0.0, 0.0]])
E2 = np.array([[0.0, 0.0], [0.0, 1.0]])

# Principal-log guard: sum of ||4i Theta C_k||_2 below pi.
BRANCH_GUARD = np.pi


def _ccr(ccr):
    return ccr if isinstance(ccr, CcrMatrix) else validate(ccr)


def _coef(C, ccr, name):
    C = require_symmetric(np.asarray(C), name)
    if C.shape != ccr.theta.shape:
        raise DimensionError(f"{name} has shape {C.shape}, CCR matrix has shape {ccr.theta.shape}")
    return C


def _nonsingular(ccr):
    if ccr.singular:
        raise SingularCCRError("the symplectic correspondence needs a nonsingular CCR matrix")


def generator(C, ccr):
    """Complex Hamiltonian matrix ``4i Theta C``."""
    ccr = _ccr(ccr)
    return 4j * ccr.theta @ np.asarray(C)


def quad_commutator(A, B, ccr):
    """Coefficient ``C = 4i(A Theta B - B Theta A)`` of ``[X^T A X, X^T B X] = X^T C X``."""
    ccr = _ccr(ccr)
    A = _coef(A, ccr, "A")
    B = _coef(B, ccr, "B")
    th = ccr.theta
    return 4j * (A @ th @ B - B @ th @ A)


def antisymmetric_trace_constant(C, ccr):
    """Scalar ``-i Tr(C Theta)`` to which ``X^T C X`` reduces for antisymmetric ``C``."""
    ccr = _ccr(ccr)
    C = require_symmetric(np.asarray(C), "C", anti=True)
    if C.shape != ccr.theta.shape:
        raise DimensionError(f"C has shape {C.shape}, CCR matrix has shape {ccr.theta.shape}")
    return complex(-1j * np.trace(C @ ccr.theta))


@dataclass(frozen=True)
class SymplecticImage:
    """``S = exp(4i Theta C)`` with ``residual = max|S Theta S^T - Theta|``."""

    S: np.ndarray
    residual: float


def exp_map(C, ccr):
    ccr = _ccr(ccr)
    C = _coef(C, ccr, "C")
    S = matrix_exp(4j * ccr.theta @ C)
    residual = float(np.max(np.abs(S @ ccr.theta @ S.T - ccr.theta), initial=0.0))
    return SymplecticImage(S=S, residual=residual)


@dataclass(frozen=True)
class ProductResult:
    """Coefficient ``E`` of a product of quadratic exponentials.

    Attributes:
        E: complex symmetric (or real symmetric, for sandwiches) coefficient
        asymmetry: ``max|E - E^T|`` before symmetrization
        exp_residual: ``max|exp(4i Theta E) - S| / max(1, max|S|)``
        branch_risk: the norm guard for the principal logarithm was exceeded
        imag_residual: discarded imaginary part (sandwiches only)
    """

    E: np.ndarray
    asymmetry: float
    exp_residual: float
    branch_risk: bool
    imag_residual: float = 0.0


def log_to_quadratic(S, ccr):
    """``(4i Theta)^{-1} log S`` symmetrized; returns ``(E, asymmetry)``."""
    ccr = _ccr(ccr)
    _nonsingular(ccr)
    G = principal_log(S)
    E = np.linalg.solve(4j * ccr.theta, G)
    return symmetrize(E)


def _product(S, ccr, guard_norm):
    E, asym = log_to_quadratic(S, ccr)
    back = matrix_exp(4j * ccr.theta @ E)
    residual = float(np.max(np.abs(back - S)) / max(1.0, np.max(np.abs(S))))
    risky = guard_norm >= BRANCH_GUARD
    if risky:
        warnings.warn(
            f"generator norms sum to {guard_norm:.3g} >= pi; principal logarithm may leave the product branch",
            BranchRiskWarning,
            stacklevel=3,
        )
    return E, asym, residual, risky


def product_chain(Cs, ccr):
    """Coefficient ``E`` with ``prod_k exp(X^T C_k X) = exp(X^T E X)`` (rightward product)."""
    ccr = _ccr(ccr)
    _nonsingular(ccr)
    Cs = [_coef(C, ccr, f"C[{k}]") for k, C in enumerate(Cs)]
    if not Cs:
        raise DimensionError("product_chain needs at least one factor")
    n = ccr.order
    S = np.eye(n, dtype=complex)
    guard = 0.0
    for C in Cs:
        G = 4j * ccr.theta @ C
        guard += np.linalg.norm(G, 2)
        S = S @ matrix_exp(G)
    E, asym, residual, risky = _product(S, ccr, guard)
    return ProductResult(E=E, asymmetry=asym, exp_residual=residual, branch_risk=risky)


def dynkin_product(A, B, ccr):
    """Coefficient ``E`` with ``exp(X^T A X) exp(X^T B X) = exp(X^T E X)``."""
    return product_chain([A, B], ccr)


def symmetric_sandwich(C0, Cs, ccr, tol=1e-9):
    """Real symmetric ``E`` of ``(C_N ... C_1) C_0 (C_1 ... C_N)`` sandwiches.

    ``exp(4i Theta E) = E(C_N)...E(C_1) E(C_0) E(C_1)...E(C_N)``. For real
    symmetric inputs ``E`` is real; an imaginary part above ``tol`` signals
    branch trouble and raises.

    Raises:
        ConjugationSymmetryError: ``max|Im E| > tol``
    """
    ccr = _ccr(ccr)
    _nonsingular(ccr)
    C0 = _coef(C0, ccr, "C0")
    Cs = [_coef(C, ccr, f"Cs[{k}]") for k, C in enumerate(Cs)]
    for k, C in enumerate([C0, *Cs]):
        if np.iscomplexobj(C) and np.max(np.abs(C.imag), initial=0.0) > 0:
            raise DomainError(f"symmetric_sandwich needs real coefficients (factor {k})")
    th = ccr.theta
    S = matrix_exp(4j * th @ C0)
    guard = np.linalg.norm(4 * th @ C0, 2)
    for C in Cs:
        side = matrix_exp(4j * th @ C)
        S = side @ S @ side
        guard += 2 * np.linalg.norm(4 * th @ C, 2)
    E, asym, residual, risky = _product(S, ccr, guard)
    imag = float(np.max(np.abs(E.imag), initial=0.0))
    if imag > tol:
        raise ConjugationSymmetryError(f"sandwich coefficient has imaginary part {imag:.3e} > {tol:.1e}")
    return ProductResult(E=E.real, asymmetry=asym, exp_residual=residual, branch_risk=risky, imag_residual=imag)


@dataclass(frozen=True)
class Factorization2x2:
    """``E(alpha E1) E(beta E2) E(alpha E1) = E(diag(a, b))`` for ``Theta = theta bJ``.

    ``residual`` is the max-entry mismatch relative to ``max(1, max|E(diag(a,b))|)``.
    """

    alpha: float
    beta: float
    residual: float


def _tanhc(x):
    return np.tanh(x) / x if abs(x) > 1e-8 else 1.0 - x * x / 3


def _sinhc(x):
    return np.sinh(x) / x if abs(x) > 1e-8 else 1.0 + x * x / 6


def factorize_2x2(a, b, theta):
    """Split ``exp(X^T diag(a, b) X)`` into ``exp(alpha X1^2) exp(beta X2^2) exp(alpha X1^2)``.

    ``alpha = tanh(2 theta sqrt(ab)) sqrt(a/b) / (4 theta)``,
    ``beta = sinh(4 theta sqrt(ab)) sqrt(b/a) / (4 theta)``; evaluated in the
    equivalent forms ``(a/2) tanhc(2 theta r)`` and ``b sinhc(4 theta r)``,
    ``r = sqrt(ab)``, which are regular as ``a`` or ``b`` go to zero.

    Raises:
        DomainError: ``a`` or ``b`` negative, or ``theta == 0``
    """
    if a < 0 or b < 0:
        raise DomainError(f"a and b must be nonnegative, got a={a}, b={b}")
    if theta == 0:
        raise DomainError("theta must be nonzero")
    r = np.sqrt(a * b)
    alpha = 0.5 * a * _tanhc(2 * theta * r)
    beta = b * _sinhc(4 * theta * r)
    ccr = validate(theta * BJ)
    lhs = exp_map(alpha * E1, ccr).S @ exp_map(beta * E2, ccr).S @ exp_map(alpha * E1, ccr).S
    rhs = exp_map(np.diag([a, b]), ccr).S
    residual = float(np.max(np.abs(lhs - rhs)) / max(1.0, np.max(np.abs(rhs))))
    return Factorization2x2(alpha=float(alpha), beta=float(beta), residual=residual)
