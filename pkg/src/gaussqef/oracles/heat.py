"""Check ``exp(a q^2 + b p^2) = exp(alpha q^2) exp(beta p^2) exp(alpha q^2)`` on Gaussians.

With ``p = -i d/dq`` the left side applied to ``f(q) = exp(-gamma (q - mu)^2)``
is the time-1 solution of ``psi_t = (a q^2 - b psi_qq)``, which stays of the
form ``sigma exp(-gamma (q - mu)^2)`` with::

    gamma'                  = 4 b gamma^2 - a
    (gamma mu)'             = 4 b gamma^2 mu
    (log sigma - gamma mu^2)' = 2 b gamma (1 - 2 gamma mu^2)

The right side acts in closed form: multiplication by ``exp(alpha q^2)``
shifts ``gamma`` by ``-alpha``, and the backward heat operator
``exp(-beta d^2/dq^2)`` maps ``gamma`` to ``gamma / (1 - 4 beta gamma)``.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import DivergenceError, DomainError

__all__ = ["HeatCheckReport", "heat_sandwich_check", "split_exponents"]

_BLOWUP = 1e8


def split_exponents(a, b):
    """``(alpha, beta)`` of the three-factor split for ``[q, p] = i``."""
    if a < 0 or b < 0:
        raise DomainError("a and b must be nonnegative")
    r = np.sqrt(a * b)
    if r < 1e-8:
        return 0.5 * a * (1 - r * r / 3), b * (1 + 2 * r * r / 3)
    return 0.5 * a * np.tanh(r) / r, b * np.sinh(2 * r) / (2 * r)


@dataclass(frozen=True)
class HeatCheckReport:
    """Parameters ``(gamma, mu, log sigma)`` at ``t = 1`` from both routes."""

    ode: tuple
    closed_form: tuple
    discrepancy: float
    alpha: float
    beta: float


def _gauss_mult(gamma, mu, alpha):
    """``exp(alpha q^2) exp(-gamma (q - mu)^2)``: new ``(gamma, mu)`` and log prefactor."""
    g = gamma - alpha
    return g, gamma * mu / g, alpha * gamma * mu * mu / g


def _closed_form(gamma, mu, alpha, beta):
    g1, m1, c1 = _gauss_mult(gamma, mu, alpha)
    g2 = g1 / (1 - 4 * beta * g1)
    c2 = 0.5 * np.log(g2 / g1)
    g3, m3, c3 = _gauss_mult(g2, m1, alpha)
    return g3, m3, c1 + c2 + c3


def heat_sandwich_check(a, b, gamma, mu, t_steps=1000):
    """Integrate the Gaussian-parameter ODEs to ``t = 1`` and compare with the split.

    Args:
        a, b: nonnegative exponents of ``exp(a q^2 + b p^2)``
        gamma: width of the test function, ``gamma > 0``
        mu: center of the test function
        t_steps: number of classical Runge-Kutta steps, at least 1000

    Returns:
        HeatCheckReport

    Raises:
        DomainError: ``gamma`` violates
            ``alpha / (1 + 4 alpha beta) < gamma - alpha < 1 / (4 beta)``
        DivergenceError: the Riccati solution escapes before ``t = 1``
    """
    if gamma <= 0:
        raise DomainError("gamma must be positive")
    if t_steps < 1000:
        raise DomainError("t_steps must be at least 1000")
    alpha, beta = split_exponents(a, b)
    lower = alpha / (1 + 4 * alpha * beta)
    upper = np.inf if beta == 0 else 1 / (4 * beta)
    if not lower < gamma - alpha < upper:
        raise DomainError(f"gamma - alpha = {gamma - alpha:.6g} outside ({lower:.6g}, {upper:.6g})")
    g1 = gamma - alpha
    if not (g1 > 0 and 1 - 4 * beta * g1 > 0 and g1 / (1 - 4 * beta * g1) - alpha > 0):
        # rounding at the window edge
        raise DomainError("gamma lies on the edge of the admissible window")

    def rhs(y):
        g = y[0]
        m = y[1] / g
        return np.array([4 * b * g * g - a, 4 * b * g * g * m, 2 * b * g * (1 - 2 * g * m * m)])

    h = 1.0 / t_steps
    y = np.array([gamma, gamma * mu, -gamma * mu * mu])
    for _ in range(t_steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not (np.all(np.isfinite(y)) and 0 < y[0] < _BLOWUP):
            raise DivergenceError("Riccati equation for gamma escaped before t = 1")
    g, gm, s = y
    ode = (float(g), float(gm / g), float(s + gm * gm / g))
    closed = tuple(float(v) for v in _closed_form(gamma, mu, alpha, beta))
    discrepancy = max(abs(u - v) for u, v in zip(ode, closed))
    return HeatCheckReport(ode=ode, closed_form=closed, discrepancy=float(discrepancy), alpha=float(alpha), beta=float(beta))
