"""Random generators shared by the test modules."""

import numpy as np
import scipy.linalg

from gaussqef.ccr import BJ, canonical_j, validate
from gaussqef.state import admissible

HALF_BJ = 0.5 * BJ


def random_theta(rng, n):
    """Nonsingular antisymmetric matrix ``T J T^T`` with a well-conditioned ``T``."""
    T = np.eye(n) + 0.4 * rng.standard_normal((n, n))
    return T @ canonical_j(n // 2) @ T.T, T


def random_symplectic(rng, nu, scale=0.3):
    """``exp(J H)`` for a random symmetric ``H``; preserves ``J``."""
    H = rng.standard_normal((2 * nu, 2 * nu)) * scale
    return scipy.linalg.expm(canonical_j(nu) @ (H + H.T))


def random_state(rng, n, excess=1.0):
    """Admissible Gaussian state over a random CCR matrix.

    ``P = T W diag(lam) W^T T^T`` with ``W`` symplectic and ``lam >= 1/2``.
    """
    theta, T = random_theta(rng, n)
    nu = n // 2
    W = random_symplectic(rng, nu)
    lam = 0.5 + excess * rng.random(nu)
    Pz = W @ np.diag(np.repeat(lam, 2)) @ W.T
    P = T @ Pz @ T.T
    return admissible((P + P.T) / 2, validate(theta))


def random_symmetric(rng, n, scale=1.0):
    A = rng.standard_normal((n, n)) * scale
    return (A + A.T) / 2


def random_pd(rng, n, scale=1.0):
    A = rng.standard_normal((n, n))
    return scale * (A @ A.T / n + 0.2 * np.eye(n))
