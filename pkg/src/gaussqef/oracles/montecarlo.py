"""Monte Carlo oracles: randomize quadratic exponents with classical Gaussians.

``exp(-x^2 / 2) = E_c exp(i u x)`` for ``u ~ N(0, 1)``, and a quadratic
exponential ``exp(a x^2)`` is ``E_c exp(sqrt(2a) u x)``. Averaging over ``u``
the closed-form characteristic or moment-generating function of the
Gaussian state gives unbiased estimators of the moments.

Samples are drawn in fixed-size chunks; chunk ``j`` uses
``Philox(key=seed).jumped(j)``, so results are identical for any number of
workers.
"""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, InfeasibleError
from ..matrix_core import diam
from ..qef import compute_qef

__all__ = ["CHUNK", "McEstimate", "mc_product_moment", "mc_qef", "mc_single_variable"]

CHUNK = 1 << 16
_SEED_LIMIT = 1 << 64


@dataclass(frozen=True)
class McEstimate:
    """Sample mean with standard error ``std / sqrt(samples)``.

    ``rejected`` counts non-finite samples that were dropped.
    """

    mean: complex
    std_error: float
    samples: int
    seed: int
    rejected: int = 0

    def covers(self, value, k=3.0):
        """True when ``value`` lies within ``k`` standard errors of the mean."""
        return abs(self.mean - value) <= k * self.std_error


def _chunk_sums(seed, index, size, scale, integrand):
    rng = np.random.Generator(np.random.Philox(key=seed).jumped(index))
    x = rng.standard_normal((size, scale.shape[0])) * scale
    vals = integrand(x)
    ok = np.isfinite(vals)
    good = vals[ok]
    return complex(np.sum(good)), float(np.sum(np.abs(good) ** 2)), int(good.size), int(size - good.size)


def _estimate(integrand, scale, samples, seed, workers):
    if samples < 2:
        raise DomainError("at least two samples are required")
    if not 0 <= seed < _SEED_LIMIT:
        raise DomainError("seed must be an unsigned 64-bit integer")
    scale = np.asarray(scale, dtype=float)
    sizes = [CHUNK] * (samples // CHUNK)
    if samples % CHUNK:
        sizes.append(samples % CHUNK)

    def job(j):
        return _chunk_sums(seed, j, sizes[j], scale, integrand)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    else:
        parts = [job(j) for j in range(len(sizes))]

    total, sq, count, rejected = 0j, 0.0, 0, 0
    for s, q, c, r in parts:
        total += s
        sq += q
        count += c
        rejected += r
    if count < 2:
        raise DomainError("all samples were rejected as non-finite")
    mean = total / count
    var = max(sq - count * abs(mean) ** 2, 0.0) / (count - 1)
    return McEstimate(mean=complex(mean), std_error=float(np.sqrt(var / count)), samples=count, seed=seed, rejected=rejected)


def mc_single_variable(Sigma2, sigma2, samples=100_000, seed=0, workers=None):
    """Estimate ``E exp(-sigma2 xi^2 / 2)`` for a Gaussian quantum variable of variance ``Sigma2``.

    Averages ``exp(-Sigma2 w^2 / 2)`` over ``w ~ N(0, sigma2)``.
    """
    if Sigma2 < 0 or sigma2 < 0:
        raise DomainError("variances must be nonnegative")
    return _estimate(lambda w: np.exp(-0.5 * Sigma2 * w[:, 0] ** 2), [np.sqrt(sigma2)], samples, seed, workers)


def mc_product_moment(state, samples=100_000, seed=0, workers=None):
    """Estimate ``E prod_k exp(-X_k^2 / 2)`` (rightward product).

    With ``u ~ N(0, I)`` the integrand is
    ``exp(-u^T P u / 2) exp(-(i/2) u^T Theta^diam u)``: the characteristic
    function of ``u^T X`` times the Weyl correction that reorders
    ``exp(i u^T X)`` into ``prod_k exp(i u_k X_k)``.
    """
    P = state.P
    Td = diam(state.theta)

    def integrand(u):
        real = np.einsum("si,ij,sj->s", u, P, u)
        phase = np.einsum("si,ij,sj->s", u, Td, u)
        return np.exp(-0.5 * real - 0.5j * phase)

    return _estimate(integrand, np.ones(state.n), samples, seed, workers)


def mc_qef(problem, samples=100_000, seed=0, force=False, workers=None):
    """Estimate ``Xi = E exp(X^T Pi X)`` by randomizing the split exponents.

    Draws ``w ~ N(0, Mho)`` and averages
    ``exp(|W^T w|_P^2 / 2) exp((i/2) w^T (F J F^T)^diam w)``, ``W = F V^{-1} T^{-1}``.
    The mean exists when ``rho(Mho Re L) < 1``; the variance additionally
    needs ``rho(Mho Re L) < 1/2``.

    Raises:
        InfeasibleError: ``rho(Mho Re L) >= 1`` and ``force`` is False
    """
    report = compute_qef(problem)
    if not report.feasible and not force:
        raise InfeasibleError(f"spectral radius {report.spectral_radius:.4g} >= 1: estimator has no finite mean")
    if report.spectral_radius >= 0.5:
        warnings.warn("spectral radius >= 1/2: estimator variance is infinite, standard error is unreliable", RuntimeWarning, stacklevel=2)
    inter = report.intermediates
    W = inter.F @ np.linalg.inv(inter.T @ inter.V)
    A = W @ problem.state.P @ W.T
    Bd = diam(inter.L.imag)

    def integrand(w):
        real = np.einsum("si,ij,sj->s", w, A, w)
        phase = np.einsum("si,ij,sj->s", w, Bd, w)
        return np.exp(0.5 * real + 0.5j * phase)

    return _estimate(integrand, np.sqrt(inter.mho), samples, seed, workers)
