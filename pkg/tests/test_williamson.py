import warnings

import numpy as np
import pytest

from gaussqef.ccr import canonical_j
from gaussqef.errors import DegeneracyWarning, DimensionError, NotPositiveDefiniteError
from gaussqef.williamson import symplectic_from_generator, williamson

from _util import random_pd, random_symplectic


def check(dec, M):
    nu = dec.nu
    J = canonical_j(nu)
    np.testing.assert_allclose(dec.V @ J @ dec.V.T, J, atol=1e-9)
    np.testing.assert_allclose(dec.V.T @ M @ dec.V, np.diag(np.repeat(dec.lambdas, 2)), atol=1e-9 * max(1.0, np.max(M)))


def test_isotropic_two_by_two():
    dec = williamson(np.pi * np.eye(2))
    assert dec.lambdas[0] == pytest.approx(np.pi)
    np.testing.assert_allclose(dec.V, np.eye(2), atol=1e-14)


def test_diagonal_two_by_two():
    M = np.diag([4.0, 1.0])
    dec = williamson(M)
    assert dec.lambdas[0] == pytest.approx(2.0)
    np.testing.assert_allclose(dec.V.T @ M @ dec.V, 2 * np.eye(2), atol=1e-14)
    check(dec, M)


def test_isotropic_higher_order_warns_degenerate():
    with pytest.warns(DegeneracyWarning):
        dec = williamson(0.7 * np.eye(6))
    np.testing.assert_allclose(dec.lambdas, 0.7)
    check(dec, 0.7 * np.eye(6))


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("n", [2, 4, 6])
def test_reconstruction(seed, n):
    M = random_pd(np.random.default_rng(seed), n)
    dec = williamson(M)
    Vinv = np.linalg.inv(dec.V)
    np.testing.assert_allclose(Vinv.T @ np.diag(np.repeat(dec.lambdas, 2)) @ Vinv, M, atol=1e-9)
    check(dec, M)
    assert np.all(dec.lambdas > 0)
    assert np.all(np.diff(dec.lambdas) <= 0)


@pytest.mark.parametrize("seed", range(5))
def test_symplectic_spectrum_invariance(seed):
    rng = np.random.default_rng(seed)
    M = random_pd(rng, 4)
    S = random_symplectic(rng, 2)
    np.testing.assert_allclose(williamson(S.T @ M @ S).lambdas, williamson(M).lambdas, rtol=1e-9)


def test_lambdas_are_imaginary_parts_of_eigenvalues():
    M = random_pd(np.random.default_rng(11), 4)
    eig = np.linalg.eigvals(2 * canonical_j(2) @ M)
    expected = np.sort(eig.imag[eig.imag > 0])[::-1]
    np.testing.assert_allclose(williamson(M).lambdas, expected, rtol=1e-10)


def test_degenerate_block_gauge():
    rng = np.random.default_rng(4)
    S = random_symplectic(rng, 2)
    M = S.T @ np.diag([1.5, 1.5, 1.5, 1.5]) @ S
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegeneracyWarning)
        dec = williamson(M)
    assert dec.degenerate
    check(dec, M)


def test_permuted_decomposition_is_valid():
    M = random_pd(np.random.default_rng(2), 6)
    dec = williamson(M).permuted([2, 0, 1])
    check(dec, M)
    assert dec.lambdas[1] == williamson(M).lambdas[0]


def test_errors():
    with pytest.raises(DimensionError):
        williamson(np.eye(3))
    with pytest.raises(NotPositiveDefiniteError):
        williamson(np.diag([1.0, -1.0]))


def test_symplectic_from_generator():
    rng = np.random.default_rng(0)
    H = rng.standard_normal((4, 4))
    S = symplectic_from_generator(H)
    J = canonical_j(2)
    np.testing.assert_allclose(S @ J @ S.T, J, atol=1e-12)
