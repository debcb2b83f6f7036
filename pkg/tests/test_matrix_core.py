import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gaussqef.errors import BranchCutError, DimensionError, InputError, SingularMatrixError, SymmetryError
from gaussqef.matrix_core import (
    as_square,
    classify_symmetry,
    diam,
    matrix_exp,
    matrix_sqrt_psd,
    principal_log,
    require_symmetric,
    reversal,
    spectral_radius,
    symmetrize,
    upsilon,
)


def series_upsilon(Z, terms=80):
    out = np.zeros_like(Z, dtype=complex)
    power = np.eye(Z.shape[0], dtype=complex)
    for k in range(terms):
        out = out + power / math.factorial(k + 1)
        power = power @ Z
    return out


def test_diam_example():
    M = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(diam(M), [[1.0, 2.0], [2.0, 4.0]])


def test_diam_of_antisymmetric_keeps_upper_triangle():
    theta = np.array([[0.0, 0.5], [-0.5, 0.0]])
    np.testing.assert_array_equal(diam(theta), [[0.0, 0.5], [0.5, 0.0]])


@given(arrays(np.float64, (4, 4), elements=st.floats(-10, 10)))
def test_diam_symmetric_and_idempotent(M):
    D = diam(M)
    np.testing.assert_array_equal(D, D.T)
    np.testing.assert_array_equal(diam(D), D)
    np.testing.assert_array_equal(np.triu(D), np.triu(M))


@pytest.mark.parametrize("n", [1, 2, 5])
def test_reversal_is_involution(n):
    R = reversal(n)
    np.testing.assert_array_equal(R @ R, np.eye(n))
    np.testing.assert_array_equal(R @ np.arange(n), np.arange(n)[::-1])


def test_reversal_rejects_zero():
    with pytest.raises(DimensionError):
        reversal(0)


def test_classify_symmetry():
    assert classify_symmetry(np.eye(2)).kind == "symmetric"
    assert classify_symmetry(np.array([[0.0, 1.0], [-1.0, 0.0]])).kind == "antisymmetric"
    assert classify_symmetry(np.array([[1.0, 1j], [-1j, 1.0]])).kind == "hermitian"
    assert classify_symmetry(np.array([[1.0, 2.0], [0.0, 1.0]])).kind == "none"


def test_require_symmetric_cleans_roundoff_and_rejects_asymmetry():
    M = np.array([[1.0, 2.0 + 1e-13], [2.0, 1.0]])
    out = require_symmetric(M)
    np.testing.assert_array_equal(out, out.T)
    with pytest.raises(SymmetryError):
        require_symmetric(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_symmetrize_reports_residual():
    sym, res = symmetrize(np.array([[0.0, 1.0], [3.0, 0.0]]))
    np.testing.assert_array_equal(sym, [[0.0, 2.0], [2.0, 0.0]])
    assert res == 2.0


def test_as_square_rejects_bad_input():
    with pytest.raises(DimensionError):
        as_square(np.zeros((2, 3)))
    with pytest.raises(InputError):
        as_square(np.array([[np.nan]]))


def test_exp_log_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(20):
        A = 0.5 * (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        np.testing.assert_allclose(principal_log(matrix_exp(A)), A, atol=1e-10)


def test_principal_log_branch_cut():
    with pytest.raises(BranchCutError) as info:
        principal_log(np.diag([-1.0, 2.0]))
    assert info.value.value.real == pytest.approx(-1.0)


def test_principal_log_singular():
    with pytest.raises(SingularMatrixError):
        principal_log(np.diag([0.0, 1.0]))


def test_principal_log_rotation_close_to_cut():
    a = 3.0
    R = np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])
    L = principal_log(R)
    np.testing.assert_allclose(L, [[0.0, -a], [a, 0.0]], atol=1e-12)


def test_upsilon_at_zero():
    np.testing.assert_array_equal(upsilon(np.zeros((3, 3))), np.eye(3))


@pytest.mark.parametrize("scale", [1e-6, 0.1, 0.45, 2.0, 7.0])
def test_upsilon_matches_series(scale):
    rng = np.random.default_rng(int(scale * 100))
    Z = scale * (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))) / 4
    np.testing.assert_allclose(upsilon(Z), series_upsilon(Z), rtol=1e-11, atol=1e-13)


def test_upsilon_singular_argument():
    # nilpotent plus a zero eigenvalue: the solve route is unavailable
    Z = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 2.0]])
    expected = series_upsilon(Z)
    np.testing.assert_allclose(upsilon(Z), expected, rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (3, 3), elements=st.floats(-2, 2)))
def test_upsilon_identity(Z):
    # Z Upsilon(Z) = exp(Z) - I
    np.testing.assert_allclose(Z @ upsilon(Z), scipy.linalg.expm(Z) - np.eye(3), atol=1e-10)


def test_matrix_sqrt_psd():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((5, 5))
    M = A @ A.T
    root = matrix_sqrt_psd(M)
    np.testing.assert_allclose(root @ root, M, atol=1e-10)
    np.testing.assert_allclose(root, root.T)


def test_spectral_radius():
    assert spectral_radius(np.array([[0.0, 2.0], [-2.0, 0.0]])) == pytest.approx(2.0)
