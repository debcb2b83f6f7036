import numpy as np
import pytest

from gaussqef.ccr import BJ, validate
from gaussqef.errors import DomainError
from gaussqef.matrix_core import diam, reversal
from gaussqef.moments import augmented_covariance, product_moment_EY, product_moment_EYY, single_variable_qem
from gaussqef.oracles import FockOscillator, fock_expectation, mc_single_variable
from gaussqef.oracles.fock import operator_exp
from gaussqef.state import admissible, vacuum

from _util import random_state


def test_single_variable_examples():
    assert single_variable_qem(1.0, 1.0) == pytest.approx(1 / np.sqrt(2), rel=1e-15)
    assert single_variable_qem(5.0, 0.0) == 1.0
    assert single_variable_qem(3.0, 2.0) == pytest.approx(1 / np.sqrt(7))


def test_single_variable_rejects_negative_variance():
    with pytest.raises(DomainError):
        single_variable_qem(-1.0, 1.0)


def test_single_variable_against_monte_carlo():
    est = mc_single_variable(3.0, 2.0, samples=200_000, seed=11)
    assert est.covers(1 / np.sqrt(7))


def test_EY_vacuum():
    # det(P + I + i Theta^diam) = (3/2)^2 + (1/2)^2
    assert product_moment_EY(vacuum(1)) == pytest.approx(1 / np.sqrt(2.5), rel=1e-14)


@pytest.mark.parametrize("n", [2, 4])
def test_EY_classical(n):
    state = admissible(np.eye(n), np.zeros((n, n)))
    assert product_moment_EY(state) == pytest.approx(2 ** (-n / 2))


def test_EY_bounded_by_one():
    rng = np.random.default_rng(0)
    for _ in range(30):
        assert abs(product_moment_EY(random_state(rng, 4))) <= 1.0


def test_EY_principal_value_agrees_with_direct_root():
    rng = np.random.default_rng(1)
    for _ in range(20):
        state = random_state(rng, 2)
        direct = np.linalg.det(state.P + np.eye(2) + 1j * diam(state.theta)) ** -0.5
        assert product_moment_EY(state) == pytest.approx(direct, rel=1e-12)


def test_EYY_vacuum_value_and_bound():
    rep = product_moment_EYY(vacuum(1))
    assert rep.imag_residual < 1e-12
    assert 0 < rep.value <= 1.0
    assert rep.upper_bound == pytest.approx(0.5)
    assert rep.value <= rep.upper_bound
    # frozen from the truncated-oscillator oracle (d = 80): 0.40824829046386335
    assert rep.value == pytest.approx(0.40824829046386335, rel=1e-12)


@pytest.mark.parametrize("n", [2, 4])
def test_EYY_classical_bound_is_tight(n):
    rng = np.random.default_rng(n)
    A = rng.standard_normal((n, n))
    state = admissible(A @ A.T + 0.1 * np.eye(n), np.zeros((n, n)))
    rep = product_moment_EYY(state)
    assert rep.value == pytest.approx(rep.upper_bound, rel=1e-12)


def test_augmented_spectrum():
    rng = np.random.default_rng(5)
    state = random_state(rng, 4)
    IR = np.vstack([np.eye(4), reversal(4)])
    got = np.sort(np.linalg.eigvalsh(IR @ state.P @ IR.T))
    want = np.sort(np.concatenate([np.linalg.eigvalsh(2 * state.P), np.zeros(4)]))
    np.testing.assert_allclose(got, want, atol=1e-10)
    K = augmented_covariance(state)
    np.testing.assert_allclose(K, K.conj().T, atol=1e-14)


@pytest.mark.parametrize("n", [2, 4])
def test_EYY_real_and_bounded(n):
    rng = np.random.default_rng(10 + n)
    for _ in range(20):
        rep = product_moment_EYY(random_state(rng, n))
        assert rep.imag_residual < 1e-10
        assert 0 < rep.value <= min(1.0, rep.upper_bound) * (1 + 1e-12)


def _units(n):
    return [-0.5 * np.diag(np.eye(n)[k]) for k in range(n)]


def test_EY_and_EYY_against_fock_single_mode():
    rng = np.random.default_rng(7)
    for state in [vacuum(1), random_state(rng, 2, excess=0.5)]:
        osc = FockOscillator.for_state(state, 80)
        ey = fock_expectation(osc, _units(2))
        eyy = fock_expectation(osc, _units(2) + _units(2)[::-1])
        assert abs(ey.value - product_moment_EY(state)) < 1e-6
        assert abs(eyy.value - product_moment_EYY(state).value) < 1e-6


def test_EY_against_fock_two_modes():
    state = random_state(np.random.default_rng(3), 4, excess=0.3)
    osc = FockOscillator.for_state(state, 30)
    ey = fock_expectation(osc, _units(4), compare=False)
    assert abs(ey.value - product_moment_EY(state)) < 1e-5


@pytest.mark.parametrize("u", [(0.3, 0.7), (-0.5, 0.2), (1.0, -0.9)])
def test_weyl_product_expectation(u):
    # E prod_k exp(i u_k X_k) = Phi(u) exp(-(i/2) u^T Theta^diam u)
    state = admissible(np.array([[0.9, 0.2], [0.2, 0.7]]), validate(0.5 * BJ))
    osc = FockOscillator.for_state(state, 80)
    op = np.eye(osc.dim, dtype=complex)
    for k, Xk in enumerate(osc.x_ops):
        op = op @ operator_exp(1j * u[k] * Xk)
    value = np.trace(osc.rho @ op)
    u = np.array(u)
    expected = state.qcf(u) * np.exp(-0.5j * u @ diam(state.theta) @ u)
    assert abs(value - expected) < 1e-8
