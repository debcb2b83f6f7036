import numpy as np
import pytest

from gaussqef.ccr import BJ, validate
from gaussqef.errors import DimensionError
from gaussqef.matrix_core import matrix_exp
from gaussqef.oracles import FockOscillator, fock_expectation
from gaussqef.recursion import initialize, run, step_current, step_general
from gaussqef.state import admissible

from _util import random_symmetric

HALF = 0.5 * BJ


def blockdiag(*blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i : i + k, i : i + k] = b
        i += k
    return out


def test_initialization():
    C0 = np.diag([0.1, 0.2])
    state = initialize(C0, HALF)
    assert state.N == 0
    np.testing.assert_array_equal(state.Pi, C0)


def test_decoupled_step():
    rng = np.random.default_rng(0)
    C0 = random_symmetric(rng, 2, 0.1)
    s1 = step_general(initialize(C0, HALF), np.zeros((4, 4)), np.zeros((2, 2)), HALF)
    np.testing.assert_allclose(s1.Pi, blockdiag(C0, np.zeros((2, 2))), atol=1e-12)


def test_zero_current_weight_is_middle_factor():
    rng = np.random.default_rng(1)
    C0 = random_symmetric(rng, 2, 0.1)
    sigma = rng.standard_normal((2, 2))
    s1 = step_current(initialize(C0, HALF), np.zeros((2, 2)), sigma, HALF)
    th = s1.theta
    np.testing.assert_allclose(matrix_exp(4j * th @ s1.Pi), matrix_exp(4j * th @ blockdiag(C0, np.zeros((2, 2)))), atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_current_equals_general(seed):
    rng = np.random.default_rng(seed)
    state = initialize(random_symmetric(rng, 2, 0.05), HALF)
    for k in range(1, 4):
        sigma = 0.3 * rng.standard_normal((2, 2 * k))
        D = random_symmetric(rng, 2, 0.05)
        a = step_current(state, D, sigma, HALF)
        b = step_general(state, blockdiag(np.zeros((2 * k, 2 * k)), D), sigma, HALF)
        np.testing.assert_allclose(a.Pi, b.Pi, atol=1e-12)
        state = a


def test_block_exponential_matches_dense():
    rng = np.random.default_rng(3)
    D = random_symmetric(rng, 2, 0.1)
    state = step_current(initialize(np.zeros((2, 2)), HALF), D, np.zeros((2, 2)), HALF)
    # with Pi_0 = 0 and sigma = 0 the outer factors are exp(4i Theta_1 blockdiag(0, D)) each
    dense = matrix_exp(4j * state.theta @ blockdiag(np.zeros((2, 2)), D))
    np.testing.assert_allclose(state.S, dense @ dense, atol=1e-10)


def test_realness_and_symplectic_image():
    rng = np.random.default_rng(4)
    weights = [{"C": random_symmetric(rng, 2, 0.05)}]
    for k in range(1, 6):
        weights.append({"sigma": 0.3 * rng.standard_normal((2, 2 * k)), "theta": HALF, "D": random_symmetric(rng, 2, 0.02)})
    states = run(HALF, weights)
    for s in states:
        assert s.imag_residual < 1e-9
        assert s.asymmetry < 1e-9
        assert s.symplectic_residual() < 1e-8
        np.testing.assert_array_equal(s.Pi, s.Pi.T)


def test_commutative_degeneration():
    # block-diagonal CCR, local weights: Pi_N accumulates like a classical additive cost
    rng = np.random.default_rng(5)
    C0 = random_symmetric(rng, 2, 0.1)
    D1, D2 = random_symmetric(rng, 2, 0.1), random_symmetric(rng, 2, 0.1)
    states = run(HALF, [{"C": C0}, {"sigma": np.zeros((2, 2)), "theta": HALF, "D": D1}, {"sigma": np.zeros((2, 4)), "theta": HALF, "D": D2}])
    np.testing.assert_allclose(states[-1].Pi, blockdiag(C0, 2 * D1, 2 * D2), atol=1e-12)


def test_horizon_cap():
    state = initialize(np.zeros((2, 2)), HALF)
    with pytest.raises(DimensionError):
        step_current(state, np.zeros((2, 2)), np.zeros((2, 2)), HALF, max_horizon=0)


def test_shape_errors():
    state = initialize(np.zeros((2, 2)), HALF)
    with pytest.raises(DimensionError):
        step_general(state, np.zeros((2, 2)), np.zeros((2, 2)), HALF)
    with pytest.raises(DimensionError):
        step_current(state, np.zeros((3, 3)), np.zeros((2, 2)), HALF)
    with pytest.raises(DimensionError):
        run(HALF, [])


def test_one_step_against_two_mode_fock_oracle():
    rng = np.random.default_rng(6)
    C0 = random_symmetric(rng, 2, 0.03)
    C1 = random_symmetric(rng, 4, 0.03)
    sigma = 0.4 * rng.standard_normal((2, 2))
    s1 = step_general(initialize(C0, HALF), C1, sigma, HALF)
    T = validate(s1.theta).canonical.T
    state = admissible(T @ (0.6 * np.eye(4)) @ T.T, s1.theta)
    osc = FockOscillator.for_state(state, 30)
    q1 = fock_expectation(osc, [C1, blockdiag(C0, np.zeros((2, 2))), C1], compare=False).value
    e1 = fock_expectation(osc, [s1.Pi], compare=False).value
    assert abs(q1 - e1) < 1e-5


def test_long_chain():
    rng = np.random.default_rng(7)
    weights = [{"C": random_symmetric(rng, 2, 0.02)}]
    for k in range(1, 17):
        weights.append({"sigma": 0.2 * rng.standard_normal((2, 2 * k)), "theta": HALF, "D": random_symmetric(rng, 2, 0.02)})
    states = run(HALF, weights)
    assert states[-1].N == 16
    assert states[-1].Pi.shape == (34, 34)
    assert states[-1].symplectic_residual() < 1e-8
