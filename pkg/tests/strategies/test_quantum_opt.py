"""
Tests for quantum strategy evaluation, optimization and outcome sampling.
"""

import math

import numpy as np
import pytest

from entangled_routing.model import SystemParams
from entangled_routing.strategies import (
    certified_classical_bound,
    correlation,
    eval_strategy,
    gauss_laguerre,
    optimize_quantum,
    sample_correlated_outcomes,
)
from entangled_routing.strategies.quantum_opt import (
    CONVERGENCE_TOLERANCE,
    _initial_point,
    _Kernel,
    _stable,
)


# -----------------------------------------------------------------------------
# Test: singlet correlation
# -----------------------------------------------------------------------------
@pytest.mark.parametrize(
    "theta_a, theta_b, expected",
    [(0.3, 0.3, 1.0), (math.pi / 4, 0.0, 0.0), (math.pi / 2, 0.0, -1.0)],
)
def test_correlation(theta_a: float, theta_b: float, expected: float):
    """correlation should equal cos(2 (theta_a - theta_b))."""
    assert correlation(theta_a, theta_b) == pytest.approx(expected, abs=1e-15)


# -----------------------------------------------------------------------------
# Test: constant strategies
# -----------------------------------------------------------------------------
def test_eval_constant_strategies(params: SystemParams):
    """Equal, orthogonal and diagonal constant angles give bunch, split and coin-flip."""
    quad = gauss_laguerre(60, 1.0)

    payoff, p = eval_strategy(params, [0.4, 0.0, 0.0], [0.4, 0.0, 0.0], quad)
    assert payoff == pytest.approx(-2.5, abs=1e-8)
    assert p == pytest.approx(0.0, abs=1e-12)

    payoff, p = eval_strategy(params, [math.pi / 2, 0.0, 0.0], [0.0, 0.0, 0.0], quad)
    assert payoff == pytest.approx(2.5, abs=1e-8)
    assert p == pytest.approx(1.0, abs=1e-12)

    payoff, p = eval_strategy(params, [math.pi / 4], [0.0], quad)
    assert payoff == pytest.approx(0.0, abs=1e-12)
    assert p == pytest.approx(0.5, abs=1e-12)


# -----------------------------------------------------------------------------
# Test: invariances of the evaluation
# -----------------------------------------------------------------------------
def test_eval_invariances(params: SystemParams):
    """A global angle shift and a joint sign flip should not change payoff or p."""
    quad = gauss_laguerre(30, 1.0)
    sa, sb = [0.3, -0.2], [1.1, 0.15]

    base = eval_strategy(params, sa, sb, quad)
    shifted = eval_strategy(params, [sa[0] + 0.7, sa[1]], [sb[0] + 0.7, sb[1]], quad)
    flipped = eval_strategy(params, [-c for c in sa], [-c for c in sb], quad)

    assert shifted == pytest.approx(base, abs=1e-12)
    assert flipped == pytest.approx(base, abs=1e-12)


def test_eval_length_mismatch(params: SystemParams):
    """Coefficient vectors of different lengths should raise ValueError."""
    with pytest.raises(ValueError, match="mismatch"):
        eval_strategy(params, [0.1, 0.2], [0.1], gauss_laguerre(10, 1.0))


# -----------------------------------------------------------------------------
# Test: analytic gradients against finite differences
# -----------------------------------------------------------------------------
def test_gradients(params: SystemParams):
    """Payoff and probability gradients should match central differences."""
    kernel = _Kernel(params, gauss_laguerre(30, 1.0), 2)
    z = np.array([0.2, -0.3, 0.05, 0.9, 0.1, -0.02])
    h = 1e-6

    for i in range(z.size):
        step = np.zeros_like(z)
        step[i] = h
        d_payoff = (kernel.payoff(z + step) - kernel.payoff(z - step)) / (2.0 * h)
        d_prob = (kernel.probability(z + step) - kernel.probability(z - step)) / (2.0 * h)
        assert kernel.payoff_grad(z)[i] == pytest.approx(d_payoff, abs=1e-6)
        assert kernel.probability_grad(z)[i] == pytest.approx(d_prob, abs=1e-6)


# -----------------------------------------------------------------------------
# Test: constant-angle optimum has a closed form
# -----------------------------------------------------------------------------
def test_degree_zero_closed_form(params: SystemParams):
    """Degree 0 at p=0.2 should reach -(1 - 2p) E[w] = -1.5."""
    strategy = optimize_quantum(params, 0.2, degree=0, restarts=3, seed=1, quad_order=30)

    assert strategy.feasible
    assert strategy.payoff == pytest.approx(-1.5, abs=1e-6)
    assert strategy.constraint_residual <= 1e-8


# -----------------------------------------------------------------------------
# Test: optimized strategy beats the constant baseline and the classical bound
# -----------------------------------------------------------------------------
def test_quantum_beats_classical(params: SystemParams):
    """Defaults at p=0.2 should give a feasible payoff above the classical bound."""
    strategy = optimize_quantum(params, 0.2)
    cert = certified_classical_bound(params, 0.2)

    assert strategy.feasible
    assert abs(strategy.p_achieved - 0.2) <= 1e-8
    assert strategy.payoff >= -(1.0 - 0.4) * 2.5 - 1e-8
    assert strategy.payoff > cert.bound
    assert -2.5 <= strategy.payoff <= 2.5

    # Smooth integrand: a finer rule changes the payoff very little.
    fine = eval_strategy(params, strategy.coeffs_a, strategy.coeffs_b, gauss_laguerre(90, 1.0))
    assert fine[0] == pytest.approx(strategy.payoff, abs=1e-6)


# -----------------------------------------------------------------------------
# Test: optimized strategy is converged in the quadrature order
# -----------------------------------------------------------------------------
def test_optimized_order_convergence(params: SystemParams):
    """The strategy optimized at order 60 should keep payoff and p at order 120."""
    strategy = optimize_quantum(params, 0.2, restarts=5)
    assert strategy.feasible
    assert math.isfinite(strategy.payoff) and math.isfinite(strategy.p_achieved)

    coarse = eval_strategy(params, strategy.coeffs_a, strategy.coeffs_b, gauss_laguerre(60, 1.0))
    fine = eval_strategy(params, strategy.coeffs_a, strategy.coeffs_b, gauss_laguerre(120, 1.0))

    assert coarse[0] == pytest.approx(strategy.payoff, abs=1e-12)
    assert fine[0] == pytest.approx(coarse[0], abs=CONVERGENCE_TOLERANCE)
    assert fine[1] == pytest.approx(coarse[1], abs=CONVERGENCE_TOLERANCE)
    assert 0 <= strategy.restarts_discarded < 5


# -----------------------------------------------------------------------------
# Test: restart starting points
# -----------------------------------------------------------------------------
def test_initial_point_scale():
    """Constants lie in [-pi/2, pi/2]; degree-k coefficients in 0.3 0.1^(k-1) mu^k."""
    rng = np.random.default_rng(0)
    mu = 2.0
    limits = np.array([0.5 * math.pi, 0.3 * mu, 0.03 * mu**2, 0.003 * mu**3])

    for _ in range(200):
        z = _initial_point(rng, 3, mu)
        assert z.shape == (8,)
        assert np.all(np.abs(z[:4]) <= limits)
        assert np.all(np.abs(z[4:]) <= limits)


# -----------------------------------------------------------------------------
# Test: stability check against a doubled quadrature order
# -----------------------------------------------------------------------------
def test_stable_rejects_fast_angles(params: SystemParams):
    """Slowly turning angles pass the doubled-order check; fast quadratic angles fail it."""
    kernel = _Kernel(params, gauss_laguerre(30, 1.0), 2)
    check = _Kernel(params, gauss_laguerre(60, 1.0), 2)

    smooth = np.array([0.2, 0.1, 0.0, 0.9, -0.05, 0.0])
    fast = np.array([0.0, 3.0, 20.0, 0.3, -4.0, -15.0])

    assert _stable(kernel, check, smooth)
    assert not _stable(kernel, check, fast)


# -----------------------------------------------------------------------------
# Test: deterministic replay independent of threads
# -----------------------------------------------------------------------------
def test_replay(params: SystemParams):
    """Identical inputs should give identical strategies for any thread count."""
    first = optimize_quantum(params, 0.3, degree=1, restarts=4, seed=7, quad_order=30)
    second = optimize_quantum(params, 0.3, degree=1, restarts=4, seed=7, quad_order=30, threads=2)
    assert first == second


# -----------------------------------------------------------------------------
# Test: invalid arguments
# -----------------------------------------------------------------------------
def test_invalid_arguments(params: SystemParams):
    """restarts=0, p outside (0, 1) and negative degree should raise ValueError."""
    with pytest.raises(ValueError, match="restarts"):
        optimize_quantum(params, 0.2, restarts=0)
    with pytest.raises(ValueError, match="Target splitting probability"):
        optimize_quantum(params, 0.0)
    with pytest.raises(ValueError, match="degree"):
        optimize_quantum(params, 0.2, degree=-1)


# -----------------------------------------------------------------------------
# Test: sampled outcomes
# -----------------------------------------------------------------------------
def test_sampling_extremes():
    """Zero angle difference always agrees; pi/2 always disagrees."""
    rng = np.random.default_rng(0)
    o_a, o_b = sample_correlated_outcomes(np.zeros(1000), np.zeros(1000), rng)
    assert np.all(o_a == o_b)

    o_a, o_b = sample_correlated_outcomes(np.full(1000, math.pi / 2), np.zeros(1000), rng)
    assert np.all(o_a == -o_b)

    single = sample_correlated_outcomes(0.1, 0.1, rng)
    assert single[0] == single[1] and single[0] in (1, -1)


def test_sampling_statistics():
    """At pi/4, 10^6 draws should show zero correlation and fair marginals."""
    rng = np.random.default_rng(2)
    n = 1_000_000
    o_a, o_b = sample_correlated_outcomes(np.full(n, math.pi / 4), np.zeros(n), rng)

    assert abs(np.mean(o_a * o_b)) < 0.004
    assert abs(np.mean(o_a)) < 0.004
    assert abs(np.mean(o_b)) < 0.004

    delta = 0.4
    o_a, o_b = sample_correlated_outcomes(np.full(n, delta), np.zeros(n), rng)
    assert abs(np.mean(o_a * o_b) - math.cos(2.0 * delta)) < 4.0 / math.sqrt(n)
