"""
Tests for gauss_laguerre() function.
"""

import math

import numpy as np
import pytest

from entangled_routing.strategies import gauss_laguerre


# -----------------------------------------------------------------------------
# Test: order-60 rule reproduces the first Exp(mu) moments
# -----------------------------------------------------------------------------
@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_moments_order_60(mu: float):
    """Moments 0 through 5 should match k!/mu^k to 1e-9 relative."""
    quad = gauss_laguerre(60, mu)

    for k in range(6):
        exact = math.factorial(k) / mu**k
        assert quad.expect(quad.nodes**k) == pytest.approx(exact, rel=1e-9)


# -----------------------------------------------------------------------------
# Test: basic structure of the rule
# -----------------------------------------------------------------------------
def test_structure():
    """Nodes should be positive and sorted, weights non-negative and summing to 1."""
    quad = gauss_laguerre(60, 1.0)

    assert quad.order == 60
    assert quad.nodes.shape == quad.weights.shape == (60,)
    assert np.all(quad.nodes > 0.0)
    assert np.all(np.diff(quad.nodes) > 0.0)
    assert np.all(quad.weights >= 0.0)
    assert quad.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert quad.expect(quad.nodes) == pytest.approx(1.0, abs=1e-10)
    assert quad.expect(quad.nodes**2) == pytest.approx(2.0, abs=1e-10)


# -----------------------------------------------------------------------------
# Test: closed-form two-point rule
# -----------------------------------------------------------------------------
@pytest.mark.parametrize("mu", [1.0, 2.0])
def test_two_point_rule(mu: float):
    """Order 2 should give nodes (2 -+ sqrt 2)/mu and weights (2 +- sqrt 2)/4."""
    quad = gauss_laguerre(2, mu)
    root = math.sqrt(2.0)

    np.testing.assert_allclose(quad.nodes, [(2.0 - root) / mu, (2.0 + root) / mu], rtol=0, atol=1e-12)
    np.testing.assert_allclose(quad.weights, [(2.0 + root) / 4.0, (2.0 - root) / 4.0], rtol=0, atol=1e-12)


# -----------------------------------------------------------------------------
# Test: mean of Exp(2)
# -----------------------------------------------------------------------------
def test_rescaled_mean():
    """An order-60 rule for mu=2 should integrate x to 0.5."""
    quad = gauss_laguerre(60, 2.0)
    assert quad.expect(quad.nodes) == pytest.approx(0.5, abs=1e-10)
    assert quad.mu == 2.0


# -----------------------------------------------------------------------------
# Test: rejected orders and rates
# -----------------------------------------------------------------------------
@pytest.mark.parametrize("order, mu", [(1, 1.0), (121, 1.0), (10, 0.0)])
def test_invalid_arguments(order: int, mu: float):
    """gauss_laguerre should raise ValueError outside the supported range."""
    with pytest.raises(ValueError):
        gauss_laguerre(order, mu)
