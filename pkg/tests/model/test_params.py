"""
Tests for make_params(), splitting_benefit() and the batch-structure helpers.
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entangled_routing.model import (
    SystemParams,
    batch_arrival_rate,
    batch_size_probabilities,
    make_params,
    mean_benefit,
    splitting_benefit,
)


# -----------------------------------------------------------------------------
# Test: derived constants at the reference operating point
# -----------------------------------------------------------------------------
def test_make_params_reference(params: SystemParams):
    """make_params(0.8, 1.0) should give rho=0.8, c1=2, c2=0.25 and C=6.5."""
    assert params.rho == pytest.approx(0.8, abs=1e-12)
    assert params.c1 == pytest.approx(2.0, abs=1e-12)
    assert params.c2 == 0.25
    assert params.wq_const == pytest.approx(6.5, abs=1e-12)


# -----------------------------------------------------------------------------
# Test: unstable and invalid rates are rejected
# -----------------------------------------------------------------------------
@pytest.mark.parametrize("lam, mu", [(1.0, 1.0), (2.0, 1.0), (0.0, 1.0), (-0.5, 1.0), (0.5, 0.0)])
def test_make_params_rejects(lam: float, mu: float):
    """make_params should raise ValueError for rho >= 1 or non-positive rates."""
    with pytest.raises(ValueError):
        make_params(lam, mu)


# -----------------------------------------------------------------------------
# Test: wq_const formula holds across rates
# -----------------------------------------------------------------------------
@given(
    mu=st.floats(min_value=0.1, max_value=10.0),
    rho=st.floats(min_value=0.05, max_value=0.95),
)
def test_wq_const_formula(mu: float, rho: float):
    """wq_const should equal 6 lam / (4 mu^2 (1 - rho)) + 1 / (2 mu)."""
    p = make_params(rho * mu, mu)
    expected = 6.0 * p.lam / (4.0 * mu**2 * (1.0 - p.rho)) + 1.0 / (2.0 * mu)
    assert p.wq_const == pytest.approx(expected, rel=1e-12)


# -----------------------------------------------------------------------------
# Test: splitting benefit examples
# -----------------------------------------------------------------------------
@pytest.mark.parametrize("x1, x2, expected", [(1.0, 1.0, 2.5), (0.0, 0.0, 0.0), (2.0, 0.5, 2.625)])
def test_splitting_benefit_values(params: SystemParams, x1: float, x2: float, expected: float):
    """splitting_benefit should evaluate c1 x1 x2 + c2 (x1 + x2)."""
    assert splitting_benefit(params, x1, x2) == pytest.approx(expected, abs=1e-12)


# -----------------------------------------------------------------------------
# Test: splitting benefit is symmetric and non-negative
# -----------------------------------------------------------------------------
@given(
    x1=st.floats(min_value=0.0, max_value=50.0),
    x2=st.floats(min_value=0.0, max_value=50.0),
)
def test_splitting_benefit_symmetric(x1: float, x2: float):
    """w(x1, x2) should equal w(x2, x1) and never be negative."""
    p = make_params(0.8, 1.0)
    assert splitting_benefit(p, x1, x2) == splitting_benefit(p, x2, x1)
    assert splitting_benefit(p, x1, x2) >= 0.0


def test_splitting_benefit_symmetric_grid(params: SystemParams):
    """On a random grid, w(X, Y) should equal w(Y, X) transposed bit for bit."""
    x = np.random.default_rng(3).exponential(5.0, size=400)
    w = splitting_benefit(params, x[:, None], x[None, :])
    assert np.array_equal(w, w.T)


# -----------------------------------------------------------------------------
# Test: vectorised evaluation and negative input
# -----------------------------------------------------------------------------
def test_splitting_benefit_array(params: SystemParams):
    """splitting_benefit should broadcast arrays and reject negative times."""
    w = splitting_benefit(params, np.array([1.0, 2.0]), np.array([1.0, 0.5]))
    np.testing.assert_allclose(w, [2.5, 2.625])

    with pytest.raises(ValueError, match="non-negative"):
        splitting_benefit(params, -1.0, 1.0)


# -----------------------------------------------------------------------------
# Test: mean benefit against a Monte Carlo estimate
# -----------------------------------------------------------------------------
def test_mean_benefit(params: SystemParams):
    """mean_benefit should be 2.5 at (0.8, 1) and match sampled E[w]."""
    assert mean_benefit(params) == pytest.approx(2.5, abs=1e-12)

    rng = np.random.default_rng(7)
    x = rng.exponential(1.0, size=(2, 200_000))
    w = splitting_benefit(params, x[0], x[1])
    se = np.std(w) / np.sqrt(w.size)
    assert abs(np.mean(w) - 2.5) < 4.0 * se


# -----------------------------------------------------------------------------
# Test: per-server batch structure
# -----------------------------------------------------------------------------
def test_batch_structure(params: SystemParams):
    """Batch rate and size distribution should follow the load-balanced split."""
    assert batch_arrival_rate(params, 0.0) == pytest.approx(0.4)
    assert batch_arrival_rate(params, 1.0) == pytest.approx(0.8)

    single, double = batch_size_probabilities(0.2)
    assert single + double == pytest.approx(1.0)
    assert single == pytest.approx(0.4 / 1.2)

    # Customers per unit time at one server must stay at lam.
    rate = batch_arrival_rate(params, 0.2)
    assert rate * (single + 2.0 * double) == pytest.approx(params.lam)

    with pytest.raises(ValueError, match="Splitting probability"):
        batch_size_probabilities(1.5)
