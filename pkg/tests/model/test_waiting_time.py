"""
Tests for the waiting-time decomposition and delta_wq() function.
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from entangled_routing.model import (
    InconsistentPayoffError,
    SystemParams,
    delta_wq,
    mean_benefit,
    waiting_time_from_payoff,
    waiting_time_from_split_weight,
)


# -----------------------------------------------------------------------------
# Test: always-bunch, always-split and midpoint
# -----------------------------------------------------------------------------
@pytest.mark.parametrize("expected_rw, expected", [(0.0, 6.5), (2.5, 4.0), (1.25, 5.25)])
def test_split_weight_values(params: SystemParams, expected_rw: float, expected: float):
    """waiting_time_from_split_weight should return C - E[r w]."""
    assert waiting_time_from_split_weight(params, expected_rw) == pytest.approx(expected, abs=1e-12)


# -----------------------------------------------------------------------------
# Test: full split equals the M/M/1 waiting time
# -----------------------------------------------------------------------------
def test_full_split_is_mm1(params: SystemParams):
    """Full-split waiting time should equal rho / (mu - lam)."""
    wq = waiting_time_from_split_weight(params, mean_benefit(params))
    assert wq == pytest.approx(params.rho / (params.mu - params.lam), abs=1e-12)


# -----------------------------------------------------------------------------
# Test: out-of-range split weight
# -----------------------------------------------------------------------------
def test_split_weight_out_of_range(params: SystemParams):
    """waiting_time_from_split_weight should reject values outside [0, E[w]]."""
    with pytest.raises(ValueError, match="expected_rw"):
        waiting_time_from_split_weight(params, 3.0)
    with pytest.raises(ValueError, match="expected_rw"):
        waiting_time_from_split_weight(params, -0.1)


# -----------------------------------------------------------------------------
# Test: payoff endpoints map to bunch and split waiting times
# -----------------------------------------------------------------------------
def test_waiting_time_from_payoff(params: SystemParams):
    """A = -E[w] should give 6.5 and A = E[w] should give 4.0."""
    assert waiting_time_from_payoff(params, -2.5) == pytest.approx(6.5, abs=1e-12)
    assert waiting_time_from_payoff(params, 2.5) == pytest.approx(4.0, abs=1e-12)


# -----------------------------------------------------------------------------
# Test: delta_wq examples
# -----------------------------------------------------------------------------
@pytest.mark.parametrize("a_star, a, expected", [(2.5, 2.5, 0.0), (2.5, 2.354, 0.073), (1.0, -1.0, 1.0)])
def test_delta_wq_values(a_star: float, a: float, expected: float):
    """delta_wq should return (a_star - a) / 2."""
    assert delta_wq(a_star, a) == pytest.approx(expected, abs=1e-12)


# -----------------------------------------------------------------------------
# Test: delta_wq flags inconsistent payoffs
# -----------------------------------------------------------------------------
def test_delta_wq_inconsistent():
    """delta_wq should raise rather than clamp when a exceeds a_star."""
    with pytest.raises(InconsistentPayoffError):
        delta_wq(1.0, 1.1)

    assert delta_wq(1.0, 1.0 + 5e-7) == pytest.approx(-2.5e-7)
    assert delta_wq(1.0, 1.05, tolerance=0.1) == pytest.approx(-0.025)


# -----------------------------------------------------------------------------
# Test: delta_wq antisymmetry
# -----------------------------------------------------------------------------
@given(
    a=st.floats(min_value=-10.0, max_value=10.0),
    b=st.floats(min_value=-10.0, max_value=10.0),
)
def test_delta_wq_antisymmetric(a: float, b: float):
    """delta_wq(a, b) should equal -delta_wq(b, a) and vanish on the diagonal."""
    assert delta_wq(a, b, tolerance=None) == -delta_wq(b, a, tolerance=None)
    assert delta_wq(a, a) == 0.0


# -----------------------------------------------------------------------------
# Test: decomposition is affine with slope -1
# -----------------------------------------------------------------------------
@given(r=st.floats(min_value=0.0, max_value=2.4))
def test_split_weight_affine(r: float):
    """Increasing E[r w] by 0.1 should reduce waiting time by exactly 0.1."""
    from entangled_routing.model import make_params

    p = make_params(0.8, 1.0)
    diff = waiting_time_from_split_weight(p, r) - waiting_time_from_split_weight(p, r + 0.1)
    assert diff == pytest.approx(0.1, abs=1e-12)
