"""
Tests for the warm-up model, renewal cycle and closed-form throughput.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from entangled_routing.model import SystemParams, make_params
from entangled_routing.throughput import (
    WarmupModel,
    avg_throughput,
    cumulative_output,
    expected_output_of_idle,
    mean_busy_period,
    mean_cycle_length,
    mean_idle_period,
    normalized_throughput,
    renewal_throughput,
)


# -----------------------------------------------------------------------------
# Test: cumulative output values
# -----------------------------------------------------------------------------
def test_cumulative_output_values(wm: WarmupModel):
    """T(0)=0, T(2)=2/e and T(t) approaches phi_max (t - 1/alpha)."""
    assert cumulative_output(wm, 0.0) == 0.0
    assert cumulative_output(wm, 2.0) == pytest.approx(2.0 * math.exp(-1.0), abs=1e-14)
    assert cumulative_output(wm, 60.0) - (60.0 - 2.0) == pytest.approx(0.0, abs=1e-12)


def test_cumulative_matches_integrated_rate(wm: WarmupModel):
    """T(t) should equal the integral of phi over [0, t]."""
    integral, _ = quad(lambda s: float(wm.rate(s)), 0.0, 3.7)
    assert cumulative_output(wm, 3.7) == pytest.approx(integral, rel=1e-10)


def test_cumulative_output_convex(wm: WarmupModel):
    """Second differences of T on a uniform grid should be positive."""
    t = np.linspace(0.0, 10.0, 101)
    assert np.all(np.diff(cumulative_output(wm, t), n=2) > 0.0)


def test_cumulative_output_negative_time(wm: WarmupModel):
    """Negative idle time should raise ValueError."""
    with pytest.raises(ValueError, match="non-negative"):
        cumulative_output(wm, -0.1)


@pytest.mark.parametrize("phi_max, alpha", [(0.0, 0.5), (1.0, 0.0), (-1.0, 1.0), (1.0, math.inf)])
def test_invalid_warmup_model(phi_max: float, alpha: float):
    """Non-positive or infinite parameters should raise ValueError."""
    with pytest.raises(ValueError):
        WarmupModel(phi_max=phi_max, alpha=alpha)


# -----------------------------------------------------------------------------
# Test: expected output of an idle period
# -----------------------------------------------------------------------------
def test_expected_output_of_idle(wm: WarmupModel):
    """E[T(I)] for Lambda=0.4 should be 0.5 / 0.36 and match direct integration."""
    value = expected_output_of_idle(wm, 0.4)
    direct, _ = quad(lambda t: float(wm.cumulative(t)) * 0.4 * math.exp(-0.4 * t), 0.0, math.inf)

    assert value == pytest.approx(0.5 / 0.36, rel=1e-14)
    assert value == pytest.approx(direct, rel=1e-7)


def test_instantaneous_warmup_limit():
    """A very fast warm-up should give E[T(I)] close to phi_max / Lambda."""
    fast = WarmupModel(phi_max=1.0, alpha=1e9)
    assert expected_output_of_idle(fast, 0.4) == pytest.approx(2.5, rel=1e-8)


def test_expected_output_rejects_rate(wm: WarmupModel):
    """A non-positive batch rate should raise ValueError."""
    with pytest.raises(ValueError, match="positive"):
        expected_output_of_idle(wm, 0.0)


# -----------------------------------------------------------------------------
# Test: closed-form throughput
# -----------------------------------------------------------------------------
def test_avg_throughput_values(params: SystemParams, wm: WarmupModel):
    """Reference values at p=0 and p=1."""
    assert avg_throughput(params, wm, 0.0) == pytest.approx(0.2 / 1.8, rel=1e-12)
    assert avg_throughput(params, wm, 1.0) == pytest.approx(0.2 / 2.6, rel=1e-12)


def test_avg_throughput_decreasing(params: SystemParams, wm: WarmupModel):
    """Throughput should strictly decrease on a 101-point p-grid."""
    values = [avg_throughput(params, wm, p) for p in np.linspace(0.0, 1.0, 101)]
    assert np.all(np.diff(values) < 0.0)


def test_normalized_throughput_range(params: SystemParams, wm: WarmupModel):
    """Normalized throughput should lie in (0, 1]."""
    for p in np.linspace(0.0, 1.0, 11):
        assert 0.0 < normalized_throughput(params, wm, p) <= 1.0


def test_avg_throughput_rejects_probability(params: SystemParams, wm: WarmupModel):
    """p outside [0, 1] should raise ValueError."""
    with pytest.raises(ValueError, match="Splitting probability"):
        avg_throughput(params, wm, 1.5)


# -----------------------------------------------------------------------------
# Test: renewal cycle
# -----------------------------------------------------------------------------
def test_cycle_displays(params: SystemParams):
    """Idle, busy and cycle means should match their closed forms at p=0.2."""
    p = 0.2
    assert mean_idle_period(params, p) == pytest.approx(2.0 / (0.8 * 1.2), rel=1e-12)
    assert mean_busy_period(params, p) == pytest.approx(2.0 / (1.2 * 0.2), rel=1e-12)
    assert mean_cycle_length(params, p) == pytest.approx(
        mean_idle_period(params, p) + mean_busy_period(params, p), rel=1e-12
    )
    assert mean_cycle_length(params, p) == pytest.approx((2.0 / 1.2) * (1.0 / 0.8 + 1.0 / 0.2), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    lam=st.floats(0.05, 5.0),
    load=st.floats(0.05, 0.95),
    alpha=st.floats(0.01, 10.0),
    p=st.floats(0.0, 1.0),
)
def test_renewal_matches_closed_form(lam: float, load: float, alpha: float, p: float):
    """Renewal assembly should equal the closed form to 1e-12 relative."""
    params = make_params(lam, lam / load)
    wm = WarmupModel(phi_max=1.3, alpha=alpha)
    assert renewal_throughput(params, wm, p) == pytest.approx(avg_throughput(params, wm, p), rel=1e-12)
