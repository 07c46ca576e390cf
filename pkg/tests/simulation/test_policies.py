"""
Tests for PolicySpec and route_pairs().
"""

import math

import numpy as np
import pytest

from entangled_routing.model import SystemParams
from entangled_routing.simulation import PolicySpec, route_pairs


def _route(spec: PolicySpec, params: SystemParams, n: int = 10_000, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.exponential(1.0, size=(n, 2))
    return route_pairs(spec, params, x[:, 0], x[:, 1], np.random.default_rng(1), np.random.default_rng(2))


# -----------------------------------------------------------------------------
# Test: deterministic split and bunch
# -----------------------------------------------------------------------------
def test_always_split_and_bunch(params: SystemParams):
    """always_split separates every pair; always_bunch never does."""
    split = _route(PolicySpec.always_split(), params)
    bunch = _route(PolicySpec.always_bunch(), params)

    assert np.all(split[:, 0] != split[:, 1])
    assert np.all(bunch[:, 0] == bunch[:, 1])
    # The shared flip spreads bunched pairs over both servers.
    assert abs(bunch[:, 0].mean() - 0.5) < 0.03


def test_no_flip_bunches_to_server_zero(params: SystemParams):
    """Without the load-balancing flip every bunched pair goes to server 0."""
    routes = _route(PolicySpec.always_bunch(load_balance_flip=False), params)
    assert np.all(routes == 0)


# -----------------------------------------------------------------------------
# Test: threshold policies
# -----------------------------------------------------------------------------
def test_classical_thresholds(params: SystemParams):
    """Customers below their threshold go to server 0 when no flip is applied."""
    x1 = np.array([0.5, 2.0, 0.5, 2.0])
    x2 = np.array([0.5, 0.5, 3.0, 3.0])
    spec = PolicySpec.classical_thresholds(1.0, 2.0, load_balance_flip=False)
    routes = route_pairs(spec, params, x1, x2, np.random.default_rng(0), np.random.default_rng(0))

    np.testing.assert_array_equal(routes, [[0, 0], [1, 0], [0, 1], [1, 1]])


def test_oracle_threshold(params: SystemParams):
    """Pairs with benefit at or above tau split, the rest bunch."""
    x1 = np.array([0.1, 3.0])
    x2 = np.array([0.1, 3.0])
    spec = PolicySpec.oracle_threshold(tau=1.0)
    routes = route_pairs(spec, params, x1, x2, np.random.default_rng(0), np.random.default_rng(0))

    assert routes[0, 0] == routes[0, 1]
    assert routes[1, 0] != routes[1, 1]


def test_oracle_infinite_threshold(params: SystemParams):
    """tau = inf never splits."""
    routes = _route(PolicySpec.oracle_threshold(tau=math.inf), params)
    assert np.all(routes[:, 0] == routes[:, 1])


# -----------------------------------------------------------------------------
# Test: randomized policies
# -----------------------------------------------------------------------------
def test_bernoulli_split_fraction(params: SystemParams):
    """bernoulli(0.3) should split about 30% of the pairs."""
    routes = _route(PolicySpec.bernoulli(0.3), params, n=100_000)
    fraction = np.mean(routes[:, 0] != routes[:, 1])
    assert abs(fraction - 0.3) < 3.0 / math.sqrt(100_000)


def test_quantum_constant_angles(params: SystemParams):
    """Orthogonal constant angles always split; equal ones always bunch."""
    split = _route(PolicySpec.quantum([math.pi / 2], [0.0]), params)
    bunch = _route(PolicySpec.quantum([0.3], [0.3]), params)

    assert np.all(split[:, 0] != split[:, 1])
    assert np.all(bunch[:, 0] == bunch[:, 1])


# -----------------------------------------------------------------------------
# Test: labels and validation
# -----------------------------------------------------------------------------
def test_labels():
    """Labels name the kind, its parameter and a disabled flip."""
    assert PolicySpec.bernoulli(0.2).label == "bernoulli(p=0.2)"
    assert PolicySpec.always_bunch(load_balance_flip=False).label == "always_bunch[no-flip]"
    assert PolicySpec.quantum([0.1, 0.2, 0.3], [0.0, 0.1, 0.2]).label == "quantum(degree=2)"


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"kind": "sometimes"}, "Unknown policy kind"),
        ({"kind": "bernoulli", "p": 1.5}, "p in \\[0, 1\\]"),
        ({"kind": "oracle_threshold", "tau": -1.0}, "tau >= 0"),
        ({"kind": "classical_thresholds", "thresholds": (1.0, -0.5)}, "non-negative"),
        ({"kind": "quantum"}, "coeffs_a and coeffs_b"),
        ({"kind": "quantum", "coeffs_a": (0.1, 0.2), "coeffs_b": (0.1,)}, "mismatch"),
    ],
)
def test_invalid_specs(kwargs: dict, message: str):
    """Invalid kinds or parameters should raise ValueError."""
    with pytest.raises(ValueError, match=message):
        PolicySpec(**kwargs)
