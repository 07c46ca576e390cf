"""
Fixtures for entangled_routing tests.
"""

from pathlib import Path

import pytest

from entangled_routing.model import SystemParams, make_params
from entangled_routing.throughput import WarmupModel


# ---------------------------------------------------------------------
# Fixture: reference operating point lam=0.8, mu=1
# ---------------------------------------------------------------------
@pytest.fixture
def params() -> SystemParams:
    """System parameters used throughout the numerical study."""
    return make_params(0.8, 1.0)


# ---------------------------------------------------------------------
# Fixture: warm-up model phi_max=1, alpha=0.5
# ---------------------------------------------------------------------
@pytest.fixture
def wm() -> WarmupModel:
    """Exponential-saturation warm-up model."""
    return WarmupModel(phi_max=1.0, alpha=0.5)


# ---------------------------------------------------------------------
# Fixture: temporary output directory for test results
# ---------------------------------------------------------------------
@pytest.fixture
def output_dir(tmp_path: Path) -> Path:
    """
    Returns a temporary output directory for CLI results.
    """
    path = tmp_path / "output"
    path.mkdir(exist_ok=True)
    return path


# ---------------------------------------------------------------------
# Fixture: small run configuration for CLI tests
# ---------------------------------------------------------------------
@pytest.fixture
def small_config(tmp_path: Path) -> Path:
    """A YAML run configuration with reduced grids and sample sizes."""
    path = tmp_path / "small.yaml"
    path.write_text(
        "system:\n"
        "  lam: 0.8\n"
        "  mu: 1.0\n"
        "p_grid: [0.1, 0.2, 0.3]\n"
        "classical:\n"
        "  grid_points: 120\n"
        "quantum:\n"
        "  restarts: 3\n"
        "oracle:\n"
        "  n_samples: 20000\n"
        "sim:\n"
        "  n_pairs: 20000\n"
        "  warmup_discard: 2000\n"
    )
    return path
