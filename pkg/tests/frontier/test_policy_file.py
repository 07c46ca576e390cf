"""
Tests for load_policy() function.
"""

import json
from pathlib import Path

import pytest

from entangled_routing.frontier import PolicyFileError, load_policy
from entangled_routing.simulation import PolicySpec


def _write(tmp_path: Path, text: str, name: str = "policy.yaml") -> Path:
    path = tmp_path / name
    path.write_text(text)
    return path


# -----------------------------------------------------------------------------
# Test: top-level fields
# -----------------------------------------------------------------------------
def test_bernoulli(tmp_path: Path):
    """A flat mapping should parse into the matching PolicySpec."""
    path = _write(tmp_path, "kind: bernoulli\np: 0.2\n")

    assert load_policy(path) == PolicySpec.bernoulli(0.2)


def test_classical_no_flip(tmp_path: Path):
    """Thresholds and the flip switch should be read."""
    path = _write(
        tmp_path,
        "kind: classical_thresholds\nthresholds: [1.5, 2]\nload_balance_flip: false\n",
    )

    assert load_policy(path) == PolicySpec.classical_thresholds(1.5, 2.0, load_balance_flip=False)


# -----------------------------------------------------------------------------
# Test: nested policy block as written by the quantum command
# -----------------------------------------------------------------------------
def test_nested_json(tmp_path: Path):
    """The policy block of a quantum result file should be used."""
    record = {
        "payoff": 0.4,
        "feasible": True,
        "policy": {"kind": "quantum", "coeffs_a": [0.1, 0.2, 0.0], "coeffs_b": [0.3, -0.1, 0.05]},
    }
    path = _write(tmp_path, json.dumps(record, indent=2), name="quantum.json")

    policy = load_policy(path)

    assert policy.kind == "quantum"
    assert policy.coeffs_a == (0.1, 0.2, 0.0)
    assert policy.coeffs_b == (0.3, -0.1, 0.05)
    assert policy.load_balance_flip


# -----------------------------------------------------------------------------
# Test: errors carry the line of the offending node
# -----------------------------------------------------------------------------
def test_unknown_key_line(tmp_path: Path):
    """An unknown key on line 3 should be reported at line 3."""
    path = _write(tmp_path, "kind: bernoulli\np: 0.2\nprob: 0.3\n")

    with pytest.raises(PolicyFileError, match="line 3: Unknown policy key 'prob'") as info:
        load_policy(path)
    assert info.value.line == 3


def test_wrong_type_line(tmp_path: Path):
    """A non-numeric p should be reported at its own line."""
    path = _write(tmp_path, "kind: bernoulli\np: high\n")

    with pytest.raises(PolicyFileError, match="line 2: 'p' must be a number"):
        load_policy(path)


def test_bad_thresholds(tmp_path: Path):
    """Thresholds must be a list of numbers."""
    path = _write(tmp_path, "kind: classical_thresholds\nthresholds: [1.0, x]\n")

    with pytest.raises(PolicyFileError, match="line 2: 'thresholds' must be a list of numbers"):
        load_policy(path)


def test_invalid_parameter_at_kind(tmp_path: Path):
    """PolicySpec validation errors should point at the kind line."""
    path = _write(tmp_path, "p: 1.5\nkind: bernoulli\n")

    with pytest.raises(PolicyFileError, match="line 2: bernoulli policy requires p in"):
        load_policy(path)


def test_unknown_kind(tmp_path: Path):
    """An unknown kind should be rejected."""
    path = _write(tmp_path, "kind: round_robin\n")

    with pytest.raises(PolicyFileError, match="Unknown policy kind"):
        load_policy(path)


def test_missing_kind(tmp_path: Path):
    """A mapping without kind should be rejected."""
    path = _write(tmp_path, "p: 0.2\n")

    with pytest.raises(PolicyFileError, match="Missing policy key 'kind'"):
        load_policy(path)


def test_invalid_yaml(tmp_path: Path):
    """A syntax error should be reported with a line."""
    path = _write(tmp_path, "kind: bernoulli\np: [0.2\n")

    with pytest.raises(PolicyFileError, match="Invalid YAML") as info:
        load_policy(path)
    assert info.value.line is not None


def test_missing_file(tmp_path: Path):
    """A missing file should raise PolicyFileError."""
    with pytest.raises(PolicyFileError, match="not found"):
        load_policy(tmp_path / "missing.yaml")


def test_empty_file(tmp_path: Path):
    """An empty file should raise PolicyFileError."""
    with pytest.raises(PolicyFileError, match="empty"):
        load_policy(_write(tmp_path, ""))
