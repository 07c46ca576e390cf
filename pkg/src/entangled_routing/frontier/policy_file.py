"""
policy_file.py

Read routing policies from YAML (or JSON) files.

A policy file is a mapping with a `kind` key and the parameters of that kind,
either at the top level or nested under `policy`. The JSON written by the
quantum command carries such a nested block, so its output can be simulated
directly.

Classes
-------
PolicyFileError : Malformed policy file, with the 1-based line of the offending node.

Functions
---------
load_policy : Parse a policy file into a PolicySpec.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
from pathlib import Path
from typing import Any

import yaml

from entangled_routing.simulation import PolicySpec

_FIELDS = ("kind", "p", "tau", "thresholds", "coeffs_a", "coeffs_b", "load_balance_flip")
_SEQUENCE_FIELDS = ("thresholds", "coeffs_a", "coeffs_b")


class PolicyFileError(ValueError):
    """
    Malformed policy file.

    Attributes
    ----------
    line : int or None
        1-based line of the offending node, when known.
    """

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _line(node: yaml.Node) -> int:
    return int(node.start_mark.line) + 1


def _find_policy_node(root: yaml.Node) -> yaml.MappingNode:
    if not isinstance(root, yaml.MappingNode):
        raise PolicyFileError("Policy file must contain a mapping", _line(root))
    for key, value in root.value:
        if key.value == "policy":
            if not isinstance(value, yaml.MappingNode):
                raise PolicyFileError("'policy' must be a mapping", _line(value))
            return value
    return root


def _scalar(node: yaml.Node) -> Any:
    return yaml.safe_load(yaml.serialize(node))


def load_policy(path: Path) -> PolicySpec:
    """
    Load a routing policy.

    Parameters
    ----------
    path : Path
        YAML or JSON file.

    Raises
    ------
    PolicyFileError
        Raised if the file is missing, unparsable, has unknown keys, wrong types
        or parameters invalid for the policy kind.

    Returns
    -------
    PolicySpec
        Parsed policy.
    """
    if not path.is_file():
        raise PolicyFileError(f"Policy file not found: {path}")

    text = path.read_text()
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark is not None else None
        raise PolicyFileError(f"Invalid YAML: {exc.problem}", line) from exc

    if root is None:
        raise PolicyFileError("Policy file is empty")
    node = _find_policy_node(root)

    values: dict[str, Any] = {}
    kind_line = _line(node)
    for key_node, value_node in node.value:
        key = key_node.value
        if key not in _FIELDS:
            raise PolicyFileError(f"Unknown policy key '{key}'", _line(key_node))

        value = _scalar(value_node)
        if key in _SEQUENCE_FIELDS:
            if not isinstance(value, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
            ):
                raise PolicyFileError(f"'{key}' must be a list of numbers", _line(value_node))
            value = tuple(float(v) for v in value)
        elif key in ("p", "tau"):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise PolicyFileError(f"'{key}' must be a number", _line(value_node))
            value = float(value)
        elif key == "load_balance_flip" and not isinstance(value, bool):
            raise PolicyFileError("'load_balance_flip' must be true or false", _line(value_node))
        elif key == "kind":
            kind_line = _line(value_node)
        values[key] = value

    if "kind" not in values:
        raise PolicyFileError("Missing policy key 'kind'", _line(node))

    try:
        return PolicySpec(**values)
    except ValueError as exc:
        raise PolicyFileError(str(exc), kind_line) from exc
