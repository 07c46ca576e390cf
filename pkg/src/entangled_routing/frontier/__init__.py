"""
frontier

This package provides the library half of the command-line tools: run
configuration, policy files, frontier assembly and result export.

Modules
-------
config      : YAML run configuration with validated sections.
policy_file : Routing policies read from YAML or JSON files.
frontier    : Frontier assembly and summary.
export      : CSV and JSON writers with exact round-trip.
"""

# ---------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------
from .config import (
    ClassicalConfig,
    ConfigError,
    OracleConfig,
    OutputConfig,
    QuantumConfig,
    RunConfig,
    SimConfig,
    SystemConfig,
    WarmupConfig,
    apply_overrides,
    config_from_mapping,
    load_config,
)

# ---------------------------------------------------------------------
# Policy Files
# ---------------------------------------------------------------------
from .policy_file import PolicyFileError, load_policy

# ---------------------------------------------------------------------
# Frontier
# ---------------------------------------------------------------------
from .frontier import SCHEMA_VERSION, FrontierPoint, compute_frontier, summarize_frontier

# ---------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------
from .export import (
    FRONTIER_COLUMNS,
    check_required_columns,
    frontier_table,
    read_table_csv,
    round_significant,
    write_json,
    write_table,
)

# ---------------------------------------------------------------------
# Package API
# ---------------------------------------------------------------------
__all__ = [
    # Configuration
    'ConfigError',
    'SystemConfig',
    'WarmupConfig',
    'ClassicalConfig',
    'QuantumConfig',
    'OracleConfig',
    'SimConfig',
    'OutputConfig',
    'RunConfig',
    'config_from_mapping',
    'load_config',
    'apply_overrides',

    # Policy files
    'PolicyFileError',
    'load_policy',

    # Frontier
    'SCHEMA_VERSION',
    'FrontierPoint',
    'compute_frontier',
    'summarize_frontier',

    # Export
    'FRONTIER_COLUMNS',
    'frontier_table',
    'round_significant',
    'check_required_columns',
    'write_table',
    'read_table_csv',
    'write_json',
]
