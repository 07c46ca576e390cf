"""
entangled_routing

This package provides the queueing model, routing strategies, throughput model,
simulator and frontier tools for entanglement-assisted routing of paired
arrivals to two parallel servers.

Modules
-------
model      : Subpackage providing system parameters and the waiting-time decomposition.
strategies : Subpackage providing oracle, classical and quantum routing strategies.
throughput : Subpackage providing the warm-up model and baseline throughput.
simulation : Subpackage providing routing policies and the discrete-event simulator.
frontier   : Subpackage providing run configuration, frontier assembly and export.
"""

# ---------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------
from .model import SystemParams, delta_wq, make_params, waiting_time_from_payoff

# ---------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------
from .strategies import (
    certified_classical_bound,
    concave_envelope,
    optimize_quantum,
    oracle_payoff,
)

# ---------------------------------------------------------------------
# Throughput
# ---------------------------------------------------------------------
from .throughput import WarmupModel, avg_throughput, throughput_derivative_sign

# ---------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------
from .simulation import PolicySpec, compare_policies, simulate

# ---------------------------------------------------------------------
# Frontier
# ---------------------------------------------------------------------
from .frontier import RunConfig, compute_frontier, load_config, summarize_frontier

# ---------------------------------------------------------------------
# Package API
# ---------------------------------------------------------------------
__all__ = [
    # Model
    'SystemParams',
    'make_params',
    'waiting_time_from_payoff',
    'delta_wq',

    # Strategies
    'oracle_payoff',
    'certified_classical_bound',
    'concave_envelope',
    'optimize_quantum',

    # Throughput
    'WarmupModel',
    'avg_throughput',
    'throughput_derivative_sign',

    # Simulation
    'PolicySpec',
    'simulate',
    'compare_policies',

    # Frontier
    'RunConfig',
    'load_config',
    'compute_frontier',
    'summarize_frontier',
]
