"""
simulation

This package provides the discrete-event simulator used to validate the analysis.

Modules
-------
policies : Routing policy specifications and vectorized routing decisions.
des_sim  : Event-driven two-server simulation and policy comparison.
"""

# ---------------------------------------------------------------------
# Policies
# ---------------------------------------------------------------------
from .policies import POLICY_KINDS, PolicySpec, route_pairs

# ---------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------
from .des_sim import SimStats, compare_policies, simulate

# ---------------------------------------------------------------------
# Package API
# ---------------------------------------------------------------------
__all__ = [
    # Policies
    'POLICY_KINDS',
    'PolicySpec',
    'route_pairs',

    # Simulation
    'SimStats',
    'simulate',
    'compare_policies',
]
