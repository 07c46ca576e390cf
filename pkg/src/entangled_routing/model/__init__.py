"""
model

This package provides the shared queueing substrate of the routing model.

Modules
-------
params           : System parameters, splitting benefit and per-server batch structure.
order_statistics : Moments of exponential order statistics.
waiting_time     : Waiting-time decomposition and payoff/waiting-time correspondence.
"""

# ---------------------------------------------------------------------
# Order Statistics
# ---------------------------------------------------------------------
from .order_statistics import OrderStatMoments, exp_order_stat_moments

# ---------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------
from .params import (
    SystemParams,
    batch_arrival_rate,
    batch_size_probabilities,
    make_params,
    mean_benefit,
    splitting_benefit,
)

# ---------------------------------------------------------------------
# Waiting Time
# ---------------------------------------------------------------------
from .waiting_time import (
    InconsistentPayoffError,
    delta_wq,
    waiting_time_from_payoff,
    waiting_time_from_split_weight,
)

# ---------------------------------------------------------------------
# Package API
# ---------------------------------------------------------------------
__all__ = [
    # Parameters
    'SystemParams',
    'make_params',
    'splitting_benefit',
    'mean_benefit',
    'batch_arrival_rate',
    'batch_size_probabilities',

    # Order statistics
    'OrderStatMoments',
    'exp_order_stat_moments',

    # Waiting time
    'InconsistentPayoffError',
    'waiting_time_from_split_weight',
    'waiting_time_from_payoff',
    'delta_wq',
]
