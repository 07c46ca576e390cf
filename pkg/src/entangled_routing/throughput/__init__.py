"""
throughput

This package provides the baseline-task throughput model.

Modules
-------
warmup       : Warm-up output curve, renewal cycle and closed-form throughput.
monotonicity : Sign of the throughput derivative for general output curves.
"""

# ---------------------------------------------------------------------
# Warm-up Model
# ---------------------------------------------------------------------
from .warmup import (
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

# ---------------------------------------------------------------------
# Monotonicity
# ---------------------------------------------------------------------
from .monotonicity import OutputCurve, TabulatedOutput, throughput_derivative_sign

# ---------------------------------------------------------------------
# Package API
# ---------------------------------------------------------------------
__all__ = [
    # Warm-up model
    'WarmupModel',
    'cumulative_output',
    'expected_output_of_idle',
    'avg_throughput',
    'normalized_throughput',

    # Renewal cycle
    'mean_idle_period',
    'mean_busy_period',
    'mean_cycle_length',
    'renewal_throughput',

    # Monotonicity
    'OutputCurve',
    'TabulatedOutput',
    'throughput_derivative_sign',
]
