"""
strategies

This package provides the routing strategies compared at fixed splitting probability.

Modules
-------
quadrature       : Gauss-Laguerre rules for Exp(mu) expectations.
oracle_policy    : Full-information w-threshold policy.
classical_cert   : Certified bounds on deterministic threshold strategies.
concave_envelope : Shared-randomness concavification.
quantum_opt      : Polynomial-angle entangled strategies and their optimization.
"""

# ---------------------------------------------------------------------
# Classical Certificates
# ---------------------------------------------------------------------
from .classical_cert import (
    CertifiedBound,
    InfeasibleThresholdError,
    ThresholdMoments,
    boundary_limit,
    certified_classical_bound,
    lipschitz_audit,
    payoff_from_moments,
    payoff_thresholds,
    reduced_objective,
    reduced_objective_derivative,
    solve_theta_b,
    theta_min,
    threshold_moments,
)

# ---------------------------------------------------------------------
# Concave Envelope
# ---------------------------------------------------------------------
from .concave_envelope import EnvelopePoint, concave_envelope, envelope_points, upper_hull

# ---------------------------------------------------------------------
# Oracle Policy
# ---------------------------------------------------------------------
from .oracle_policy import (
    OraclePayoff,
    estimate_tau,
    oracle_payoff,
    oracle_payoff_quadrature,
    sigma_star,
)

# ---------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------
from .quadrature import Quadrature, gauss_laguerre

# ---------------------------------------------------------------------
# Quantum Strategies
# ---------------------------------------------------------------------
from .quantum_opt import (
    QuantumStrategy,
    angle_polynomial,
    correlation,
    eval_strategy,
    optimize_quantum,
    sample_correlated_outcomes,
)

# ---------------------------------------------------------------------
# Package API
# ---------------------------------------------------------------------
__all__ = [
    # Quadrature
    'Quadrature',
    'gauss_laguerre',

    # Oracle policy
    'OraclePayoff',
    'sigma_star',
    'estimate_tau',
    'oracle_payoff',
    'oracle_payoff_quadrature',

    # Classical certificates
    'InfeasibleThresholdError',
    'ThresholdMoments',
    'CertifiedBound',
    'threshold_moments',
    'payoff_from_moments',
    'payoff_thresholds',
    'theta_min',
    'solve_theta_b',
    'reduced_objective',
    'reduced_objective_derivative',
    'boundary_limit',
    'lipschitz_audit',
    'certified_classical_bound',

    # Concave envelope
    'EnvelopePoint',
    'upper_hull',
    'concave_envelope',
    'envelope_points',

    # Quantum strategies
    'QuantumStrategy',
    'correlation',
    'angle_polynomial',
    'eval_strategy',
    'optimize_quantum',
    'sample_correlated_outcomes',
]
