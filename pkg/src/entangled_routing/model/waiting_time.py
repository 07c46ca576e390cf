"""
waiting_time.py

Mean waiting-time decomposition and the correspondence between game payoffs and
waiting-time gaps.

Classes
-------
InconsistentPayoffError : Raised when a strategy payoff exceeds the optimum it is compared to.

Functions
---------
waiting_time_from_split_weight : E[Wq] = C - E[r w] for a load-balanced policy.
waiting_time_from_payoff       : E[Wq] from a game payoff A = 2 E[r w] - E[w].
delta_wq                       : Waiting-time gap (A* - A) / 2 to the w-threshold policy.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
from .params import SystemParams, mean_benefit

DEFAULT_PAYOFF_TOLERANCE = 1e-6

# ---------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------

class InconsistentPayoffError(ValueError):
    """A payoff exceeds the optimal payoff at the same splitting probability."""

# ---------------------------------------------------------------------
# Waiting Time
# ---------------------------------------------------------------------

def waiting_time_from_split_weight(params: SystemParams, expected_rw: float) -> float:
    """
    Mean customer waiting time from the split-weighted benefit E[r w].

    Parameters
    ----------
    params : SystemParams
        System parameters supplying the constant C.
    expected_rw : float
        E[r(X1, X2) w(X1, X2)], between 0 (always bunch) and E[w] (always split).

    Raises
    ------
    ValueError
        Raised if expected_rw lies outside [0, E[w]].

    Returns
    -------
    float
        E[Wq] = C - expected_rw.
    """
    full_split = mean_benefit(params)
    slack = 1e-12 * max(1.0, full_split)
    if expected_rw < -slack or expected_rw > full_split + slack:
        raise ValueError(
            f"expected_rw={expected_rw} must lie in [0, E[w]={full_split}]"
        )
    return params.wq_const - expected_rw


def waiting_time_from_payoff(params: SystemParams, a: float) -> float:
    """
    Mean waiting time of a load-balanced strategy with game payoff a.

    With A = -E[o_A o_B w] = 2 E[r w] - E[w], E[Wq] = C - (A + E[w]) / 2.
    """
    return waiting_time_from_split_weight(params, (a + mean_benefit(params)) / 2.0)


def delta_wq(a_star: float, a: float, tolerance: float | None = DEFAULT_PAYOFF_TOLERANCE) -> float:
    """
    Waiting-time gap between a strategy and the w-threshold policy at equal p.

    Parameters
    ----------
    a_star : float
        Optimal (w-threshold) payoff at the splitting probability of interest.
    a : float
        Payoff of the compared strategy.
    tolerance : float or None, optional, default=1e-6
        Allowed excess of a over a_star. None disables the consistency check.

    Raises
    ------
    InconsistentPayoffError
        Raised if a exceeds a_star by more than tolerance.

    Returns
    -------
    float
        (a_star - a) / 2, in time units.
    """
    if tolerance is not None and a > a_star + tolerance:
        raise InconsistentPayoffError(
            f"Payoff {a} exceeds the optimum {a_star} by more than {tolerance}"
        )
    return (a_star - a) / 2.0
