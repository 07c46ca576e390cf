"""
order_statistics.py

Moments of the minimum and maximum of two independent Exp(mu) service times.

Classes
-------
OrderStatMoments : First and second moments of min and max.

Functions
---------
exp_order_stat_moments : Closed-form order-statistic moments for rate mu.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
from dataclasses import dataclass

# ---------------------------------------------------------------------
# Order Statistics
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class OrderStatMoments:
    """
    Moments of min(X1, X2) and max(X1, X2) for X1, X2 iid Exp(mu).

    Attributes
    ----------
    e_min, e_min_sq : float
        E[min] and E[min^2].
    e_max, e_max_sq : float
        E[max] and E[max^2].
    """
    e_min: float
    e_min_sq: float
    e_max: float
    e_max_sq: float


def exp_order_stat_moments(mu: float) -> OrderStatMoments:
    """
    Closed-form moments of the order statistics of two iid Exp(mu) variables.

    min is Exp(2 mu); max = min + an independent Exp(mu) excess.

    Parameters
    ----------
    mu : float
        Service rate, must be positive.

    Raises
    ------
    ValueError
        Raised if mu is not positive.

    Returns
    -------
    OrderStatMoments
        (1/(2mu), 1/(2mu^2), 3/(2mu), 7/(2mu^2)).
    """
    if mu <= 0.0:
        raise ValueError(f"Service rate must be positive, got mu={mu}")

    return OrderStatMoments(
        e_min=1.0 / (2.0 * mu),
        e_min_sq=1.0 / (2.0 * mu**2),
        e_max=3.0 / (2.0 * mu),
        e_max_sq=7.0 / (2.0 * mu**2),
    )
