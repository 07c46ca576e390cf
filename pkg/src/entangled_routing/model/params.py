"""
params.py

System parameters of the two-server routing model and the splitting-benefit function.

Classes
-------
SystemParams : Arrival/service rates with the derived constants rho, c1, c2 and C.

Functions
---------
make_params             : Validate rates and build a SystemParams.
splitting_benefit       : Waiting-time reduction w(x1, x2) from splitting a pair.
mean_benefit            : E[w(X1, X2)] for independent Exp(mu) service times.
batch_arrival_rate      : Per-server batch arrival rate at splitting probability p.
batch_size_probabilities: Per-server batch size distribution at splitting probability p.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

# Exponential service: E[S] = 2/mu and E[S^2] = 6/mu^2 for S = X1 + X2.
_PAIR_MEAN_FACTOR = 2.0
_PAIR_SECOND_MOMENT_FACTOR = 6.0

# ---------------------------------------------------------------------
# System Parameters
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class SystemParams:
    """
    Rates of the two-server system and the constants derived from them.

    Attributes
    ----------
    lam : float
        Pair arrival rate (pairs per unit time).
    mu : float
        Per-customer service rate.
    rho : float
        Per-server utilization lam / mu.
    c1 : float
        Weight lam / (2 (1 - rho)) of the product term of w.
    c2 : float
        Weight 1/4 of the sum term of w.
    wq_const : float
        Policy-independent constant C = lam E[S^2] / (4 (1 - rho)) + E[S] / 4,
        the mean waiting time of the always-bunch policy.
    """
    lam: float
    mu: float
    rho: float
    c1: float
    c2: float
    wq_const: float


def make_params(lam: float, mu: float) -> SystemParams:
    """
    Validate arrival and service rates and derive the model constants.

    Parameters
    ----------
    lam : float
        Pair arrival rate, must be positive.
    mu : float
        Service rate, must be positive.

    Raises
    ------
    ValueError
        Raised if a rate is not positive or the system is unstable (rho >= 1).

    Returns
    -------
    SystemParams
        Parameters with rho, c1, c2 and wq_const populated.
    """
    if not np.isfinite(lam) or lam <= 0.0:
        raise ValueError(f"Arrival rate must be positive, got lam={lam}")
    if not np.isfinite(mu) or mu <= 0.0:
        raise ValueError(f"Service rate must be positive, got mu={mu}")

    rho = lam / mu
    if rho >= 1.0:
        raise ValueError(f"Unstable system: rho = lam/mu = {rho} must be below 1")

    c1 = lam / (2.0 * (1.0 - rho))
    wq_const = (
        lam * _PAIR_SECOND_MOMENT_FACTOR / (4.0 * mu**2 * (1.0 - rho))
        + _PAIR_MEAN_FACTOR / (4.0 * mu)
    )
    return SystemParams(lam=lam, mu=mu, rho=rho, c1=c1, c2=0.25, wq_const=wq_const)

# ---------------------------------------------------------------------
# Splitting Benefit
# ---------------------------------------------------------------------

def splitting_benefit(
    params: SystemParams,
    x1: float | npt.ArrayLike,
    x2: float | npt.ArrayLike,
) -> float | npt.NDArray[np.float64]:
    """
    Waiting-time reduction obtained by splitting rather than bunching a pair.

    w(x1, x2) = c1 x1 x2 + c2 (x1 + x2). Accepts scalars or broadcastable arrays.

    Parameters
    ----------
    params : SystemParams
        System parameters supplying c1 and c2.
    x1, x2 : float or array_like
        Non-negative service times of the two customers.

    Raises
    ------
    ValueError
        Raised if any service time is negative.

    Returns
    -------
    float or np.ndarray
        Benefit in time units, scalar when both inputs are scalars.
    """
    a = np.asarray(x1, dtype=float)
    b = np.asarray(x2, dtype=float)
    if np.any(a < 0.0) or np.any(b < 0.0):
        raise ValueError("Service times must be non-negative")

    w = params.c1 * (a * b) + params.c2 * (a + b)
    if w.ndim == 0:
        return float(w)
    return w


def mean_benefit(params: SystemParams) -> float:
    """E[w(X1, X2)] = c1 / mu^2 + 2 c2 / mu for independent Exp(mu) inputs."""
    return params.c1 / params.mu**2 + 2.0 * params.c2 / params.mu


def batch_arrival_rate(params: SystemParams, p: float) -> float:
    """Per-server batch arrival rate Lambda = lam (1 + p) / 2 under load balancing."""
    _check_probability(p)
    return params.lam * (1.0 + p) / 2.0


def batch_size_probabilities(p: float) -> tuple[float, float]:
    """
    Batch size distribution seen by one server under load balancing.

    Returns
    -------
    tuple of float
        (Pr[K=1], Pr[K=2]) = (2p / (1+p), (1-p) / (1+p)).
    """
    _check_probability(p)
    return 2.0 * p / (1.0 + p), (1.0 - p) / (1.0 + p)


def _check_probability(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Splitting probability must lie in [0, 1], got p={p}")
