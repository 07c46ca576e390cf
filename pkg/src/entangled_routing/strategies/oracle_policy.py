"""
oracle_policy.py

Full-information w-threshold policy: calibration of the threshold tau_p and the
payoff A*(p) of splitting exactly the pairs whose benefit reaches tau_p.

Samples are drawn from numpy's PCG64 generator (default_rng) seeded with the
given integer, so a fixed seed reproduces results bit for bit across platforms.

Classes
-------
OraclePayoff : Monte Carlo estimate of the oracle payoff at one p.

Functions
---------
sigma_star               : Joint action of the oracle (+1 bunch, -1 split).
estimate_tau             : Empirical (1-p)-quantile of the splitting benefit.
oracle_payoff            : Monte Carlo payoff estimate on the calibration sample.
oracle_payoff_quadrature : Deterministic payoff from root-finding and adaptive quadrature.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import integrate, optimize

from entangled_routing.model import SystemParams, mean_benefit, splitting_benefit

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000
DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 1

# ---------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class OraclePayoff:
    """
    Oracle payoff estimate at a fixed splitting probability.

    Attributes
    ----------
    p : float
        Target splitting probability.
    tau : float
        Calibrated benefit threshold, +inf when nothing is split.
    a_star : float
        Estimated payoff -E[sigma* w].
    std_err : float
        Sample standard deviation of -sigma* w over sqrt(n).
    n_samples : int
        Number of sampled pairs.
    seed : int
        Seed of the generator.
    split_fraction : float
        Fraction of sampled pairs the threshold splits.
    """
    p: float
    tau: float
    a_star: float
    std_err: float
    n_samples: int
    seed: int
    split_fraction: float

# ---------------------------------------------------------------------
# Oracle Action
# ---------------------------------------------------------------------

def sigma_star(tau: float, w: float | npt.ArrayLike) -> int | npt.NDArray[np.int64]:
    """
    Oracle joint action: +1 (bunch) when w < tau, -1 (split) otherwise.

    A benefit exactly at the threshold is split.
    """
    action = np.where(np.asarray(w, dtype=float) < tau, 1, -1)
    if action.ndim == 0:
        return int(action)
    return action

# ---------------------------------------------------------------------
# Monte Carlo Calibration
# ---------------------------------------------------------------------

def _validate(p: float, n: int) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Splitting probability must lie in [0, 1], got p={p}")
    if n < MIN_SAMPLES:
        raise ValueError(f"Number of samples must be at least {MIN_SAMPLES}, got n={n}")


def _sample_benefits(params: SystemParams, n: int, seed: int) -> npt.NDArray[np.float64]:
    rng = np.random.default_rng(seed)
    x = rng.exponential(1.0 / params.mu, size=(n, 2))
    return np.asarray(splitting_benefit(params, x[:, 0], x[:, 1]))


def _quantile(w: npt.NDArray[np.float64], p: float) -> float:
    # Order statistic at index ceil((1-p) n), 1-based, without interpolation.
    if p == 0.0:
        return math.inf
    if p == 1.0:
        return 0.0
    n = w.size
    k = math.ceil((1.0 - p) * n)
    return float(np.partition(w, k - 1)[k - 1])


def estimate_tau(
    params: SystemParams,
    p: float,
    n: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> float:
    """
    Empirical (1-p)-quantile of w(X1, X2) over n sampled pairs.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    p : float
        Target splitting probability in [0, 1].
    n : int, optional, default=100000
        Number of sampled pairs, at least 1000.
    seed : int, optional, default=1
        Generator seed.

    Raises
    ------
    ValueError
        Raised if p is outside [0, 1] or n is below the minimum.

    Returns
    -------
    float
        Threshold tau_p, +inf for p=0 and 0 for p=1.
    """
    _validate(p, n)
    return _quantile(_sample_benefits(params, n, seed), p)


def oracle_payoff(
    params: SystemParams,
    p: float,
    n: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> OraclePayoff:
    """
    Monte Carlo estimate of A*(p) = -E[sigma*(X1, X2) w(X1, X2)].

    The threshold is calibrated and the payoff averaged on the same sample.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    p : float
        Target splitting probability in [0, 1].
    n : int, optional, default=100000
        Number of sampled pairs, at least 1000.
    seed : int, optional, default=1
        Generator seed.

    Raises
    ------
    ValueError
        Raised if p is outside [0, 1] or n is below the minimum.

    Returns
    -------
    OraclePayoff
        Estimate with its standard error.
    """
    _validate(p, n)
    w = _sample_benefits(params, n, seed)
    tau = _quantile(w, p)

    split = w >= tau
    terms = np.where(split, w, -w)
    a_star = float(np.mean(terms))
    std_err = float(np.std(terms, ddof=1) / math.sqrt(n))

    logger.debug("Oracle p=%.4f tau=%.6f a_star=%.6f se=%.2e", p, tau, a_star, std_err)
    return OraclePayoff(
        p=p,
        tau=tau,
        a_star=a_star,
        std_err=std_err,
        n_samples=n,
        seed=seed,
        split_fraction=float(np.mean(split)),
    )

# ---------------------------------------------------------------------
# Deterministic Evaluation
# ---------------------------------------------------------------------

def _split_mass(params: SystemParams, tau: float) -> float:
    """Pr[w(X1, X2) > tau] with the X2 integral in closed form."""
    mu, c1, c2 = params.mu, params.c1, params.c2

    def integrand(x1: float) -> float:
        g = max((tau - c2 * x1) / (c1 * x1 + c2), 0.0)
        return mu * math.exp(-mu * x1) * math.exp(-mu * g)

    knot = tau / c2
    head, _ = integrate.quad(integrand, 0.0, knot, epsabs=1e-13, epsrel=1e-11, limit=200)
    tail, _ = integrate.quad(integrand, knot, math.inf, epsabs=1e-13, epsrel=1e-11)
    return head + tail


def _split_benefit(params: SystemParams, tau: float) -> float:
    """E[w 1{w > tau}] using E[X2; X2 > g] = e^{-mu g} (g + 1/mu)."""
    mu, c1, c2 = params.mu, params.c1, params.c2

    def integrand(x1: float) -> float:
        slope = c1 * x1 + c2
        g = max((tau - c2 * x1) / slope, 0.0)
        inner = math.exp(-mu * g) * (slope * (g + 1.0 / mu) + c2 * x1)
        return mu * math.exp(-mu * x1) * inner

    knot = tau / c2
    head, _ = integrate.quad(integrand, 0.0, knot, epsabs=1e-13, epsrel=1e-11, limit=200)
    tail, _ = integrate.quad(integrand, knot, math.inf, epsabs=1e-13, epsrel=1e-11)
    return head + tail


def oracle_payoff_quadrature(params: SystemParams, p: float) -> tuple[float, float]:
    """
    Deterministic oracle threshold and payoff.

    tau_p solves Pr[w > tau] = p by Brent's method; the payoff is
    2 E[w 1{w > tau}] - E[w], both integrals adaptive over x1.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    p : float
        Target splitting probability in [0, 1].

    Raises
    ------
    ValueError
        Raised if p is outside [0, 1].

    Returns
    -------
    tuple of float
        (tau_p, A*(p)).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Splitting probability must lie in [0, 1], got p={p}")

    full = mean_benefit(params)
    if p == 0.0:
        return math.inf, -full
    if p == 1.0:
        return 0.0, full

    hi = full
    while _split_mass(params, hi) > p:
        hi *= 2.0
    tau = optimize.brentq(lambda t: _split_mass(params, t) - p, 0.0, hi, xtol=1e-13, rtol=1e-13)

    a_star = 2.0 * _split_benefit(params, tau) - full
    return float(tau), float(a_star)
