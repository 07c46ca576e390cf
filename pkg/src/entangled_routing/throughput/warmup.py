"""
warmup.py

Baseline-task throughput of a server that works on background tasks while idle.

Each idle period restarts a warm-up: instantaneous productivity is
phi(t) = phi_max (1 - e^{-alpha t}) after t units of idle time, so the output of
an idle period of length t is the strictly convex T(t). Long-run throughput
follows from the renewal-reward theorem over idle/busy cycles of the per-server
batch-Poisson queue.

Classes
-------
WarmupModel : Exponential-saturation productivity curve.

Functions
---------
cumulative_output       : T(t) of the warm-up model.
expected_output_of_idle : E[T(I)] for an Exp(Lambda) idle period.
mean_idle_period        : E[I] = 1/Lambda.
mean_busy_period        : E[B] = rho / (Lambda (1 - rho)).
mean_cycle_length       : E[I + B] = 1 / (Lambda (1 - rho)).
renewal_throughput      : E[T(I)] / E[I + B].
avg_throughput          : Closed-form long-run baseline throughput per server.
normalized_throughput   : Throughput divided by phi_max (1 - rho), in (0, 1].
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from entangled_routing.model import SystemParams, batch_arrival_rate

# ---------------------------------------------------------------------
# Warm-up Model
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class WarmupModel:
    """
    Exponential-saturation warm-up.

    Attributes
    ----------
    phi_max : float
        Steady-state productivity (output per unit time).
    alpha : float
        Warm-up rate (inverse time).
    """
    phi_max: float
    alpha: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.phi_max) or self.phi_max <= 0.0:
            raise ValueError(f"phi_max must be positive, got {self.phi_max}")
        if not math.isfinite(self.alpha) or self.alpha <= 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def rate(self, t: float | npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Instantaneous productivity phi(t)."""
        t = np.asarray(t, dtype=float)
        return np.asarray(self.phi_max * -np.expm1(-self.alpha * t))

    def cumulative(self, t: float | npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Output T(t) = phi_max [t - (1 - e^{-alpha t}) / alpha]."""
        t = np.asarray(t, dtype=float)
        return np.asarray(self.phi_max * (t + np.expm1(-self.alpha * t) / self.alpha))


def cumulative_output(wm: WarmupModel, t: float | npt.ArrayLike) -> float | npt.NDArray[np.float64]:
    """
    Output produced during an idle period of length t.

    Parameters
    ----------
    wm : WarmupModel
        Warm-up model.
    t : float or array_like
        Idle time, non-negative.

    Raises
    ------
    ValueError
        Raised if any t is negative.

    Returns
    -------
    float or np.ndarray
        T(t); a float for scalar input.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("Idle time t must be non-negative")

    out = wm.cumulative(arr)
    if out.ndim == 0:
        return float(out)
    return out


def expected_output_of_idle(wm: WarmupModel, big_lambda: float) -> float:
    """
    Expected output of an Exp(big_lambda) idle period.

    Integrating by parts, E[T(I)] = int phi(t) e^{-Lambda t} dt, which for the
    warm-up model is phi_max alpha / (Lambda (Lambda + alpha)).

    Raises
    ------
    ValueError
        Raised if big_lambda is not positive.
    """
    if big_lambda <= 0.0:
        raise ValueError(f"Batch arrival rate must be positive, got {big_lambda}")
    return wm.phi_max * wm.alpha / (big_lambda * (big_lambda + wm.alpha))

# ---------------------------------------------------------------------
# Renewal Cycle
# ---------------------------------------------------------------------

def mean_idle_period(params: SystemParams, p: float) -> float:
    """E[I] = 1/Lambda with Lambda = lam (1 + p) / 2."""
    return 1.0 / batch_arrival_rate(params, p)


def mean_busy_period(params: SystemParams, p: float) -> float:
    """E[B] = rho / (Lambda (1 - rho))."""
    return params.rho / (batch_arrival_rate(params, p) * (1.0 - params.rho))


def mean_cycle_length(params: SystemParams, p: float) -> float:
    """E[I + B] = 1 / (Lambda (1 - rho))."""
    return 1.0 / (batch_arrival_rate(params, p) * (1.0 - params.rho))


def renewal_throughput(params: SystemParams, wm: WarmupModel, p: float) -> float:
    """Throughput assembled as expected cycle reward over expected cycle length."""
    big_lambda = batch_arrival_rate(params, p)
    return expected_output_of_idle(wm, big_lambda) / mean_cycle_length(params, p)

# ---------------------------------------------------------------------
# Closed Form
# ---------------------------------------------------------------------

def avg_throughput(params: SystemParams, wm: WarmupModel, p: float) -> float:
    """
    Long-run baseline throughput per server at splitting probability p.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    wm : WarmupModel
        Warm-up model.
    p : float
        Splitting probability in [0, 1].

    Raises
    ------
    ValueError
        Raised if p lies outside [0, 1].

    Returns
    -------
    float
        phi_max (1 - rho) 2 alpha / (lam (1 + p) + 2 alpha), strictly decreasing in p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Splitting probability must lie in [0, 1], got {p}")
    return (
        wm.phi_max * (1.0 - params.rho) * 2.0 * wm.alpha
        / (params.lam * (1.0 + p) + 2.0 * wm.alpha)
    )


def normalized_throughput(params: SystemParams, wm: WarmupModel, p: float) -> float:
    """Throughput as a fraction of the instantaneous-warm-up value phi_max (1 - rho)."""
    return avg_throughput(params, wm, p) / (wm.phi_max * (1.0 - params.rho))
