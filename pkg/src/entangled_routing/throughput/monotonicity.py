"""
monotonicity.py

Sign of the derivative of baseline throughput with respect to the splitting probability.

For a general cumulative output curve T with rate phi = T', the throughput
derivative in p has the sign of -Cov(U, phi(U)) with U ~ Exp(Lambda). Convex
curves (increasing phi) lose throughput as p grows, linear ones are indifferent
and concave ones gain.

Classes
-------
OutputCurve     : Protocol for curves exposing rate(t) and cumulative(t).
TabulatedOutput : Monotone spline through user-supplied (t, T(t)) knots.

Functions
---------
throughput_derivative_sign : -1, 0 or +1 from the covariance by Gauss-Laguerre quadrature.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import logging
from collections.abc import Sequence
from typing import Protocol

import numpy as np
import numpy.typing as npt
from scipy.interpolate import PchipInterpolator

from entangled_routing.model import SystemParams, batch_arrival_rate
from entangled_routing.strategies import gauss_laguerre

logger = logging.getLogger(__name__)

ZERO_COVARIANCE = 1e-10

# ---------------------------------------------------------------------
# Output Curves
# ---------------------------------------------------------------------

class OutputCurve(Protocol):
    """Anything with an instantaneous rate and a cumulative output."""

    def rate(self, t: npt.ArrayLike) -> npt.NDArray[np.float64]: ...

    def cumulative(self, t: npt.ArrayLike) -> npt.NDArray[np.float64]: ...


class TabulatedOutput:
    """
    Cumulative output interpolated through tabulated knots.

    A PCHIP spline keeps the interpolant monotone between knots. Past the last
    knot the curve continues linearly at the final rate.

    Parameters
    ----------
    times : sequence of float
        Knot times, starting at 0 and strictly increasing.
    outputs : sequence of float
        T at the knots, starting at 0 and non-decreasing.

    Raises
    ------
    ValueError
        Raised for fewer than 2 knots, times not starting at 0 or not increasing,
        or decreasing outputs.
    """

    def __init__(self, times: Sequence[float], outputs: Sequence[float]) -> None:
        t = np.asarray(times, dtype=float)
        y = np.asarray(outputs, dtype=float)

        if t.ndim != 1 or t.shape != y.shape or t.size < 2:
            raise ValueError("times and outputs must be 1-D sequences of equal length >= 2")
        if t[0] != 0.0 or y[0] != 0.0:
            raise ValueError("Tabulated output must start at T(0) = 0")
        if np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if np.any(np.diff(y) < 0.0):
            raise ValueError("outputs must be non-decreasing")

        self._spline = PchipInterpolator(t, y, extrapolate=False)
        self._slope = self._spline.derivative()
        self._t_end = float(t[-1])
        self._y_end = float(y[-1])
        self._rate_end = float(self._slope(self._t_end))

    def rate(self, t: npt.ArrayLike) -> npt.NDArray[np.float64]:
        arr = np.asarray(t, dtype=float)
        inside = np.minimum(arr, self._t_end)
        return np.where(arr > self._t_end, self._rate_end, self._slope(inside))

    def cumulative(self, t: npt.ArrayLike) -> npt.NDArray[np.float64]:
        arr = np.asarray(t, dtype=float)
        inside = np.minimum(arr, self._t_end)
        tail = self._y_end + self._rate_end * (arr - self._t_end)
        return np.where(arr > self._t_end, tail, self._spline(inside))

# ---------------------------------------------------------------------
# Diagnostic
# ---------------------------------------------------------------------

def throughput_derivative_sign(
    params: SystemParams,
    curve: OutputCurve,
    p: float,
    quad_order: int = 60,
) -> int:
    """
    Sign of d(throughput)/dp for an arbitrary output curve.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    curve : OutputCurve
        Output curve; only its rate is used.
    p : float
        Splitting probability in [0, 1].
    quad_order : int, optional, default=60
        Gauss-Laguerre order for the idle-period expectations.

    Returns
    -------
    int
        -1 when throughput decreases in p, +1 when it increases, 0 when
        |Cov(U, phi(U))| < 1e-10.
    """
    big_lambda = batch_arrival_rate(params, p)
    quad = gauss_laguerre(quad_order, big_lambda)

    u = quad.nodes
    phi = np.asarray(curve.rate(u), dtype=float)
    cov = quad.expect(u * phi) - quad.expect(u) * quad.expect(phi)
    logger.debug("Cov(U, phi(U)) = %.3e at p=%.4f", cov, p)

    if abs(cov) < ZERO_COVARIANCE:
        return 0
    return -1 if cov > 0.0 else 1
