"""
concave_envelope.py

Shared-randomness concavification of the classical value curve.

Mixing deterministic strategies with a common random variable makes every chord
between two points of the curve achievable; the shared-randomness value is the
upper concave envelope.

Classes
-------
EnvelopePoint : Deterministic and envelope value at one p.

Functions
---------
upper_hull       : Vertices of the upper concave hull of sorted points.
concave_envelope : Envelope evaluated at the input grid or at other abscissae.
envelope_points  : Pair deterministic values with their envelope.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

# ---------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopePoint:
    """
    Classical value and its shared-randomness envelope at one p.

    Attributes
    ----------
    p : float
        Splitting probability.
    det_value : float
        Deterministic classical value (or certified bound on it).
    sr_value : float
        Concave-envelope value, never below det_value.
    """
    p: float
    det_value: float
    sr_value: float

# ---------------------------------------------------------------------
# Upper Hull
# ---------------------------------------------------------------------

def _as_arrays(
    points: Sequence[tuple[float, float]],
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("Points must be a sequence of (p, value) pairs")
    if arr.shape[0] < 2:
        raise ValueError(f"At least 2 points are required, got {arr.shape[0]}")

    ps, values = arr[:, 0], arr[:, 1]
    steps = np.diff(ps)
    if np.any(steps == 0.0):
        raise ValueError("Duplicate p values in envelope input")
    if np.any(steps < 0.0):
        raise ValueError("Envelope input must be sorted by p")
    return ps, values


def upper_hull(
    points: Sequence[tuple[float, float]],
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    Upper concave hull of points sorted by p (monotone chain).

    Parameters
    ----------
    points : sequence of (float, float)
        Points sorted by strictly increasing p, at least two.

    Raises
    ------
    ValueError
        Raised if the input is unsorted, has duplicate p or fewer than 2 points.

    Returns
    -------
    tuple of np.ndarray
        Abscissae and values of the hull vertices, endpoints included.
    """
    ps, values = _as_arrays(points)

    hull: list[int] = []
    for i in range(ps.size):
        while len(hull) >= 2:
            j, k = hull[-2], hull[-1]
            cross = (ps[k] - ps[j]) * (values[i] - values[j]) - (values[k] - values[j]) * (ps[i] - ps[j])
            # Drop k when it lies on or below the chord j -> i.
            if cross >= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)

    idx = np.asarray(hull)
    return ps[idx], values[idx]


def concave_envelope(
    points: Sequence[tuple[float, float]],
    at: npt.ArrayLike | None = None,
) -> list[tuple[float, float]]:
    """
    Upper concave envelope of a sampled curve.

    Parameters
    ----------
    points : sequence of (float, float)
        Points sorted by strictly increasing p, at least two.
    at : array_like, optional
        Abscissae to evaluate at, inside the input range. Defaults to the input p-grid.

    Raises
    ------
    ValueError
        Raised for invalid input or evaluation abscissae outside the input range.

    Returns
    -------
    list of (float, float)
        (p, envelope value) pairs.
    """
    hull_p, hull_v = upper_hull(points)

    if at is None:
        grid = np.asarray(points, dtype=float)[:, 0]
    else:
        grid = np.asarray(at, dtype=float)
        if np.any(grid < hull_p[0]) or np.any(grid > hull_p[-1]):
            raise ValueError(
                f"Evaluation points must lie in [{hull_p[0]}, {hull_p[-1]}]"
            )

    envelope = np.interp(grid, hull_p, hull_v)
    return [(float(p), float(v)) for p, v in zip(grid, envelope)]


def envelope_points(
    ps: Sequence[float],
    det_values: Sequence[float],
) -> list[EnvelopePoint]:
    """Combine deterministic values on a grid with their concave envelope."""
    points = list(zip(ps, det_values))
    envelope = concave_envelope(points)
    return [
        EnvelopePoint(p=float(p), det_value=float(d), sr_value=max(float(e), float(d)))
        for (p, d), (_, e) in zip(points, envelope)
    ]
