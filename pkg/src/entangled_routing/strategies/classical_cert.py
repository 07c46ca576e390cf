"""
classical_cert.py

Certified upper bounds on the best deterministic non-communicating strategy at
fixed splitting probability.

Each player outputs f_theta(x) = +1 when its service time x is below its threshold
theta and -1 otherwise. The split constraint D0(thA) D0(thB) = 1 - 2p leaves one
free threshold; the reduced objective is scanned on a grid, each cell is bounded
with its own Lipschitz constant, and cells that could still beat the grid maximum
are bisected. Bounds never exceed E[w].

Two branches of the constraint are scanned:
- upper : D0(thA) > 0, thA in [theta_min(p), inf); for p > 1/2 the left end is closed.
- lower : D0(thA) < 0, thA in [0, -ln(1-p)/mu]; only exists for p <= 1/2.

Classes
-------
InfeasibleThresholdError : Threshold outside the feasible branch.
ThresholdMoments         : D0 and D1 moments of a threshold strategy.
CertifiedBound           : Certificate for the classical value at one p.

Functions
---------
threshold_moments            : Closed-form D0(theta), D1(theta).
payoff_from_moments          : Bilinear payoff in the moments of both players.
payoff_thresholds            : Payoff of a threshold pair.
theta_min                    : Left end of the upper feasible branch.
solve_theta_b                : Partner threshold meeting the split constraint.
reduced_objective            : Payoff along the constraint curve.
reduced_objective_derivative : Analytic derivative of the reduced objective.
boundary_limit               : Closed-form limit A(inf, -ln p / mu).
lipschitz_audit              : Random check of an estimated Lipschitz constant.
certified_classical_bound    : Lipschitz-certified grid search over both branches.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from entangled_routing.model import SystemParams, mean_benefit

logger = logging.getLogger(__name__)

Branch = Literal["upper", "lower"]

DEFAULT_GRID_POINTS = 500
DEFAULT_THETA_MAX = 12.0
DEFAULT_EPSILON = 1e-3
DEFAULT_LIPSCHITZ_FACTOR = 10
DEFAULT_REFINE_TOLERANCE = 1e-6
DEFAULT_MAX_REFINEMENTS = 30
AUDIT_EXCESS = 1.01
AUDIT_INFLATION = 1.1
# Rounding at the closed branch ends where thB = 0.
RATIO_SLACK = 1e-12

# ---------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------

class InfeasibleThresholdError(ValueError):
    """No partner threshold meets the split constraint on the requested branch."""


@dataclass(frozen=True)
class ThresholdMoments:
    """
    Moments of a threshold strategy under Exp(mu) input.

    Attributes
    ----------
    theta : float
        Threshold, +inf for a player that always outputs +1.
    d0 : float
        E[f_theta(X)] = 1 - 2 exp(-mu theta).
    d1 : float
        E[f_theta(X) X] = d0 / mu - 2 theta exp(-mu theta).
    """
    theta: float
    d0: float
    d1: float


@dataclass(frozen=True)
class CertifiedBound:
    """
    Certified bound on the deterministic classical value at splitting probability p.

    Attributes
    ----------
    p : float
        Target splitting probability.
    a_grid : float
        Best upper-branch grid payoff, a lower bound on the classical value.
    lipschitz : float
        Largest per-cell Lipschitz constant of the reduced objective.
    delta : float
        Spacing of the initial grid.
    upper : float
        Largest cell bound, capped at E[w]; at most a_grid + lipschitz * delta / 2.
    theta_star : tuple of float
        Threshold pair at the grid argmax.
    boundary_ok : bool
        Both scanned endpoints are strictly below a_grid.
    epsilon : float
        Exclusion next to theta_min, in time units.
    theta_max : float
        Right end of the scanned interval, in time units.
    limit_value : float
        Payoff of the limiting strategy A(inf, -ln p / mu), approached at both ends.
    mirror_upper : float
        Certified bound of the lower branch, -inf when it does not exist.
    nondegeneracy : tuple of float
        Coefficients c1 D1 + c2 D0 of the partner, for each player at theta_star.
    lipschitz_flagged : bool
        The random audit exceeded the grid estimate and L was inflated.
    refinements : int
        Bisection rounds used on the upper branch.
    """
    p: float
    a_grid: float
    lipschitz: float
    delta: float
    upper: float
    theta_star: tuple[float, float]
    boundary_ok: bool
    epsilon: float
    theta_max: float
    limit_value: float
    mirror_upper: float
    nondegeneracy: tuple[float, float]
    lipschitz_flagged: bool = False
    refinements: int = 0

    @property
    def width(self) -> float:
        """Certificate width upper - a_grid."""
        return self.upper - self.a_grid

    @property
    def bound(self) -> float:
        """Upper bound on the classical value over every scanned region and the limit."""
        return max(self.upper, self.mirror_upper, self.limit_value)

    @property
    def valid(self) -> bool:
        """
        Whether the scanned interval provably contains the supremum.

        Holds when both endpoints are below the grid maximum, or when the grid
        maximum sits at an end whose limiting value is itself covered by the bound.
        """
        return self.boundary_ok or self.limit_value >= self.a_grid

# ---------------------------------------------------------------------
# Threshold Moments and Payoff
# ---------------------------------------------------------------------

def _d0(mu: float, theta: npt.ArrayLike) -> npt.NDArray[np.float64]:
    return np.asarray(1.0 - 2.0 * np.exp(-mu * np.asarray(theta, dtype=float)))


def _d1(mu: float, theta: npt.ArrayLike) -> npt.NDArray[np.float64]:
    t = np.asarray(theta, dtype=float)
    finite = np.where(np.isinf(t), 0.0, t)
    return np.asarray(_d0(mu, t) / mu - 2.0 * finite * np.exp(-mu * t))


def threshold_moments(mu: float, theta: float) -> ThresholdMoments:
    """
    Closed-form moments of the threshold strategy f_theta under Exp(mu).

    Parameters
    ----------
    mu : float
        Service rate.
    theta : float
        Threshold, non-negative; math.inf gives (1, 1/mu).

    Raises
    ------
    ValueError
        Raised if theta is negative or NaN.

    Returns
    -------
    ThresholdMoments
        (theta, d0, d1).
    """
    if math.isnan(theta) or theta < 0.0:
        raise ValueError(f"Threshold must be non-negative, got theta={theta}")
    return ThresholdMoments(theta=theta, d0=float(_d0(mu, theta)), d1=float(_d1(mu, theta)))


def payoff_from_moments(
    params: SystemParams,
    moments_a: ThresholdMoments,
    moments_b: ThresholdMoments,
) -> float:
    """A = -c1 D1a D1b - c2 (D1a D0b + D0a D1b)."""
    return float(
        -params.c1 * moments_a.d1 * moments_b.d1
        - params.c2 * (moments_a.d1 * moments_b.d0 + moments_a.d0 * moments_b.d1)
    )


def _payoff(
    params: SystemParams,
    th_a: npt.ArrayLike,
    th_b: npt.ArrayLike,
) -> npt.NDArray[np.float64]:
    mu = params.mu
    d0a, d1a = _d0(mu, th_a), _d1(mu, th_a)
    d0b, d1b = _d0(mu, th_b), _d1(mu, th_b)
    return np.asarray(-params.c1 * d1a * d1b - params.c2 * (d1a * d0b + d0a * d1b))


def payoff_thresholds(params: SystemParams, th_a: float, th_b: float) -> float:
    """
    Payoff -E[f_A(X1) f_B(X2) w(X1, X2)] of a threshold pair.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    th_a, th_b : float
        Non-negative thresholds of the two players, math.inf allowed.

    Raises
    ------
    ValueError
        Raised if a threshold is negative.

    Returns
    -------
    float
        Game payoff.
    """
    return payoff_from_moments(
        params, threshold_moments(params.mu, th_a), threshold_moments(params.mu, th_b)
    )

# ---------------------------------------------------------------------
# Constraint Curve
# ---------------------------------------------------------------------

def theta_min(mu: float, p: float) -> float:
    """Left end -ln(min(p, 1-p)) / mu of the upper branch."""
    return -math.log(min(p, 1.0 - p)) / mu


def _theta_b(mu: float, p: float, th_a: npt.ArrayLike) -> npt.NDArray[np.float64]:
    ratio = (1.0 - 2.0 * p) / _d0(mu, th_a)
    return np.asarray(-np.log(0.5 * (1.0 - ratio)) / mu)


def solve_theta_b(mu: float, p: float, th_a: float, branch: Branch = "upper") -> float:
    """
    Partner threshold solving D0(thA) D0(thB) = 1 - 2p.

    thB = -(1/mu) ln((1 - (1-2p) / D0(thA)) / 2), valid when the ratio
    (1-2p) / D0(thA) lies in [-1, 1).

    Parameters
    ----------
    mu : float
        Service rate.
    p : float
        Splitting probability in (0, 1).
    th_a : float
        Threshold of the first player.
    branch : {"upper", "lower"}, optional, default="upper"
        Sign of D0(thA); the lower branch only exists for p <= 1/2.

    Raises
    ------
    InfeasibleThresholdError
        Raised if th_a lies outside the feasible set of the branch.
    ValueError
        Raised if p is outside (0, 1) or the branch is unknown.

    Returns
    -------
    float
        Non-negative partner threshold.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"Splitting probability must lie in (0, 1), got p={p}")
    if branch not in ("upper", "lower"):
        raise ValueError(f"Invalid branch '{branch}', expected 'upper' or 'lower'")
    if math.isnan(th_a) or th_a < 0.0:
        raise InfeasibleThresholdError(f"Threshold must be non-negative, got thA={th_a}")

    d0a = float(_d0(mu, th_a))
    if branch == "upper" and d0a <= 0.0:
        raise InfeasibleThresholdError(f"thA={th_a} has D0 <= 0 and is not on the upper branch")
    if branch == "lower" and (d0a >= 0.0 or p > 0.5):
        raise InfeasibleThresholdError(f"thA={th_a} is not on the lower branch at p={p}")

    ratio = (1.0 - 2.0 * p) / d0a
    if not -1.0 - RATIO_SLACK <= ratio < 1.0:
        raise InfeasibleThresholdError(
            f"thA={th_a} is infeasible at p={p}: constraint ratio {ratio:.6g} outside [-1, 1)"
        )
    ratio = max(ratio, -1.0)
    return max(float(-math.log(0.5 * (1.0 - ratio)) / mu), 0.0)


def reduced_objective(
    params: SystemParams, p: float, th_a: float, branch: Branch = "upper"
) -> float:
    """Payoff along the constraint curve, A(thA, thB(thA))."""
    th_b = solve_theta_b(params.mu, p, th_a, branch)
    return payoff_thresholds(params, th_a, th_b)


def _derivative(
    params: SystemParams,
    p: float,
    th_a: npt.ArrayLike,
) -> npt.NDArray[np.float64]:
    mu, c1, c2 = params.mu, params.c1, params.c2
    ta = np.asarray(th_a, dtype=float)
    tb = _theta_b(mu, p, ta)

    ea, eb = np.exp(-mu * ta), np.exp(-mu * tb)
    d0a, d0b = 1.0 - 2.0 * ea, 1.0 - 2.0 * eb
    d1a, d1b = d0a / mu - 2.0 * ta * ea, d0b / mu - 2.0 * tb * eb
    d0a_prime, d0b_prime = 2.0 * mu * ea, 2.0 * mu * eb
    d1a_prime, d1b_prime = 2.0 * mu * ta * ea, 2.0 * mu * tb * eb

    partial_a = -c1 * d1a_prime * d1b - c2 * (d1a_prime * d0b + d0a_prime * d1b)
    partial_b = -c1 * d1a * d1b_prime - c2 * (d1a * d0b_prime + d0a * d1b_prime)
    slope_b = -d0a_prime * d0b / (d0a * d0b_prime)
    return np.asarray(partial_a + partial_b * slope_b)


def reduced_objective_derivative(
    params: SystemParams,
    p: float,
    th_a: float,
    branch: Branch = "upper",
) -> float:
    """
    Analytic derivative of the reduced objective.

    dA/dthA = dA/dthA|thB + dA/dthB * dthB/dthA, with
    dthB/dthA = -D0'(thA) D0(thB) / (D0(thA) D0'(thB)),
    D0'(t) = 2 mu e^{-mu t} and D1'(t) = 2 mu t e^{-mu t}.

    Raises
    ------
    InfeasibleThresholdError
        Raised if th_a is not strictly inside the branch.
    """
    solve_theta_b(params.mu, p, th_a, branch)
    return float(_derivative(params, p, th_a))


def boundary_limit(params: SystemParams, p: float) -> float:
    """
    Payoff of the limiting strategy: one player always outputs +1 and the other
    uses threshold -ln(p)/mu.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"Splitting probability must lie in (0, 1), got p={p}")
    return payoff_thresholds(params, math.inf, -math.log(p) / params.mu)

# ---------------------------------------------------------------------
# Certified Grid Search
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class _Scan:
    a_grid: float
    upper: float
    lipschitz: float
    delta: float
    argmax: float
    first: float
    last: float
    rounds: int


def _objective(
    params: SystemParams,
    p: float,
    th_a: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    return _payoff(params, th_a, _theta_b(params.mu, p, th_a))


def _cell_slopes(
    params: SystemParams,
    p: float,
    left: npt.NDArray[np.float64],
    right: npt.NDArray[np.float64],
    lipschitz_factor: int,
) -> npt.NDArray[np.float64]:
    # Largest |dA/dthA| over lipschitz_factor + 1 evenly spaced points of each cell.
    steps = np.linspace(0.0, 1.0, lipschitz_factor + 1)
    points = left[:, None] + (right - left)[:, None] * steps[None, :]
    return np.asarray(np.max(np.abs(_derivative(params, p, points)), axis=1))


def _cell_bounds(
    f_left: npt.NDArray[np.float64],
    f_right: npt.NDArray[np.float64],
    slopes: npt.NDArray[np.float64],
    widths: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    # Maximum of an L-Lipschitz function on a cell given both end values.
    return np.maximum((f_left + f_right + slopes * widths) / 2.0, np.maximum(f_left, f_right))


def _scan(
    params: SystemParams,
    p: float,
    lo: float,
    hi: float,
    grid_points: int,
    lipschitz_factor: int,
    refine_tolerance: float,
    max_refinements: int,
    inflation: float = 1.0,
) -> _Scan:
    grid = np.linspace(lo, hi, grid_points)
    values = _objective(params, p, grid)
    k = int(np.argmax(values))
    a_grid, argmax = float(values[k]), float(grid[k])

    left, right = grid[:-1], grid[1:]
    f_left, f_right = values[:-1], values[1:]
    slopes = inflation * _cell_slopes(params, p, left, right, lipschitz_factor)
    lipschitz = float(np.max(slopes))

    upper = -math.inf
    rounds = 0
    while True:
        bounds = _cell_bounds(f_left, f_right, slopes, right - left)
        pending = bounds > a_grid + refine_tolerance
        if not pending.any() or rounds == max_refinements:
            upper = max(upper, float(np.max(bounds)))
            break
        upper = max(upper, float(np.max(bounds[~pending], initial=-math.inf)))

        # Bisect every cell that could still hold a value above the grid maximum.
        left, right = left[pending], right[pending]
        f_left, f_right = f_left[pending], f_right[pending]
        mid = (left + right) / 2.0
        f_mid = _objective(params, p, mid)
        j = int(np.argmax(f_mid))
        if f_mid[j] > a_grid:
            a_grid, argmax = float(f_mid[j]), float(mid[j])

        left, right = np.concatenate([left, mid]), np.concatenate([mid, right])
        f_left, f_right = np.concatenate([f_left, f_mid]), np.concatenate([f_mid, f_right])
        slopes = inflation * _cell_slopes(params, p, left, right, lipschitz_factor)
        lipschitz = max(lipschitz, float(np.max(slopes)))
        rounds += 1

    if max_refinements > 0 and rounds == max_refinements and pending.any():
        logger.warning(
            "Refinement stopped after %d rounds at p=%.4f with %d cells above a_grid + %.1e",
            rounds, p, int(pending.sum()), refine_tolerance,
        )

    return _Scan(
        a_grid=a_grid,
        upper=upper,
        lipschitz=lipschitz,
        delta=float(grid[1] - grid[0]),
        argmax=argmax,
        first=float(values[0]),
        last=float(values[-1]),
        rounds=rounds,
    )


def lipschitz_audit(
    params: SystemParams,
    p: float,
    lo: float,
    hi: float,
    lipschitz: float,
    n_samples: int = 100_000,
    seed: int = 1,
) -> tuple[float, bool]:
    """
    Compare an estimated Lipschitz constant against random derivative samples.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    p : float
        Splitting probability.
    lo, hi : float
        Interval of the reduced objective on one branch.
    lipschitz : float
        Estimate to audit.
    n_samples : int, optional, default=100000
        Number of uniform sample points.
    seed : int, optional, default=1
        Generator seed.

    Returns
    -------
    tuple
        (constant, flagged). If the sampled maximum exceeds the estimate by more
        than 1%, the constant is 1.1 times that maximum and flagged is True.
    """
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(lo, hi, size=n_samples)
    sampled = float(np.max(np.abs(_derivative(params, p, thetas))))
    if sampled > AUDIT_EXCESS * lipschitz:
        logger.warning(
            "Lipschitz estimate %.6g exceeded by sampled derivative %.6g at p=%.4f",
            lipschitz, sampled, p,
        )
        return AUDIT_INFLATION * sampled, True
    return lipschitz, False


def _degenerate(params: SystemParams, p: float) -> CertifiedBound:
    # p=0: both always +1 (bunch everything); p=1: complementary constant outputs.
    full = mean_benefit(params)
    value = -full if p == 0.0 else full
    theta_star = (math.inf, math.inf) if p == 0.0 else (0.0, math.inf)
    return CertifiedBound(
        p=p,
        a_grid=value,
        lipschitz=0.0,
        delta=0.0,
        upper=value,
        theta_star=theta_star,
        boundary_ok=True,
        epsilon=0.0,
        theta_max=math.inf,
        limit_value=value,
        mirror_upper=-math.inf,
        nondegeneracy=(math.nan, math.nan),
    )


def certified_classical_bound(
    params: SystemParams,
    p: float,
    grid_points: int = DEFAULT_GRID_POINTS,
    theta_max: float = DEFAULT_THETA_MAX,
    epsilon: float = DEFAULT_EPSILON,
    lipschitz_factor: int = DEFAULT_LIPSCHITZ_FACTOR,
    refine_tolerance: float = DEFAULT_REFINE_TOLERANCE,
    max_refinements: int = DEFAULT_MAX_REFINEMENTS,
    audit_samples: int = 0,
    audit_seed: int = 1,
) -> CertifiedBound:
    """
    Lipschitz-certified upper bound on the deterministic classical value at p.

    Every grid cell [t_i, t_i+1] is bounded by (f_i + f_i+1 + L_i delta_i) / 2 with
    L_i the largest derivative magnitude sampled inside that cell. Cells whose bound
    exceeds the best value found by more than refine_tolerance are bisected. All
    bounds are capped at E[w], the largest payoff any strategy can reach.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    p : float
        Splitting probability in [0, 1]; 0 and 1 return exact zero-width bounds.
    grid_points : int, optional, default=500
        Number of points of the certification grid.
    theta_max : float, optional, default=12.0
        Right end of the upper-branch interval, in units of 1/mu.
    epsilon : float, optional, default=1e-3
        Exclusion next to an open branch end, in units of 1/mu.
    lipschitz_factor : int, optional, default=10
        Derivative samples per cell, minus one.
    refine_tolerance : float, optional, default=1e-6
        Cells whose bound exceeds the best value by more than this are bisected.
    max_refinements : int, optional, default=30
        Largest number of bisection rounds; 0 keeps the uniform grid.
    audit_samples : int, optional, default=0
        Random points for lipschitz_audit; 0 disables the audit.
    audit_seed : int, optional, default=1
        Seed of the audit.

    Raises
    ------
    ValueError
        Raised if p is outside [0, 1], grid_points < 2, a refinement setting is
        negative or the interval is empty.

    Returns
    -------
    CertifiedBound
        Certificate of the upper branch with the lower branch and limit recorded.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Splitting probability must lie in [0, 1], got p={p}")
    if grid_points < 2:
        raise ValueError(f"grid_points must be at least 2, got {grid_points}")
    if lipschitz_factor < 1:
        raise ValueError(f"lipschitz_factor must be at least 1, got {lipschitz_factor}")
    if refine_tolerance < 0.0 or max_refinements < 0:
        raise ValueError(
            f"refine_tolerance and max_refinements must be non-negative, "
            f"got {refine_tolerance} and {max_refinements}"
        )
    if p in (0.0, 1.0):
        return _degenerate(params, p)

    mu = params.mu
    eps = epsilon / mu
    t_max = theta_max / mu
    ceiling = mean_benefit(params)

    # Upper branch; its left end is open (thB -> inf) only for p <= 1/2.
    lo = theta_min(mu, p) + (eps if p <= 0.5 else 0.0)
    if lo >= t_max:
        raise ValueError(
            f"Empty certification interval at p={p}: "
            f"theta_min+eps={lo:.6g} >= theta_max={t_max:.6g}"
        )
    scan = _scan(
        params, p, lo, t_max, grid_points, lipschitz_factor, refine_tolerance, max_refinements
    )

    flagged = False
    if audit_samples > 0:
        constant, flagged = lipschitz_audit(
            params, p, lo, t_max, scan.lipschitz, n_samples=audit_samples, seed=audit_seed
        )
        if flagged:
            scan = _scan(
                params, p, lo, t_max, grid_points, lipschitz_factor, refine_tolerance,
                max_refinements, inflation=constant / max(scan.lipschitz, RATIO_SLACK),
            )

    # Lower branch: thA in [0, -ln(1-p)/mu], right end open at p = 1/2.
    mirror_upper = -math.inf
    if p <= 0.5:
        hi = -math.log(1.0 - p) / mu - (eps if p == 0.5 else 0.0)
        mirror = _scan(
            params, p, 0.0, hi, grid_points, lipschitz_factor, refine_tolerance, max_refinements
        )
        mirror_upper = min(mirror.upper, ceiling)

    th_a = scan.argmax
    th_b = solve_theta_b(mu, p, th_a)
    ma, mb = threshold_moments(mu, th_a), threshold_moments(mu, th_b)
    nondegeneracy = (
        params.c1 * mb.d1 + params.c2 * mb.d0,
        params.c1 * ma.d1 + params.c2 * ma.d0,
    )

    bound = CertifiedBound(
        p=p,
        a_grid=scan.a_grid,
        lipschitz=scan.lipschitz,
        delta=scan.delta,
        upper=min(scan.upper, ceiling),
        theta_star=(th_a, th_b),
        boundary_ok=scan.first < scan.a_grid and scan.last < scan.a_grid,
        epsilon=eps,
        theta_max=t_max,
        limit_value=boundary_limit(params, p),
        mirror_upper=mirror_upper,
        nondegeneracy=nondegeneracy,
        lipschitz_flagged=flagged,
        refinements=scan.rounds,
    )
    logger.debug(
        "Classical p=%.4f a_grid=%.6f upper=%.6f bound=%.6f rounds=%d boundary_ok=%s valid=%s",
        p, bound.a_grid, bound.upper, bound.bound, bound.refinements,
        bound.boundary_ok, bound.valid,
    )
    return bound
