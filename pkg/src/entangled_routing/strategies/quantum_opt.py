"""
quantum_opt.py

Entanglement-assisted strategies with polynomial measurement angles.

Each player measures a shared singlet-like pair at angle theta(x) = sum_k c_k x^k of
its own service time. Outcomes have uniform +-1 marginals and correlation
cos(2 (thetaA - thetaB)). Payoff and splitting probability are double sums over a
Gauss-Laguerre product rule; the payoff is maximized subject to an equality
constraint on the splitting probability by SLSQP with analytic gradients and
seeded random restarts.

Classes
-------
QuantumStrategy : Optimized coefficients with the payoff and split probability they achieve.

Functions
---------
correlation                : E[oA oB] = cos(2 (thetaA - thetaB)).
angle_polynomial           : Evaluate an angle polynomial at service times.
eval_strategy              : Payoff and splitting probability of a coefficient pair.
optimize_quantum           : Equality-constrained maximization with restarts.
sample_correlated_outcomes : Draw joint +-1 outcomes with the singlet correlation.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import logging
import math
import threading
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
import numpy.typing as npt
from numpy.polynomial import polynomial as P
from scipy.optimize import minimize

from entangled_routing.model import SystemParams, splitting_benefit

from .quadrature import Quadrature, gauss_laguerre

logger = logging.getLogger(__name__)

DEFAULT_DEGREE = 2
DEFAULT_QUAD_ORDER = 60
DEFAULT_RESTARTS = 20
DEFAULT_SEED = 1
DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAXITER = 500
INITIAL_SLOPE = 0.3
INITIAL_DECAY = 0.1
# Largest change of payoff or p allowed when the quadrature order is doubled.
CONVERGENCE_TOLERANCE = 1e-6

# The Fortran SLSQP core in older SciPy releases keeps state between calls.
_SLSQP_LOCK = threading.Lock()

# ---------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class QuantumStrategy:
    """
    Result of a quantum strategy optimization.

    Attributes
    ----------
    degree : int
        Polynomial degree of both angle functions.
    coeffs_a, coeffs_b : tuple of float
        Coefficients c_0..c_degree of thetaA and thetaB.
    payoff : float
        Achieved payoff, a lower bound on the quantum value.
    p_achieved : float
        Splitting probability of the returned coefficients.
    p_target : float
        Requested splitting probability.
    constraint_residual : float
        |p_achieved - p_target|.
    restarts_used : int
        Number of restarts run.
    seed : int
        Master seed of the restarts.
    feasible : bool
        Whether the residual is within the constraint tolerance.
    restarts_discarded : int
        Restarts dropped as non-finite or unstable under a doubled quadrature order.
    """
    degree: int
    coeffs_a: tuple[float, ...]
    coeffs_b: tuple[float, ...]
    payoff: float
    p_achieved: float
    p_target: float
    constraint_residual: float
    restarts_used: int
    seed: int
    feasible: bool
    restarts_discarded: int = 0

    def to_dict(self) -> dict[str, Any]:
        """Plain mapping with a nested policy block readable by load_policy."""
        record = asdict(self)
        record["coeffs_a"] = list(self.coeffs_a)
        record["coeffs_b"] = list(self.coeffs_b)
        record["policy"] = {
            "kind": "quantum",
            "coeffs_a": list(self.coeffs_a),
            "coeffs_b": list(self.coeffs_b),
        }
        return record

# ---------------------------------------------------------------------
# Correlations and Evaluation
# ---------------------------------------------------------------------

def correlation(theta_a: float | npt.ArrayLike, theta_b: float | npt.ArrayLike) -> Any:
    """Singlet correlation cos(2 (theta_a - theta_b))."""
    return np.cos(2.0 * (np.asarray(theta_a) - np.asarray(theta_b)))


def angle_polynomial(coeffs: Sequence[float], x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """theta(x) = sum_k coeffs[k] x^k."""
    return np.asarray(P.polyval(np.asarray(x, dtype=float), np.asarray(coeffs, dtype=float)))


class _Kernel:
    """Weight matrices W = w(x_i, x_j) w_i w_j and Pi = w_i w_j on a product rule."""

    def __init__(self, params: SystemParams, quad: Quadrature, degree: int) -> None:
        x = quad.nodes
        outer = np.outer(quad.weights, quad.weights)
        self.benefit = np.asarray(splitting_benefit(params, x[:, None], x[None, :])) * outer
        self.mass = outer
        self.powers = np.vander(x, degree + 1, increasing=True)
        self.size = degree + 1

    def split(self, z: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        theta_a = self.powers @ z[: self.size]
        theta_b = self.powers @ z[self.size:]
        return np.asarray(2.0 * (theta_a[:, None] - theta_b[None, :]))

    def payoff(self, z: npt.NDArray[np.float64]) -> float:
        return float(-np.sum(np.cos(self.split(z)) * self.benefit))

    def probability(self, z: npt.NDArray[np.float64]) -> float:
        return float(np.sum(0.5 * (1.0 - np.cos(self.split(z))) * self.mass))

    def payoff_grad(self, z: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        s = np.sin(self.split(z)) * self.benefit
        grad_a = 2.0 * s.sum(axis=1)
        grad_b = -2.0 * s.sum(axis=0)
        return np.concatenate([self.powers.T @ grad_a, self.powers.T @ grad_b])

    def probability_grad(self, z: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        s = np.sin(self.split(z)) * self.mass
        return np.concatenate([self.powers.T @ s.sum(axis=1), -(self.powers.T @ s.sum(axis=0))])


def eval_strategy(
    params: SystemParams,
    sa: Sequence[float],
    sb: Sequence[float],
    quad: Quadrature,
) -> tuple[float, float]:
    """
    Payoff and splitting probability of polynomial angle strategies.

    A = -sum_ij cos(2 (thetaA(x_i) - thetaB(x_j))) W_ij and
    p = sum_ij (1 - cos(...)) / 2 Pi_ij.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    sa, sb : sequence of float
        Angle coefficients of the two players, equal lengths.
    quad : Quadrature
        Rule built for params.mu.

    Raises
    ------
    ValueError
        Raised if the coefficient lengths differ or the rule targets another rate.

    Returns
    -------
    tuple of float
        (payoff, splitting probability).
    """
    if len(sa) != len(sb) or len(sa) == 0:
        raise ValueError(
            f"Coefficient length mismatch: len(sa)={len(sa)}, len(sb)={len(sb)}"
        )
    if not math.isclose(quad.mu, params.mu, rel_tol=1e-12):
        raise ValueError(f"Quadrature built for mu={quad.mu}, params have mu={params.mu}")

    kernel = _Kernel(params, quad, len(sa) - 1)
    z = np.concatenate([np.asarray(sa, dtype=float), np.asarray(sb, dtype=float)])
    return kernel.payoff(z), kernel.probability(z)

# ---------------------------------------------------------------------
# Optimization
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class _Restart:
    z: npt.NDArray[np.float64]
    payoff: float
    p: float
    converged: bool


def _initial_point(rng: np.random.Generator, degree: int, mu: float) -> npt.NDArray[np.float64]:
    # Constant uniform on [-pi/2, pi/2]; degree-k coefficient uniform on [-0.3, 0.3] 0.1^(k-1) mu^k.
    k = np.arange(1, degree + 1, dtype=float)
    scale = INITIAL_SLOPE * INITIAL_DECAY ** (k - 1.0) * mu ** k
    parts = []
    for _ in range(2):
        parts.append([rng.uniform(-0.5 * math.pi, 0.5 * math.pi)])
        parts.append(rng.uniform(-1.0, 1.0, size=degree) * scale)
    return np.concatenate(parts)


def _run_restart(
    kernel: _Kernel,
    check: _Kernel,
    p_target: float,
    x0: npt.NDArray[np.float64],
    maxiter: int,
) -> _Restart:
    """One SLSQP run, projected onto the constraint and re-evaluated on the finer rule."""
    with _SLSQP_LOCK:
        result = minimize(
            lambda z: (-kernel.payoff(z), -kernel.payoff_grad(z)),
            x0,
            jac=True,
            method="SLSQP",
            constraints=[{
                "type": "eq",
                "fun": lambda z: kernel.probability(z) - p_target,
                "jac": kernel.probability_grad,
            }],
            options={"ftol": 1e-12, "maxiter": maxiter},
        )
    z = np.asarray(result.x, dtype=float)
    if not np.all(np.isfinite(z)):
        return _Restart(z=z, payoff=math.nan, p=math.nan, converged=False)

    z = _project(kernel, p_target, z)
    payoff, p = kernel.payoff(z), kernel.probability(z)
    if not (math.isfinite(payoff) and math.isfinite(p)):
        return _Restart(z=z, payoff=math.nan, p=math.nan, converged=False)

    return _Restart(z=z, payoff=payoff, p=p, converged=_stable(kernel, check, z))


def _stable(kernel: _Kernel, check: _Kernel, z: npt.NDArray[np.float64]) -> bool:
    """Payoff and p agree within CONVERGENCE_TOLERANCE on both rules."""
    return (
        abs(check.payoff(z) - kernel.payoff(z)) <= CONVERGENCE_TOLERANCE
        and abs(check.probability(z) - kernel.probability(z)) <= CONVERGENCE_TOLERANCE
    )


def _project(
    kernel: _Kernel,
    p_target: float,
    z: npt.NDArray[np.float64],
    steps: int = 20,
) -> npt.NDArray[np.float64]:
    """Gauss-Newton steps along the constraint gradient onto p(z) = p_target."""
    for _ in range(steps):
        residual = kernel.probability(z) - p_target
        if abs(residual) <= 1e-14:
            break
        grad = kernel.probability_grad(z)
        norm = float(grad @ grad)
        if norm == 0.0:
            break
        z = z - residual * grad / norm
    return z


def optimize_quantum(
    params: SystemParams,
    p_target: float,
    degree: int = DEFAULT_DEGREE,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    quad_order: int = DEFAULT_QUAD_ORDER,
    tolerance: float = DEFAULT_TOLERANCE,
    maxiter: int = DEFAULT_MAXITER,
    threads: int = 1,
) -> QuantumStrategy:
    """
    Maximize the payoff of polynomial angle strategies at a fixed splitting probability.

    Restart r starts from a point drawn with its own generator spawned from
    SeedSequence(seed): constants uniform on [-pi/2, pi/2] and the degree-k
    coefficients uniform on [-0.3, 0.3] 0.1^(k-1) mu^k. Each result is re-evaluated
    with twice the quadrature order; restarts whose payoff or p moves by more than
    1e-6, or that are not finite, are discarded. The best feasible restart that
    remains wins; ties go to the lower index.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    p_target : float
        Target splitting probability in (0, 1).
    degree : int, optional, default=2
        Polynomial degree of the angle functions.
    restarts : int, optional, default=20
        Number of random restarts, at least 1.
    seed : int, optional, default=1
        Master seed.
    quad_order : int, optional, default=60
        Gauss-Laguerre order of the optimization; the check uses twice this.
    tolerance : float, optional, default=1e-8
        Feasibility tolerance on |p - p_target|.
    maxiter : int, optional, default=500
        SLSQP iteration limit per restart.
    threads : int, optional, default=1
        Worker threads for the restarts; results do not depend on it. SLSQP calls
        hold a module lock, so only projection and the finer-rule check overlap.

    Raises
    ------
    ValueError
        Raised for p_target outside (0, 1), negative degree or restarts < 1.

    Returns
    -------
    QuantumStrategy
        Best feasible converged restart. Otherwise the converged (or, failing that,
        finite) restart closest to feasibility, with feasible=False.
    """
    if not 0.0 < p_target < 1.0:
        raise ValueError(f"Target splitting probability must lie in (0, 1), got {p_target}")
    if degree < 0:
        raise ValueError(f"Polynomial degree must be non-negative, got {degree}")
    if restarts < 1:
        raise ValueError(f"Number of restarts must be at least 1, got {restarts}")

    kernel = _Kernel(params, gauss_laguerre(quad_order, params.mu), degree)
    check = _Kernel(params, gauss_laguerre(2 * quad_order, params.mu), degree)
    starts = [
        _initial_point(np.random.default_rng(child), degree, params.mu)
        for child in np.random.SeedSequence(seed).spawn(restarts)
    ]

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        outcomes = list(
            pool.map(lambda x0: _run_restart(kernel, check, p_target, x0, maxiter), starts)
        )

    best: int | None = None
    for i, run in enumerate(outcomes):
        feasible = abs(run.p - p_target) <= tolerance
        logger.debug(
            "Restart %d: payoff=%.8f p=%.10f feasible=%s converged=%s",
            i, run.payoff, run.p, feasible, run.converged,
        )
        if run.converged and feasible and (best is None or run.payoff > outcomes[best].payoff):
            best = i

    discarded = sum(not run.converged for run in outcomes)
    if discarded:
        logger.info("Discarded %d of %d restarts at p=%.4f", discarded, restarts, p_target)

    feasible = best is not None
    if best is None:
        logger.warning("No converged restart met the split constraint at p=%.4f", p_target)
        candidates = [i for i, run in enumerate(outcomes) if run.converged]
        candidates = candidates or [i for i, run in enumerate(outcomes) if math.isfinite(run.p)]
        if candidates:
            best = min(candidates, key=lambda i: abs(outcomes[i].p - p_target))

    if best is None:
        z = _project(kernel, p_target, starts[0])
        chosen = _Restart(z=z, payoff=kernel.payoff(z), p=kernel.probability(z), converged=False)
    else:
        chosen = outcomes[best]

    n = degree + 1
    strategy = QuantumStrategy(
        degree=degree,
        coeffs_a=tuple(float(c) for c in chosen.z[:n]),
        coeffs_b=tuple(float(c) for c in chosen.z[n:]),
        payoff=chosen.payoff,
        p_achieved=chosen.p,
        p_target=p_target,
        constraint_residual=abs(chosen.p - p_target),
        restarts_used=restarts,
        seed=seed,
        feasible=feasible,
        restarts_discarded=discarded,
    )
    logger.info(
        "Quantum p=%.4f payoff=%.6f residual=%.2e feasible=%s",
        p_target, strategy.payoff, strategy.constraint_residual, strategy.feasible,
    )
    return strategy

# ---------------------------------------------------------------------
# Outcome Sampling
# ---------------------------------------------------------------------

def sample_correlated_outcomes(
    theta_a: float | npt.ArrayLike,
    theta_b: float | npt.ArrayLike,
    rng: np.random.Generator,
) -> tuple[Any, Any]:
    """
    Draw joint +-1 outcomes with uniform marginals and E[oA oB] = cos(2 (thetaA - thetaB)).

    oA is a fair sign; oB equals oA with probability (1 + cos(2 Delta)) / 2.

    Parameters
    ----------
    theta_a, theta_b : float or array_like
        Measurement angles, broadcast against each other.
    rng : np.random.Generator
        Source of randomness.

    Returns
    -------
    tuple
        (oA, oB) as ints for scalar angles, int arrays otherwise.
    """
    agree = 0.5 * (1.0 + correlation(theta_a, theta_b))
    shape = np.shape(agree)
    o_a = np.where(rng.random(shape) < 0.5, 1, -1)
    o_b = np.where(rng.random(shape) < agree, o_a, -o_a)
    if o_a.ndim == 0:
        return int(o_a), int(o_b)
    return o_a, o_b
