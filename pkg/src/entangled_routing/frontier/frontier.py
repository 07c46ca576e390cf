"""
frontier.py

Waiting-time/throughput frontier of the routing problem.

For every splitting probability on the grid the frontier pairs the oracle payoff
A*(p) with the certified classical bound, its concave envelope across the support
grid, the best quantum payoff found and the normalized baseline throughput. The
waiting-time gaps to the oracle follow as (A* - A) / 2.

Classes
-------
FrontierPoint : One row of the frontier table.

Functions
---------
compute_frontier   : Assemble the frontier for a run configuration.
summarize_frontier : Advantage interval, maximum gap and failed points.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

from entangled_routing.model import delta_wq
from entangled_routing.strategies import (
    CertifiedBound,
    concave_envelope,
    oracle_payoff,
)
from entangled_routing.throughput import normalized_throughput

from .config import RunConfig

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
GRID_DIGITS = 12

# ---------------------------------------------------------------------
# Frontier Point
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class FrontierPoint:
    """
    Frontier values at one splitting probability.

    Attributes
    ----------
    p : float
        Splitting probability.
    a_star, a_star_se : float
        Monte Carlo oracle payoff and its standard error.
    a_cl_det_upper : float
        Certified bound on deterministic classical strategies.
    a_cl_sr_upper : float
        Concave envelope of the certified bounds (shared randomness).
    a_quantum_lower : float
        Achieved quantum payoff.
    dwq_classical, dwq_quantum : float
        (a_star - a) / 2 for the classical bound and the quantum payoff.
    advantage_certified : bool
        Feasible quantum payoff strictly above the shared-randomness bound.
    throughput_normalized : float
        Baseline throughput divided by phi_max (1 - rho).
    certificate_valid : bool
        Validity of the deterministic certificate at p.
    quantum_feasible : bool
        Whether the quantum optimizer met the split constraint.
    error : str
        Error message of a failed point, empty otherwise.
    """
    p: float
    a_star: float
    a_star_se: float
    a_cl_det_upper: float
    a_cl_sr_upper: float
    a_quantum_lower: float
    dwq_classical: float
    dwq_quantum: float
    advantage_certified: bool
    throughput_normalized: float
    certificate_valid: bool = True
    quantum_feasible: bool = True
    error: str = ""

    @property
    def gap(self) -> float:
        """Waiting-time reduction dwq_classical - dwq_quantum."""
        return self.dwq_classical - self.dwq_quantum


def _failed_point(p: float, throughput: float, message: str) -> FrontierPoint:
    nan = math.nan
    return FrontierPoint(
        p=p,
        a_star=nan,
        a_star_se=nan,
        a_cl_det_upper=nan,
        a_cl_sr_upper=nan,
        a_quantum_lower=nan,
        dwq_classical=nan,
        dwq_quantum=nan,
        advantage_certified=False,
        throughput_normalized=throughput,
        certificate_valid=False,
        quantum_feasible=False,
        error=message,
    )

# ---------------------------------------------------------------------
# Frontier Assembly
# ---------------------------------------------------------------------

def _certify_support(config: RunConfig) -> dict[float, CertifiedBound | str]:
    """Certified bounds on the union of the frontier and envelope grids."""
    params = config.system.params()
    support = sorted({round(p, GRID_DIGITS) for p in (*config.p_grid, *config.envelope_grid)})

    def certify(p: float) -> CertifiedBound | str:
        try:
            return config.classical.certify(params, p)
        except ValueError as exc:
            logger.warning("Classical certificate failed at p=%.4f: %s", p, exc)
            return str(exc)

    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        results = list(pool.map(certify, support))
    return dict(zip(support, results))


def _frontier_point(
    config: RunConfig,
    p: float,
    cert: CertifiedBound | str,
    sr_upper: float,
) -> FrontierPoint:
    params = config.system.params()
    throughput = normalized_throughput(params, config.warmup.model(), p)
    if isinstance(cert, str):
        return _failed_point(p, throughput, cert)

    try:
        oracle = oracle_payoff(params, p, n=config.oracle.n_samples, seed=config.oracle.seed)
        quantum = config.quantum.optimize(params, p)
        tolerance = 1e-6 + 3.0 * oracle.std_err
        dwq_cl = delta_wq(oracle.a_star, sr_upper, tolerance=tolerance)
        dwq_qu = delta_wq(oracle.a_star, quantum.payoff, tolerance=tolerance)
    except ValueError as exc:
        logger.warning("Frontier point p=%.4f failed: %s", p, exc)
        return _failed_point(p, throughput, str(exc))

    return FrontierPoint(
        p=p,
        a_star=oracle.a_star,
        a_star_se=oracle.std_err,
        a_cl_det_upper=cert.bound,
        a_cl_sr_upper=sr_upper,
        a_quantum_lower=quantum.payoff,
        dwq_classical=dwq_cl,
        dwq_quantum=dwq_qu,
        advantage_certified=quantum.feasible and quantum.payoff > sr_upper,
        throughput_normalized=throughput,
        certificate_valid=cert.valid,
        quantum_feasible=quantum.feasible,
    )


def compute_frontier(config: RunConfig) -> list[FrontierPoint]:
    """
    Compute the frontier on config.p_grid.

    Certified bounds are computed on the union of p_grid and envelope_grid; their
    concave envelope supplies the shared-randomness bound. Oracle and quantum
    values are computed per p in a worker pool; a point that raises is recorded
    with its error message and the run continues.

    Parameters
    ----------
    config : RunConfig
        Run configuration.

    Returns
    -------
    list of FrontierPoint
        One point per p in p_grid, in grid order.
    """
    logger.info("Computing frontier on %d points", len(config.p_grid))
    certs = _certify_support(config)

    envelope_support = [(p, c.bound) for p, c in certs.items() if not isinstance(c, str)]
    grid = [round(p, GRID_DIGITS) for p in config.p_grid]
    sr: dict[float, float] = {}
    if len(envelope_support) >= 2:
        lo, hi = envelope_support[0][0], envelope_support[-1][0]
        sr = dict(concave_envelope(envelope_support, at=[p for p in grid if lo <= p <= hi]))

    def run(p: float) -> FrontierPoint:
        cert = certs[p]
        if p not in sr and not isinstance(cert, str):
            cert = f"No envelope support around p={p}"
        return _frontier_point(config, p, cert, sr.get(p, math.nan))

    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        points = list(pool.map(run, grid))

    for point in points:
        logger.info(
            "p=%.3f A*=%.5f cl_sr=%.5f qu=%.5f advantage=%s",
            point.p, point.a_star, point.a_cl_sr_upper, point.a_quantum_lower,
            point.advantage_certified,
        )
    return points

# ---------------------------------------------------------------------
# Summary
# ---------------------------------------------------------------------

def summarize_frontier(points: list[FrontierPoint]) -> dict[str, Any]:
    """
    Summary of a frontier for the JSON report.

    The advantage interval is [smallest, largest] grid p with a certified
    advantage; its endpoints are only as fine as the grid.

    Returns
    -------
    dict
        schema_version, advantage_interval, max_gap, argmax_p,
        relative_reduction, invalid_certificates, infeasible_quantum, failed_p.
    """
    advantage = [pt.p for pt in points if pt.advantage_certified]
    usable = [pt for pt in points if not pt.error]

    summary: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "n_points": len(points),
        "advantage_interval": [min(advantage), max(advantage)] if advantage else None,
        "advantage_interval_note": "endpoints limited by grid resolution",
        "max_gap": None,
        "argmax_p": None,
        "relative_reduction": None,
        "invalid_certificates": [pt.p for pt in points if not pt.error and not pt.certificate_valid],
        "infeasible_quantum": [pt.p for pt in points if not pt.error and not pt.quantum_feasible],
        "failed_p": [pt.p for pt in points if pt.error],
    }

    if usable:
        best = max(usable, key=lambda pt: pt.gap)
        summary["max_gap"] = best.gap
        summary["argmax_p"] = best.p
        if best.dwq_classical > 0.0:
            summary["relative_reduction"] = best.gap / best.dwq_classical
    return summary
