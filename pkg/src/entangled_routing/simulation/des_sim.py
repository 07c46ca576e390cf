"""
des_sim.py

Discrete-event simulation of the two-server system under a routing policy.

Pairs of customers arrive as a Poisson process. Each customer needs an Exp(mu)
service; the policy routes both customers of a pair, and when a pair is bunched a
fair coin decides which of the two is served first. Servers are FCFS. While idle a
server works on baseline tasks and is credited cumulative_output of the idle
length when the next batch preempts it.

Classes
-------
SimStats : Post-warm-up statistics with batch-means standard errors.

Functions
---------
simulate         : Run one simulation.
compare_policies : Run several policies and collect their statistics in a table.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import heapq
import logging
import math
from collections import deque
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt
import pandas as pd

from entangled_routing.model import SystemParams
from entangled_routing.throughput import WarmupModel

from .policies import PolicySpec, route_pairs

logger = logging.getLogger(__name__)

DEFAULT_PAIRS = 500_000
DEFAULT_BATCHES = 32
DEFAULT_SEED = 1

_ARRIVAL = 0
_DEPARTURE = 1

# ---------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class SimStats:
    """
    Statistics of one simulation run over the post-warm-up pairs.

    Attributes
    ----------
    policy : str
        Label of the simulated policy.
    n_pairs, warmup_discard, seed : int
        Run size, number of discarded leading pairs and master seed.
    mean_wq, mean_wq_se : float
        Mean waiting time per customer and its standard error.
    split_fraction, split_fraction_se : float
        Fraction of pairs sent to different servers.
    per_server_load, per_server_load_se : tuple of float
        Offered work per unit time at servers 0 and 1.
    baseline_throughput, baseline_throughput_se : float
        Baseline output per unit time per server.
    mean_idle, mean_idle_se, mean_busy, mean_busy_se : float
        Mean idle and busy period lengths.
    """
    policy: str
    n_pairs: int
    warmup_discard: int
    seed: int
    mean_wq: float
    mean_wq_se: float
    split_fraction: float
    split_fraction_se: float
    per_server_load: tuple[float, float]
    per_server_load_se: tuple[float, float]
    baseline_throughput: float
    baseline_throughput_se: float
    mean_idle: float
    mean_idle_se: float
    mean_busy: float
    mean_busy_se: float

    def to_row(self) -> dict[str, Any]:
        """Flat mapping for tabular output."""
        return {
            "policy": self.policy,
            "n_pairs": self.n_pairs,
            "warmup_discard": self.warmup_discard,
            "seed": self.seed,
            "mean_wq": self.mean_wq,
            "mean_wq_se": self.mean_wq_se,
            "split_fraction": self.split_fraction,
            "split_fraction_se": self.split_fraction_se,
            "load_0": self.per_server_load[0],
            "load_1": self.per_server_load[1],
            "load_0_se": self.per_server_load_se[0],
            "load_1_se": self.per_server_load_se[1],
            "baseline_throughput": self.baseline_throughput,
            "baseline_throughput_se": self.baseline_throughput_se,
            "mean_idle": self.mean_idle,
            "mean_idle_se": self.mean_idle_se,
            "mean_busy": self.mean_busy,
            "mean_busy_se": self.mean_busy_se,
        }


def _batch_se(values: npt.NDArray[np.float64]) -> float:
    return float(np.std(values, ddof=1) / math.sqrt(values.size))


def _ratio_by_batch(
    labels: npt.NDArray[np.int64],
    numerators: npt.NDArray[np.float64],
    denominators: npt.NDArray[np.float64],
    n_batches: int,
) -> npt.NDArray[np.float64]:
    sums = np.bincount(labels, weights=numerators, minlength=n_batches)
    return np.asarray(sums / denominators)

# ---------------------------------------------------------------------
# Event Loop
# ---------------------------------------------------------------------

@dataclass
class _Trace:
    """Raw per-customer and per-period records of one run."""
    waits: npt.NDArray[np.float64]
    idle_end: list[int] = field(default_factory=list)
    idle_length: list[float] = field(default_factory=list)
    busy_start: list[int] = field(default_factory=list)
    busy_length: list[float] = field(default_factory=list)


def _run_events(
    arrival_times: npt.NDArray[np.float64],
    services: npt.NDArray[np.float64],
    servers: npt.NDArray[np.int64],
    second_first: npt.NDArray[np.bool_],
) -> _Trace:
    """
    FCFS event loop for two servers.

    arrival_times holds one more entry than there are pairs; the extra arrival
    closes the horizon and only ends idle periods. Idle periods are indexed by
    the arrival that ends them, busy periods by the arrival that starts them.
    """
    n_pairs = services.shape[0]
    trace = _Trace(waits=np.full((n_pairs, 2), np.nan))

    queues: list[deque[tuple[int, int]]] = [deque(), deque()]
    busy = [False, False]
    idle_since = [0.0, 0.0]
    busy_since = [0.0, 0.0]
    opened_by = [0, 0]

    events: list[tuple[float, int, int, int]] = [(float(arrival_times[0]), 0, _ARRIVAL, 0)]
    seq = 1

    def start_next(server: int, now: float) -> None:
        nonlocal seq
        pair, customer = queues[server].popleft()
        trace.waits[pair, customer] = now - arrival_times[pair]
        heapq.heappush(events, (now + services[pair, customer], seq, _DEPARTURE, server))
        seq += 1

    while events:
        now, _, kind, index = heapq.heappop(events)

        if kind == _DEPARTURE:
            if queues[index]:
                start_next(index, now)
            else:
                busy[index] = False
                idle_since[index] = now
                trace.busy_start.append(opened_by[index])
                trace.busy_length.append(now - busy_since[index])
            continue

        if index == n_pairs:
            for server in (0, 1):
                if not busy[server]:
                    trace.idle_end.append(index)
                    trace.idle_length.append(now - idle_since[server])
            continue

        order = (1, 0) if second_first[index] else (0, 1)
        for customer in order:
            server = int(servers[index, customer])
            queues[server].append((index, customer))
            if not busy[server]:
                busy[server] = True
                trace.idle_end.append(index)
                trace.idle_length.append(now - idle_since[server])
                busy_since[server] = now
                opened_by[server] = index
                start_next(server, now)

        heapq.heappush(events, (float(arrival_times[index + 1]), seq, _ARRIVAL, index + 1))
        seq += 1

    return trace

# ---------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------

def simulate(
    params: SystemParams,
    policy: PolicySpec,
    wm: WarmupModel,
    n_pairs: int = DEFAULT_PAIRS,
    warmup_discard: int | None = None,
    seed: int = DEFAULT_SEED,
    n_batches: int = DEFAULT_BATCHES,
) -> SimStats:
    """
    Simulate the two-server system under a routing policy.

    Five independent streams are spawned from SeedSequence(seed) for arrivals,
    service times, policy randomness, within-pair ordering and load-balancing
    flips, so changing the policy never perturbs arrivals or services.

    Parameters
    ----------
    params : SystemParams
        System parameters, already validated as stable.
    policy : PolicySpec
        Routing policy.
    wm : WarmupModel
        Warm-up model for baseline output during idle periods.
    n_pairs : int, optional, default=500000
        Number of arriving pairs.
    warmup_discard : int, optional
        Leading pairs excluded from statistics; defaults to n_pairs // 10.
    seed : int, optional, default=1
        Master seed.
    n_batches : int, optional, default=32
        Number of batches for batch-means standard errors.

    Raises
    ------
    ValueError
        Raised if n_pairs < 10 * warmup_discard, n_batches < 2 or too few pairs
        remain for the requested batches.

    Returns
    -------
    SimStats
        Statistics over the post-warm-up pairs.
    """
    if warmup_discard is None:
        warmup_discard = n_pairs // 10
    if warmup_discard < 0:
        raise ValueError(f"warmup_discard must be non-negative, got {warmup_discard}")
    if n_pairs < 10 * warmup_discard:
        raise ValueError(
            f"n_pairs must be at least 10 * warmup_discard, got n_pairs={n_pairs}, "
            f"warmup_discard={warmup_discard}"
        )
    if n_batches < 2:
        raise ValueError(f"n_batches must be at least 2, got {n_batches}")
    if n_pairs - warmup_discard < 2 * n_batches:
        raise ValueError(
            f"Too few pairs after warm-up ({n_pairs - warmup_discard}) for {n_batches} batches"
        )

    arrivals_rng, services_rng, policy_rng, ordering_rng, flip_rng = (
        np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(5)
    )
    arrival_times = np.cumsum(arrivals_rng.exponential(1.0 / params.lam, size=n_pairs + 1))
    services = services_rng.exponential(1.0 / params.mu, size=(n_pairs, 2))
    servers = route_pairs(policy, params, services[:, 0], services[:, 1], policy_rng, flip_rng)
    second_first = ordering_rng.random(n_pairs) < 0.5

    logger.info("Simulating %s with %d pairs (seed=%d)", policy.label, n_pairs, seed)
    trace = _run_events(arrival_times, services, servers, second_first)

    # Batches of consecutive post-warm-up pairs; batch j spans arrivals [lo_j, hi_j).
    lo = np.array([chunk[0] for chunk in np.array_split(np.arange(warmup_discard, n_pairs), n_batches)])
    hi = np.append(lo[1:], n_pairs)
    duration = arrival_times[hi] - arrival_times[lo]
    pair_count = (hi - lo).astype(float)

    kept = slice(warmup_discard, n_pairs)
    pair_label = np.searchsorted(lo, np.arange(warmup_discard, n_pairs), side="right") - 1

    # Waiting time and split fraction
    wait_sum = trace.waits[kept].sum(axis=1)
    wq_batches = _ratio_by_batch(pair_label, wait_sum, 2.0 * pair_count, n_batches)
    split = (servers[kept, 0] != servers[kept, 1]).astype(float)
    split_batches = _ratio_by_batch(pair_label, split, pair_count, n_batches)

    # Offered work per server
    load_batches = [
        _ratio_by_batch(
            pair_label,
            np.where(servers[kept] == server, services[kept], 0.0).sum(axis=1),
            duration,
            n_batches,
        )
        for server in (0, 1)
    ]
    window = arrival_times[n_pairs] - arrival_times[warmup_discard]
    loads = tuple(
        float(np.where(servers[kept] == server, services[kept], 0.0).sum() / window)
        for server in (0, 1)
    )

    # Idle periods ending in (lo_j, hi_j] and the busy periods they open
    idle_end = np.asarray(trace.idle_end, dtype=np.int64)
    idle_length = np.asarray(trace.idle_length, dtype=float)
    idle_mask = idle_end > warmup_discard
    idle_label = np.searchsorted(lo, idle_end[idle_mask], side="left") - 1
    output = wm.cumulative(idle_length[idle_mask])

    throughput_batches = _ratio_by_batch(idle_label, output, 2.0 * duration, n_batches)
    idle_counts = np.bincount(idle_label, minlength=n_batches).astype(float)
    idle_batches = _ratio_by_batch(idle_label, idle_length[idle_mask], idle_counts, n_batches)

    busy_start = np.asarray(trace.busy_start, dtype=np.int64)
    busy_length = np.asarray(trace.busy_length, dtype=float)
    busy_mask = busy_start > warmup_discard
    busy_label = np.searchsorted(lo, busy_start[busy_mask], side="left") - 1
    busy_counts = np.bincount(busy_label, minlength=n_batches).astype(float)
    busy_batches = _ratio_by_batch(busy_label, busy_length[busy_mask], busy_counts, n_batches)

    stats = SimStats(
        policy=policy.label,
        n_pairs=n_pairs,
        warmup_discard=warmup_discard,
        seed=seed,
        mean_wq=float(wait_sum.sum() / (2.0 * (n_pairs - warmup_discard))),
        mean_wq_se=_batch_se(wq_batches),
        split_fraction=float(split.mean()),
        split_fraction_se=_batch_se(split_batches),
        per_server_load=(loads[0], loads[1]),
        per_server_load_se=(_batch_se(load_batches[0]), _batch_se(load_batches[1])),
        baseline_throughput=float(output.sum() / (2.0 * window)),
        baseline_throughput_se=_batch_se(throughput_batches),
        mean_idle=float(idle_length[idle_mask].mean()),
        mean_idle_se=_batch_se(idle_batches),
        mean_busy=float(busy_length[busy_mask].mean()),
        mean_busy_se=_batch_se(busy_batches),
    )
    logger.info(
        "%s: Wq=%.4f (se %.4f), split=%.4f, throughput=%.5f",
        stats.policy, stats.mean_wq, stats.mean_wq_se, stats.split_fraction,
        stats.baseline_throughput,
    )
    return stats

# ---------------------------------------------------------------------
# Policy Comparison
# ---------------------------------------------------------------------

def compare_policies(
    params: SystemParams,
    wm: WarmupModel,
    policies: Sequence[PolicySpec],
    n_pairs: int = DEFAULT_PAIRS,
    seed: int = DEFAULT_SEED,
    crn: bool = False,
    threads: int = 1,
    warmup_discard: int | None = None,
) -> pd.DataFrame:
    """
    Simulate several policies and return one row of statistics per policy.

    Parameters
    ----------
    params : SystemParams
        System parameters.
    wm : WarmupModel
        Warm-up model.
    policies : sequence of PolicySpec
        Policies to compare, at least one.
    n_pairs : int, optional, default=500000
        Pairs per run.
    seed : int, optional, default=1
        Master seed.
    crn : bool, optional, default=False
        Reuse the master seed for every policy (common random numbers) instead of
        giving each policy its own spawned seed.
    threads : int, optional, default=1
        Worker threads; rows keep the input order regardless.
    warmup_discard : int, optional
        Passed to simulate.

    Raises
    ------
    ValueError
        Raised if no policy is given.

    Returns
    -------
    pd.DataFrame
        One row per policy, columns as in SimStats.to_row.
    """
    if not policies:
        raise ValueError("At least one policy is required")

    if crn:
        seeds = [seed] * len(policies)
    else:
        seeds = [
            int(child.generate_state(1)[0])
            for child in np.random.SeedSequence(seed).spawn(len(policies))
        ]

    def run(item: tuple[PolicySpec, int]) -> SimStats:
        spec, run_seed = item
        return simulate(params, spec, wm, n_pairs=n_pairs, warmup_discard=warmup_discard, seed=run_seed)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(run, zip(policies, seeds)))

    return pd.DataFrame([stats.to_row() for stats in results])
