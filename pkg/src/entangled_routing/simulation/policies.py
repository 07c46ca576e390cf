"""
policies.py

Routing policies for customer pairs and their vectorized routing decisions.

Every policy produces one +-1 output per customer; +1 sends the customer to
server 0 and -1 to server 1. Equal outputs bunch the pair, different outputs
split it. A shared fair bit optionally flips both outputs so that each server
sees the same arrival stream.

Classes
-------
PolicySpec : Kind and parameters of a routing policy.

Functions
---------
route_pairs : Server index of both customers of every pair.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from entangled_routing.model import SystemParams, splitting_benefit
from entangled_routing.strategies import angle_polynomial, sample_correlated_outcomes, sigma_star

PolicyKind = Literal[
    "always_split",
    "always_bunch",
    "bernoulli",
    "oracle_threshold",
    "classical_thresholds",
    "quantum",
]
POLICY_KINDS: tuple[str, ...] = (
    "always_split",
    "always_bunch",
    "bernoulli",
    "oracle_threshold",
    "classical_thresholds",
    "quantum",
)

# ---------------------------------------------------------------------
# Policy Specification
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class PolicySpec:
    """
    Routing policy.

    Attributes
    ----------
    kind : str
        One of always_split, always_bunch, bernoulli, oracle_threshold,
        classical_thresholds or quantum.
    p : float, optional
        Splitting probability of a bernoulli policy.
    tau : float, optional
        Benefit threshold of an oracle_threshold policy; pairs with w >= tau split.
    thresholds : tuple of float, optional
        Service-time thresholds (thetaA, thetaB) of classical_thresholds.
    coeffs_a, coeffs_b : tuple of float, optional
        Angle polynomial coefficients of a quantum policy.
    load_balance_flip : bool, default=True
        Flip both outputs with a shared fair bit.
    """
    kind: PolicyKind
    p: float | None = None
    tau: float | None = None
    thresholds: tuple[float, float] | None = None
    coeffs_a: tuple[float, ...] | None = None
    coeffs_b: tuple[float, ...] | None = None
    load_balance_flip: bool = True

    def __post_init__(self) -> None:
        if self.kind not in POLICY_KINDS:
            raise ValueError(
                f"Unknown policy kind '{self.kind}'. Allowed kinds: {', '.join(POLICY_KINDS)}"
            )

        if self.kind == "bernoulli":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError(f"bernoulli policy requires p in [0, 1], got p={self.p}")
        elif self.kind == "oracle_threshold":
            if self.tau is None or math.isnan(self.tau) or self.tau < 0.0:
                raise ValueError(f"oracle_threshold policy requires tau >= 0, got tau={self.tau}")
        elif self.kind == "classical_thresholds":
            if self.thresholds is None or len(self.thresholds) != 2:
                raise ValueError("classical_thresholds policy requires two thresholds")
            if any(math.isnan(t) or t < 0.0 for t in self.thresholds):
                raise ValueError(f"Thresholds must be non-negative, got {self.thresholds}")
        elif self.kind == "quantum":
            if not self.coeffs_a or not self.coeffs_b:
                raise ValueError("quantum policy requires coeffs_a and coeffs_b")
            if len(self.coeffs_a) != len(self.coeffs_b):
                raise ValueError(
                    f"Coefficient length mismatch: {len(self.coeffs_a)} vs {len(self.coeffs_b)}"
                )

    @classmethod
    def always_split(cls, load_balance_flip: bool = True) -> "PolicySpec":
        return cls(kind="always_split", load_balance_flip=load_balance_flip)

    @classmethod
    def always_bunch(cls, load_balance_flip: bool = True) -> "PolicySpec":
        return cls(kind="always_bunch", load_balance_flip=load_balance_flip)

    @classmethod
    def bernoulli(cls, p: float, load_balance_flip: bool = True) -> "PolicySpec":
        return cls(kind="bernoulli", p=p, load_balance_flip=load_balance_flip)

    @classmethod
    def oracle_threshold(cls, tau: float, load_balance_flip: bool = True) -> "PolicySpec":
        return cls(kind="oracle_threshold", tau=tau, load_balance_flip=load_balance_flip)

    @classmethod
    def classical_thresholds(
        cls,
        theta_a: float,
        theta_b: float,
        load_balance_flip: bool = True,
    ) -> "PolicySpec":
        return cls(
            kind="classical_thresholds",
            thresholds=(float(theta_a), float(theta_b)),
            load_balance_flip=load_balance_flip,
        )

    @classmethod
    def quantum(
        cls,
        coeffs_a: Sequence[float],
        coeffs_b: Sequence[float],
        load_balance_flip: bool = True,
    ) -> "PolicySpec":
        return cls(
            kind="quantum",
            coeffs_a=tuple(float(c) for c in coeffs_a),
            coeffs_b=tuple(float(c) for c in coeffs_b),
            load_balance_flip=load_balance_flip,
        )

    @property
    def label(self) -> str:
        """Short human-readable name used in tables."""
        if self.kind == "bernoulli":
            name = f"bernoulli(p={self.p:g})"
        elif self.kind == "oracle_threshold":
            name = f"oracle_threshold(tau={self.tau:.6g})"
        elif self.kind == "classical_thresholds" and self.thresholds is not None:
            name = f"classical_thresholds({self.thresholds[0]:.6g}, {self.thresholds[1]:.6g})"
        elif self.kind == "quantum" and self.coeffs_a is not None:
            name = f"quantum(degree={len(self.coeffs_a) - 1})"
        else:
            name = self.kind
        return name if self.load_balance_flip else f"{name}[no-flip]"

# ---------------------------------------------------------------------
# Routing
# ---------------------------------------------------------------------

def _split_outputs(split: npt.NDArray[np.bool_]) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    o_a = np.ones(split.shape, dtype=np.int64)
    return o_a, np.where(split, -1, 1)


def route_pairs(
    spec: PolicySpec,
    params: SystemParams,
    x1: npt.NDArray[np.float64],
    x2: npt.NDArray[np.float64],
    policy_rng: np.random.Generator,
    flip_rng: np.random.Generator,
) -> npt.NDArray[np.int64]:
    """
    Route every pair according to a policy.

    Parameters
    ----------
    spec : PolicySpec
        Routing policy.
    params : SystemParams
        System parameters, used by the oracle policy.
    x1, x2 : np.ndarray
        Service times of the first and second customer of each pair.
    policy_rng : np.random.Generator
        Stream for policy randomness (bernoulli coins, quantum outcomes).
    flip_rng : np.random.Generator
        Stream for the shared load-balancing bit.

    Returns
    -------
    np.ndarray
        Integer array of shape (n, 2) with the server (0 or 1) of each customer.
    """
    n = x1.shape[0]

    if spec.kind == "always_split":
        o_a, o_b = _split_outputs(np.ones(n, dtype=bool))
    elif spec.kind == "always_bunch":
        o_a, o_b = _split_outputs(np.zeros(n, dtype=bool))
    elif spec.kind == "bernoulli":
        o_a, o_b = _split_outputs(policy_rng.random(n) < spec.p)
    elif spec.kind == "oracle_threshold":
        assert spec.tau is not None
        w = np.asarray(splitting_benefit(params, x1, x2))
        o_a, o_b = _split_outputs(np.asarray(sigma_star(spec.tau, w)) == -1)
    elif spec.kind == "classical_thresholds":
        assert spec.thresholds is not None
        o_a = np.where(x1 < spec.thresholds[0], 1, -1)
        o_b = np.where(x2 < spec.thresholds[1], 1, -1)
    else:
        assert spec.coeffs_a is not None and spec.coeffs_b is not None
        o_a, o_b = sample_correlated_outcomes(
            angle_polynomial(spec.coeffs_a, x1),
            angle_polynomial(spec.coeffs_b, x2),
            policy_rng,
        )

    if spec.load_balance_flip:
        flip = np.where(flip_rng.random(n) < 0.5, 1, -1)
        o_a, o_b = o_a * flip, o_b * flip

    return np.column_stack([np.where(o_a == 1, 0, 1), np.where(o_b == 1, 0, 1)]).astype(np.int64)
