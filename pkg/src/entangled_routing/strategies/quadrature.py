"""
quadrature.py

Gauss-Laguerre quadrature for expectations over exponentially distributed service times.

Classes
-------
Quadrature : Nodes and probability weights of a rule targeting Exp(mu).

Functions
---------
gauss_laguerre : Build the rule by the Golub-Welsch eigenvalue method.
"""

# ---------------------------------------------------------------------
# Imports
# ---------------------------------------------------------------------
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.linalg import eigh_tridiagonal

MAX_STABLE_ORDER = 120

# ---------------------------------------------------------------------
# Quadrature Rule
# ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Quadrature:
    """
    Quadrature rule with E[f(X)] ~ sum_i weights[i] f(nodes[i]) for X ~ Exp(mu).

    Attributes
    ----------
    nodes : np.ndarray
        Abscissae in time units, all positive.
    weights : np.ndarray
        Probability weights summing to one.
    mu : float
        Rate of the exponential distribution the rule targets.
    order : int
        Number of nodes.
    """
    nodes: npt.NDArray[np.float64]
    weights: npt.NDArray[np.float64]
    mu: float
    order: int

    def expect(self, values: npt.ArrayLike) -> float:
        """Weighted sum of function values given at the nodes."""
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))


def gauss_laguerre(order: int, mu: float) -> Quadrature:
    """
    Construct a Gauss-Laguerre rule for the Exp(mu) density.

    The Jacobi matrix of the Laguerre polynomials has diagonal 2k+1 and
    off-diagonal k. Its eigenvalues are the nodes for weight e^{-y}; the squared
    first eigenvector components are the weights. Nodes are rescaled by 1/mu.

    Parameters
    ----------
    order : int
        Number of nodes, between 2 and 120.
    mu : float
        Target exponential rate, must be positive.

    Raises
    ------
    ValueError
        Raised if order is out of range or mu is not positive.

    Returns
    -------
    Quadrature
        Rule exact for polynomials of degree up to 2*order - 1.
    """
    if order < 2:
        raise ValueError(f"Quadrature order must be at least 2, got {order}")
    if order > MAX_STABLE_ORDER:
        raise ValueError(
            f"Quadrature order {order} exceeds the supported maximum {MAX_STABLE_ORDER}"
        )
    if mu <= 0.0:
        raise ValueError(f"Service rate must be positive, got mu={mu}")

    k = np.arange(order, dtype=float)
    diagonal = 2.0 * k + 1.0
    off_diagonal = k[1:]

    eigenvalues, eigenvectors = eigh_tridiagonal(diagonal, off_diagonal)
    weights = eigenvectors[0, :] ** 2
    weights = weights / weights.sum()

    return Quadrature(nodes=eigenvalues / mu, weights=weights, mu=mu, order=order)
