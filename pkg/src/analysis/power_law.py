"""
Degree distributions and power-law exponent fits, p(k) ~ k^-gamma.

The default fit is an ordinary least-squares line through
``(log k, log p(k))`` over every degree with a nonzero empirical frequency,
which is what a "power-law trendline" on a log-log plot is. The ``ccdf``
variant fits the complementary cumulative distribution instead and converts
the slope with ``gamma = 1 - slope``.
"""

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from transit_access.common.errors import EmptyGraph, InsufficientSupport, InvariantViolation
from transit_access.common.logger import logger
from transit_access.network.graph_core import TransitGraph

MIN_SUPPORT = 3


@dataclass(frozen=True)
class DegreeDistribution:
    """Histogram of degrees. Counts may be real weights for synthetic inputs."""

    counts: Mapping[int, float]
    total: float

    def __post_init__(self):
        if any(k < 0 for k in self.counts):
            raise ValueError("degrees must be non-negative")
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("counts must be non-negative")
        if not math.isclose(math.fsum(self.counts.values()), self.total, rel_tol=1e-12):
            raise ValueError(f"counts sum to {math.fsum(self.counts.values())}, not {self.total}")

    @property
    def degree_sum(self) -> float:
        return math.fsum(k * c for k, c in self.counts.items())

    def probabilities(self) -> dict[int, float]:
        """Empirical p(k) over degrees with a nonzero count, ascending."""
        return {k: c / self.total for k, c in sorted(self.counts.items()) if c > 0}

    def ccdf(self) -> dict[int, float]:
        """P(K >= k) at each degree with a nonzero count, ascending."""
        probs = self.probabilities()
        tail = 0.0
        result = {}
        for k in sorted(probs, reverse=True):
            tail += probs[k]
            result[k] = tail
        return dict(sorted(result.items()))


def degree_distribution(g: TransitGraph) -> DegreeDistribution:
    if g.number_of_nodes() == 0:
        raise EmptyGraph("degree distribution of an empty graph")
    counts: dict[int, int] = {}
    for degree in g.degrees().values():
        counts[degree] = counts.get(degree, 0) + 1
    dist = DegreeDistribution(counts=dict(sorted(counts.items())), total=g.number_of_nodes())
    if dist.degree_sum != 2 * g.number_of_edges():
        raise InvariantViolation(
            f"degree sum {dist.degree_sum} != 2M = {2 * g.number_of_edges()}"
        )
    return dist


@dataclass(frozen=True)
class PowerLawFit:
    gamma: float
    intercept: float
    r_squared: float
    k_support: tuple[int, ...]
    method: str = "pdf"

    def predict(self, k: float) -> float:
        """Fitted p(k) (or P(K >= k) for ccdf fits) at degree ``k``."""
        slope = -self.gamma if self.method == "pdf" else 1.0 - self.gamma
        return math.exp(self.intercept) * k**slope

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "k_support": list(self.k_support),
            "method": self.method,
        }


def _r_squared(x: np.ndarray, y: np.ndarray, slope: float, intercept: float) -> float:
    residual = y - (slope * x + intercept)
    ss_res = float(np.dot(residual, residual))
    centered = y - y.mean()
    ss_tot = float(np.dot(centered, centered))
    if ss_res <= 1e-24:
        return 1.0
    if ss_tot == 0.0:
        return 0.0
    return min(1.0, max(0.0, 1.0 - ss_res / ss_tot))


def fit_power_law(d: DegreeDistribution, method: str = "pdf", kmin: int = 1) -> PowerLawFit:
    if method not in ("pdf", "ccdf"):
        raise ValueError(f"unknown power-law fit method {method!r}")
    points = d.probabilities() if method == "pdf" else d.ccdf()
    points = {k: p for k, p in points.items() if k >= max(1, kmin)}
    if len(points) < MIN_SUPPORT:
        raise InsufficientSupport(
            f"power-law fit needs at least {MIN_SUPPORT} distinct degrees >= {max(1, kmin)}, "
            f"got {sorted(points)}"
        )

    ks = tuple(points)
    x = np.log(np.asarray(ks, dtype=float))
    y = np.log(np.asarray(list(points.values()), dtype=float))
    slope, intercept = np.polyfit(x, y, deg=1)
    slope, intercept = float(slope), float(intercept)
    gamma = -slope if method == "pdf" else 1.0 - slope
    if not math.isfinite(gamma):
        raise InvariantViolation(f"non-finite power-law exponent {gamma}")
    if gamma <= 0:
        logger.warning(f"Fitted exponent {gamma:.4f} is not positive; not a decaying power law")

    return PowerLawFit(
        gamma=gamma,
        intercept=intercept,
        r_squared=_r_squared(x, y, slope, intercept),
        k_support=ks,
        method=method,
    )
