from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from transit_access.common.errors import InsufficientData, ZeroVariance


@dataclass(frozen=True)
class CorrelationReport:
    variable_pair: tuple[str, str]
    pearson_r: float
    spearman_rho: float
    n: int
    pearson_p: Optional[float] = None
    spearman_p: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "x": self.variable_pair[0],
            "y": self.variable_pair[1],
            "pearson_r": self.pearson_r,
            "spearman_rho": self.spearman_rho,
            "pearson_p": self.pearson_p,
            "spearman_p": self.spearman_p,
            "n": self.n,
        }


def _clip_unit(value: float) -> float:
    return float(min(1.0, max(-1.0, value)))


def correlation_report(
    xs: Sequence[float], ys: Sequence[float], variable_pair: tuple[str, str]
) -> CorrelationReport:
    """
    Pearson on raw values and Spearman on average-tie ranks.

    Raises InsufficientData for fewer than three pairs and ZeroVariance when
    either variable is constant.
    """
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} x values, {len(ys)} y values")
    if len(xs) < 3:
        raise InsufficientData(
            f"{variable_pair[0]} vs {variable_pair[1]}: need at least 3 pairs, got {len(xs)}"
        )
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    for name, values in zip(variable_pair, (x, y)):
        if np.ptp(values) == 0:
            raise ZeroVariance(f"{name} is constant over {len(values)} samples")

    pearson = stats.pearsonr(x, y)
    spearman = stats.spearmanr(x, y)
    return CorrelationReport(
        variable_pair=variable_pair,
        pearson_r=_clip_unit(pearson[0]),
        spearman_rho=_clip_unit(spearman[0]),
        n=len(xs),
        pearson_p=float(pearson[1]),
        spearman_p=float(spearman[1]),
    )


def trendline(xs: Sequence[float], ys: Sequence[float]) -> Optional[tuple[float, float]]:
    """Least-squares ``(slope, intercept)``; None with fewer than 2 points or constant x."""
    if len(xs) < 2:
        return None
    x = np.asarray(xs, dtype=float)
    if np.ptp(x) == 0:
        return None
    slope, intercept = np.polyfit(x, np.asarray(ys, dtype=float), deg=1)
    return float(slope), float(intercept)
