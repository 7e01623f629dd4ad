"""Spearman rank correlation with average ranks for ties."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from crewsim.stats.special import student_t_sf


def rank_data(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the average of their rank range."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        average = (i + j + 2) / 2.0  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    return ranks


@dataclass(frozen=True)
class SpearmanResult:
    rho: float
    p_value: float


def spearman(x: Sequence[float], y: Sequence[float]) -> SpearmanResult:
    """Pearson correlation of ranks; p-value from the t approximation.

    By reporting convention |rho| = 1 gets p = 0. Constant inputs have no
    rank variance and raise.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise ValueError("spearman requires at least 3 observations")
    if min(x) == max(x) or min(y) == max(y):
        raise ValueError("constant input vector; rank variance undefined")

    rx = rank_data(x)
    ry = rank_data(y)
    mean_x = sum(rx) / n
    mean_y = sum(ry) / n
    cov = sum((a - mean_x) * (b - mean_y) for a, b in zip(rx, ry))
    var_x = sum((a - mean_x) ** 2 for a in rx)
    var_y = sum((b - mean_y) ** 2 for b in ry)
    rho = cov / math.sqrt(var_x * var_y)
    rho = max(-1.0, min(1.0, rho))

    if 1.0 - rho * rho <= 0.0:
        return SpearmanResult(rho=rho, p_value=0.0)
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return SpearmanResult(rho=rho, p_value=2.0 * student_t_sf(abs(t), n - 2))
