"""Contingency-table statistics: Pearson chi-squared, two-proportion z,
odds ratios with Haldane-Anscombe correction, and logit-proportions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from crewsim.stats.special import chi2_sf, normal_sf


@dataclass(frozen=True)
class ChiSquaredResult:
    statistic: float
    df: int
    p_value: float


def chi_squared(table: Sequence[Sequence[float]]) -> ChiSquaredResult:
    """Pearson chi-squared test of independence on an r x c count table.

    Expected counts come from the margins; the p-value is the upper tail of
    the chi-squared distribution with (r-1)(c-1) degrees of freedom.
    """
    rows = [list(map(float, row)) for row in table]
    r = len(rows)
    if r < 2 or any(len(row) != len(rows[0]) for row in rows):
        raise ValueError("table must be rectangular with at least 2 rows")
    c = len(rows[0])
    if c < 2:
        raise ValueError("table must have at least 2 columns")
    if any(cell < 0 for row in rows for cell in row):
        raise ValueError("counts must be non-negative")
    row_sums = [sum(row) for row in rows]
    col_sums = [sum(rows[i][j] for i in range(r)) for j in range(c)]
    total = sum(row_sums)
    if any(s == 0 for s in row_sums) or any(s == 0 for s in col_sums):
        raise ValueError("table has a zero row or column margin")

    statistic = 0.0
    for i in range(r):
        for j in range(c):
            expected = row_sums[i] * col_sums[j] / total
            statistic += (rows[i][j] - expected) ** 2 / expected
    df = (r - 1) * (c - 1)
    return ChiSquaredResult(statistic=statistic, df=df, p_value=chi2_sf(statistic, df))


def two_prop_z(k1: int, n1: int, k2: int, n2: int) -> tuple[float, float]:
    """Pooled two-proportion z test; returns (z, two-sided p)."""
    for k, n in ((k1, n1), (k2, n2)):
        if n <= 0:
            raise ValueError("sample sizes must be positive")
        if not 0 <= k <= n:
            raise ValueError(f"successes must lie in [0, n], got {k}/{n}")
    pooled = (k1 + k2) / (n1 + n2)
    if pooled in (0.0, 1.0):
        raise ValueError("pooled proportion is 0 or 1; the z statistic has no variance")
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    z = (k1 / n1 - k2 / n2) / se
    return z, 2.0 * normal_sf(abs(z))


@dataclass(frozen=True)
class OddsRatioResult:
    odds_ratio: float
    ci_low: float
    ci_high: float
    corrected: bool  # True when the +0.5 zero-cell correction was applied


def odds_ratio(a: float, b: float, c: float, d: float) -> OddsRatioResult:
    """Odds ratio (a*d)/(b*c) for the 2x2 table [[a, b], [c, d]].

    If any cell is zero, 0.5 is added to all four cells (Haldane-Anscombe)
    before both the estimate and its log-scale Wald interval. Two zero cells
    in one margin leave no information at all and raise instead.
    """
    cells = (a, b, c, d)
    if any(x < 0 for x in cells):
        raise ValueError("cell counts must be non-negative")
    degenerate = ((a, b), (c, d), (a, c), (b, d))
    if any(x == 0 and y == 0 for x, y in degenerate):
        raise ValueError("two zero cells share a row or column; odds ratio undefined")
    corrected = any(x == 0 for x in cells)
    if corrected:
        a, b, c, d = (x + 0.5 for x in cells)
    estimate = (a * d) / (b * c)
    se = math.sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d)
    log_or = math.log(estimate)
    return OddsRatioResult(
        odds_ratio=estimate,
        ci_low=math.exp(log_or - 1.96 * se),
        ci_high=math.exp(log_or + 1.96 * se),
        corrected=corrected,
    )


def logit_prop(count: int, total: int) -> float:
    """Continuity-corrected log-odds of a proportion.

    Uses p = (count + 0.5) / (total + 1) unconditionally, so boundary counts
    (0 or total) stay finite and the transform is antisymmetric:
    logit_prop(c, t) == -logit_prop(t - c, t).
    """
    if total < 1:
        raise ValueError("total must be at least 1")
    if not 0 <= count <= total:
        raise ValueError(f"count must lie in [0, total], got {count}/{total}")
    p = (count + 0.5) / (total + 1.0)
    return math.log(p / (1.0 - p))
