"""Hypothesis tests and cross-sectional summaries."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np
from scipy import special

from .data_model import AttribError
from .regression import RegressionFit

Alternative = Literal["two_sided", "greater"]
LEVELS = (0.10, 0.05)


def t_cdf(t: float, df: float) -> float:
    """Student-t CDF through the regularized incomplete beta function.

    Uses ``P(|T| > |t|) = I_x(df/2, 1/2)`` with ``x = df / (df + t^2)``.
    """
    if not df > 0:
        raise ValueError(f"df must be positive, got {df}")
    if math.isnan(t):
        return float("nan")
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    if t == 0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * float(special.betainc(0.5 * df, 0.5, x))
    return 1.0 - tail if t > 0 else tail


def t_sf(t: float, df: float) -> float:
    """Upper tail ``P(T > t)``, computed without cancellation."""
    return t_cdf(-t, df)


@dataclass(frozen=True)
class TestResult:
    statistic: float
    df: int
    p_value: float
    alternative: Alternative
    df_convention: str = "residual"

    def reject_at(self, level: float) -> bool:
        return self.p_value < level

    @property
    def decisions(self) -> dict[float, bool]:
        return {lv: self.reject_at(lv) for lv in LEVELS}


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    t_stat: float
    p_value: float

    @property
    def stars(self) -> str:
        return significance_stars(self.p_value)


@dataclass(frozen=True)
class BoxStats:
    p2_5: float
    p25: float
    p50: float
    p75: float
    p97_5: float
    n: int = 0

    @property
    def covers_zero(self) -> bool:
        return self.p2_5 <= 0.0 <= self.p97_5


@dataclass(frozen=True)
class SummaryRow:
    measure_tag: str
    n_funds: int
    positive_proportion: float
    significantly_positive_proportion: float
    n_zero_variance: int = 0


def _p_value(stat: float, df: float, alternative: Alternative) -> float:
    if alternative == "greater":
        return t_sf(stat, df)
    if alternative == "two_sided":
        return min(1.0, 2.0 * t_cdf(-abs(stat), df))
    raise ValueError(f"unknown alternative {alternative!r}")


def significance_stars(p: float) -> str:
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.1:
        return "*"
    return ""


def mean_positive_test(series: Sequence[float], classical_df: bool = False,
                       alternative: Alternative = "greater") -> TestResult:
    """Test whether a fund's mean measure is positive.

    Statistic ``sqrt(n) * mean / sd`` (sd with ``n - 1`` divisor) referred
    to ``t(n - 2)``; ``classical_df`` switches the reference to ``t(n - 1)``.
    """
    x = np.asarray(series, dtype=float)
    n = len(x)
    if n < 3:
        raise AttribError("TOO_FEW_OBS", f"positivity test needs 3 values, got {n}")
    sd = float(x.std(ddof=1))
    # identical values can still leave a rounding-level sd through the mean
    if not sd > 0 or (x == x[0]).all():
        raise AttribError("ZERO_VARIANCE", "series has zero sample variance")
    stat = math.sqrt(n) * float(x.mean()) / sd
    df = n - 1 if classical_df else n - 2
    return TestResult(stat, df, _p_value(stat, df, alternative), alternative,
                      "n-1" if classical_df else "n-2")


def coef_test(fit: RegressionFit, coef_name: str, null_value: float = 0.0,
              alternative: Alternative = "two_sided") -> TestResult:
    """t test of one coefficient against ``null_value`` on the fit's residual df."""
    if coef_name not in fit.coef:
        raise AttribError("UNKNOWN_COEF", f"{coef_name!r} not in {sorted(fit.coef)}")
    est, se = fit.coef[coef_name], fit.stderr[coef_name]
    diff = est - null_value
    if se > 0:
        stat = diff / se
    else:
        stat = 0.0 if diff == 0 else math.copysign(math.inf, diff)
    return TestResult(stat, fit.df_resid, _p_value(stat, fit.df_resid, alternative), alternative)


def pearson_test(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Pearson correlation with its two-sided t test on ``n - 2`` df."""
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise AttribError("LENGTH_MISMATCH", f"lengths {a.shape} and {b.shape}")
    n = len(a)
    if n < 3:
        raise AttribError("TOO_FEW_OBS", f"correlation needs 3 pairs, got {n}")
    da = a - a.mean()
    db = b - b.mean()
    sa, sb = math.sqrt(float(da @ da)), math.sqrt(float(db @ db))
    if sa == 0 or sb == 0:
        raise AttribError("ZERO_VARIANCE", "a series is constant")
    r = float((da / sa) @ (db / sb))
    r = max(-1.0, min(1.0, r))
    return correlation_from_r(r, n)


def correlation_from_r(r: float, n: int) -> CorrelationResult:
    """Significance of a published (r, n) pair."""
    if abs(r) >= 1.0:
        return CorrelationResult(r, n, math.copysign(math.inf, r), 0.0)
    t = r * math.sqrt(n - 2) / math.sqrt(1.0 - r * r)
    return CorrelationResult(r, n, t, _p_value(t, n - 2, "two_sided"))


def box_stats(sample: Sequence[float]) -> BoxStats:
    """2.5/25/50/75/97.5 percentiles, linear interpolation between order statistics."""
    x = np.asarray(sample, dtype=float)
    if x.size == 0:
        raise AttribError("EMPTY_SAMPLE", "box statistics need one value")
    q = np.quantile(x, [0.025, 0.25, 0.5, 0.75, 0.975], method="linear")
    return BoxStats(*(float(v) for v in q), n=int(x.size))


def cross_section_summary(per_fund: Mapping[str, Sequence[float]], measure_tag: str,
                          classical_df: bool = False, alternative: Alternative = "greater",
                          level: float = 0.10) -> SummaryRow:
    """Share of funds with a positive mean measure, and with a significant one.

    Funds whose series is too short for the test are left out entirely;
    zero-variance funds stay in the denominator but are never significant.
    """
    n = positive = significant = zero_var = 0
    for fund_id in sorted(per_fund):
        x = np.asarray(per_fund[fund_id], dtype=float)
        if len(x) < 3 or not np.isfinite(x).all():
            continue
        n += 1
        if x.mean() > 0:
            positive += 1
        try:
            res = mean_positive_test(x, classical_df, alternative)
        except AttribError as exc:
            if exc.code != "ZERO_VARIANCE":
                raise
            zero_var += 1
            continue
        if res.reject_at(level) and (alternative == "greater" or res.statistic > 0):
            significant += 1
    if n == 0:
        raise AttribError("EMPTY_UNIVERSE", f"no fund has a usable {measure_tag} series")
    return SummaryRow(measure_tag, n, positive / n, significant / n, zero_var)
