"""Holdings-based attribution: selection, allocation, interaction, asset mix.

Sign conventions (fractions, per window)::

    SS = sum_i (r_if - r_ib) * w_ib
    IA = sum_i r_ib * (w_if - w_ib)
    IT = sum_i (r_if - r_ib) * (w_if - w_ib)
    AA = r_s * (w_fs - w_bs) + r_b * (w_fb - w_bb)

SS + IA + IT is the stock-sleeve excess return over the benchmark
constituents, exactly.
"""
from __future__ import annotations

import datetime as dt
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .data_model import (
    AttribError,
    BenchmarkDefinition,
    Direction,
    HoldingsSnapshot,
    Issue,
    MarketPanel,
    normalize_stock_sleeve,
)
from .ingestion import WindowReturns, WindowSpec, compound, resolve_window, window_columns

WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class IndustryBreakdown:
    """Per-industry weights and window returns for fund and benchmark.

    Industries on only one side carry weight 0 there, with the missing-side
    return filled by :func:`build_breakdown`'s fallback rule.
    """

    industries: tuple[str, ...]
    w_f: np.ndarray
    r_f: np.ndarray
    w_b: np.ndarray
    r_b: np.ndarray
    report_date: dt.date | None = None
    direction: Direction | None = None
    issues: tuple[Issue, ...] = ()

    def __post_init__(self):
        if len(set(self.industries)) != len(self.industries):
            raise AttribError("DUP_INDUSTRY", "industry listed twice")
        for name in ("w_f", "r_f", "w_b", "r_b"):
            a = np.array(getattr(self, name), dtype=float)
            if a.shape != (len(self.industries),):
                raise ValueError(f"{name} has shape {a.shape}")
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        for name in ("w_f", "w_b"):
            total = math.fsum(getattr(self, name))
            if abs(total - 1.0) > WEIGHT_SUM_TOL:
                raise AttribError("WEIGHT_SUM", f"{name} sums to {total!r}")

    @property
    def n_industries(self) -> int:
        return len(self.industries)

    @property
    def rows(self) -> dict[str, tuple[float, float, float, float]]:
        """industry -> (w_if, r_if, w_ib, r_ib)"""
        return {ind: (float(a), float(b), float(c), float(d))
                for ind, a, b, c, d in zip(self.industries, self.w_f, self.r_f, self.w_b, self.r_b)}

    @property
    def fund_return(self) -> float:
        return math.fsum(self.w_f * self.r_f)

    @property
    def benchmark_return(self) -> float:
        return math.fsum(self.w_b * self.r_b)


@dataclass(frozen=True)
class AttributionRecord:
    fund_id: str
    report_date: dt.date
    direction: Direction
    ss: float
    ia: float
    it: float
    excess: float

    @property
    def residual(self) -> float:
        """ss + ia + it - excess; zero up to rounding."""
        return self.ss + self.ia + self.it - self.excess


@dataclass(frozen=True)
class AssetAllocationRecord:
    fund_id: str
    quarter_date: dt.date
    aa: float


@dataclass(frozen=True)
class ValidityDiff:
    fund_id: str
    report_date: dt.date
    direction: Direction
    assumed_return: float
    actual_return: float

    @property
    def diff(self) -> float:
        return self.assumed_return - self.actual_return


def _industry_sleeve(weights: Mapping[str, float], cum: Mapping[str, float],
                     industry_of: Mapping[str, str]) -> tuple[dict[str, float], dict[str, float]]:
    w: dict[str, float] = defaultdict(float)
    wr: dict[str, float] = defaultdict(float)
    for stock, weight in weights.items():
        ind = industry_of[stock]
        w[ind] += weight
        wr[ind] += weight * cum[stock]
    r = {ind: (wr[ind] / w[ind] if w[ind] > 0 else 0.0) for ind in w}
    return dict(w), r


def _priced(weights: Mapping[str, float], window: WindowReturns, industry_of: Mapping[str, str],
            side: str, issues: list[Issue]) -> dict[str, float]:
    keep = {s: w for s, w in weights.items()
            if w > 0 and s in window.per_stock and s in industry_of}
    dropped = sorted(s for s, w in weights.items() if w > 0 and s not in keep)
    if dropped:
        unpriced = [s for s in dropped if s not in window.per_stock]
        unclassified = [s for s in dropped if s in window.per_stock]
        if unpriced:
            issues.append(Issue("warning", "UNPRICED_STOCK",
                                f"{side}: dropped {len(unpriced)} stock(s) without window returns", item=unpriced[0]))
        if unclassified:
            issues.append(Issue("warning", "NO_INDUSTRY",
                                f"{side}: dropped {len(unclassified)} unclassified stock(s)", item=unclassified[0]))
    total = math.fsum(keep.values())
    if not total > 0:
        raise AttribError("EMPTY_SLEEVE", f"{side} has no priced, classified stock")
    return {s: w / total for s, w in keep.items()}


@dataclass(frozen=True, eq=False)
class BenchmarkSide:
    """Industry weights and returns of one benchmark over one window.

    Shared by every fund tracking that benchmark, so batch runs compute it
    once per (definition, window).
    """

    weights: dict[str, float]
    returns: dict[str, float]
    issues: tuple[Issue, ...] = ()

    @property
    def total_return(self) -> float:
        return math.fsum(self.weights[i] * self.returns[i] for i in self.weights)


def benchmark_side(benchmark: BenchmarkDefinition, industry_of: Mapping[str, str],
                   window: WindowReturns) -> BenchmarkSide:
    issues: list[Issue] = []
    bench_w = _priced(benchmark.weights, window, industry_of, "benchmark", issues)
    wb, rb = _industry_sleeve(bench_w, window.per_stock, industry_of)
    return BenchmarkSide(wb, rb, tuple(issues))


def build_breakdown(snapshot: HoldingsSnapshot, benchmark: BenchmarkDefinition,
                    industry_of: Mapping[str, str], window: WindowReturns,
                    side: BenchmarkSide | None = None) -> IndustryBreakdown:
    """Aggregate fund and benchmark stock weights into industry rows.

    Stocks without a return over the whole window (or without an industry)
    are dropped with a warning and each side is renormalized. Industry
    returns are weight-proportional averages of member-stock cumulative
    returns.

    Missing-side returns: an industry the benchmark does not hold takes the
    benchmark's total return as ``r_ib``; an industry the fund does not hold
    takes ``r_if = r_ib``, so it adds nothing to selection or interaction.
    """
    issues: list[Issue] = []
    fund_w = _priced(snapshot.weights, window, industry_of, "fund", issues)
    wf, rf = _industry_sleeve(fund_w, window.per_stock, industry_of)
    if side is None:
        side = benchmark_side(benchmark, industry_of, window)
    issues += side.issues
    wb, rb = side.weights, side.returns
    if not set(wf) & set(wb):
        raise AttribError("NO_OVERLAP", f"{snapshot.fund_id} shares no industry with {benchmark.benchmark_id}")

    bench_total = side.total_return
    industries = tuple(sorted(set(wf) | set(wb)))
    w_f = np.array([wf.get(i, 0.0) for i in industries])
    w_b = np.array([wb.get(i, 0.0) for i in industries])
    r_b = np.array([rb.get(i, bench_total) for i in industries])
    r_f = np.array([rf[i] if i in rf else rb.get(i, bench_total) for i in industries])
    return IndustryBreakdown(industries, w_f, r_f, w_b, r_b,
                             report_date=snapshot.report_date,
                             direction=window.spec.direction,
                             issues=tuple(issues) + window.issues)


def within_industry_selection(b: IndustryBreakdown) -> float:
    return float(np.dot(b.r_f - b.r_b, b.w_b))


def industry_allocation(b: IndustryBreakdown) -> float:
    return float(np.dot(b.r_b, b.w_f - b.w_b))


def interaction_term(b: IndustryBreakdown) -> float:
    return float(np.dot(b.r_f - b.r_b, b.w_f - b.w_b))


def decompose(b: IndustryBreakdown) -> tuple[float, float, float, float]:
    """(ss, ia, it, excess) for one breakdown."""
    excess = float(np.dot(b.w_f, b.r_f) - np.dot(b.w_b, b.r_b))
    return within_industry_selection(b), industry_allocation(b), interaction_term(b), excess


def attribute(snapshot: HoldingsSnapshot, benchmark: BenchmarkDefinition, panel: MarketPanel,
              direction: Direction, window: WindowReturns | None = None,
              side: BenchmarkSide | None = None) -> AttributionRecord:
    """Brinson decomposition of one report over its six-month window.

    ``window`` (and the matching ``side``) may be passed in to reuse work
    across funds; the window must match the report date and direction.
    """
    snapshot = normalize_stock_sleeve(snapshot)
    spec = WindowSpec(snapshot.report_date, direction, 6)
    if window is None:
        stocks = set(snapshot.weights) | set(benchmark.weights)
        window = resolve_window(panel, spec, stocks)
    elif window.spec != spec:
        raise AttribError("BAD_WINDOW", f"window {window.spec} does not match {spec}")
    b = build_breakdown(snapshot, benchmark, panel.industry_of, window, side)
    ss, ia, it, excess = decompose(b)
    return AttributionRecord(snapshot.fund_id, snapshot.report_date, direction, ss, ia, it, excess)


def asset_allocation(snapshot: HoldingsSnapshot, benchmark: BenchmarkDefinition,
                     window: WindowReturns) -> AssetAllocationRecord:
    """Stock/bond mix effect over the three months after a quarterly report."""
    r_s, r_b = window.stock_market, window.bond_market
    if not (math.isfinite(r_s) and math.isfinite(r_b)):
        raise AttribError("MISSING_MARKET", "stock or bond market return missing in window")
    fw, bw = snapshot.asset_weights, benchmark.asset_weights
    if fw is None or bw is None:
        raise AttribError("MISSING_SLEEVE", f"{snapshot.fund_id} lacks asset weights")
    aa = r_s * (fw.stock - bw.stock) + r_b * (fw.bond - bw.bond)
    return AssetAllocationRecord(snapshot.fund_id, snapshot.report_date, aa)


def accumulate_geometric(series: Iterable[float]) -> float:
    """Chain per-period values: ``prod(1 + x) - 1``."""
    acc = 1.0
    for x in series:
        if not x > -1.0:
            raise AttribError("DEGENERATE", f"value {x!r} <= -1 cannot be compounded")
        acc *= 1.0 + x
    return acc - 1.0


def holding_validity_diff(fund_id: str, snapshot: HoldingsSnapshot, panel: MarketPanel,
                          direction: Direction, window: WindowReturns | None = None) -> ValidityDiff:
    """Compare buy-and-hold of the reported stocks with the fund's NAV path.

    The assumed return holds the sleeve-normalized positions unchanged over
    the six-month window; the actual return compounds monthly NAV returns
    over the same months.
    """
    snapshot = normalize_stock_sleeve(snapshot)
    spec = WindowSpec(snapshot.report_date, direction, 6)
    if window is None:
        window = resolve_window(panel, spec, snapshot.weights)
    nav = panel.fund_nav_return.get(fund_id)
    if nav is None:
        raise AttribError("MISSING_NAV", f"no NAV series for {fund_id}")
    path = nav[window_columns(panel, spec)]
    if np.isnan(path).any():
        raise AttribError("MISSING_NAV", f"{fund_id} NAV incomplete over window")
    priced = {s: w for s, w in snapshot.positions if w > 0 and s in window.per_stock}
    total = math.fsum(priced.values())
    if not total > 0:
        raise AttribError("EMPTY_SLEEVE", f"{fund_id} holds no stock priced over the window")
    assumed = math.fsum(w / total * window.per_stock[s] for s, w in priced.items())
    actual = float(compound(path))
    return ValidityDiff(fund_id, snapshot.report_date, direction, assumed, actual)
