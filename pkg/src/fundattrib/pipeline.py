"""Workspace loading and the batch computations behind each CLI command.

A workspace is a directory with the eight input CSVs and an optional
``workspace.toml``::

    gap_limit = 2                   # months of price carry-forward
    df_convention = "n-2"           # or "n-1" for the positivity test
    levels = [0.10, 0.05]           # first one drives the summary tables
    direction = "before"            # window for SS/IA/IT
    positivity_alternative = "greater"
    allow_gaps = false
    sample_start = "2013-01"        # optional month bounds on every window
    sample_end = "2017-12"

    [synth]                         # parameters for ``attrib synth``
    n_funds = 60
    [synth.skill]
    share = 0.5
    selection_drift = 0.005

Every command returns a :class:`CommandOutput`; nothing here writes files.
"""
from __future__ import annotations

import concurrent.futures as cf
import dataclasses
import datetime as dt
import hashlib
import json
import math
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .brinson import (
    AttributionRecord,
    BenchmarkSide,
    accumulate_geometric,
    asset_allocation,
    attribute,
    benchmark_side,
    holding_validity_diff,
)
from .data_model import (
    AttribError,
    BenchmarkDefinition,
    HoldingsSnapshot,
    Issue,
    MarketPanel,
    month_label,
    parse_month,
)
from .inference import (
    box_stats,
    coef_test,
    cross_section_summary,
    pearson_test,
)
from .ingestion import (
    WindowReturns,
    WindowSpec,
    parse_benchmark_csv,
    parse_fund_map,
    parse_holdings_csv,
    parse_market_panel,
    resolve_window,
)
from .regression import (
    fit_benchmark_ff,
    fit_benchmark_simple,
    fit_fama_french,
    fit_persistence,
    fit_treynor_mazuy,
    tracking_stats,
)

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

INPUT_FILES = ("holdings.csv", "benchmark.csv", "prices.csv", "industries.csv",
               "factors.csv", "nav.csv", "index.csv", "funds.csv")
CONFIG_FILE = "workspace.toml"
BRINSON_MEASURES = ("ss", "ia", "it")
MEASURES = BRINSON_MEASURES + ("aa",)


class WorkspaceInvalid(Exception):
    """The workspace has validation errors; nothing may be computed."""

    def __init__(self, issues: Sequence[tuple[str, Issue]]):
        self.issues = list(issues)
        super().__init__(f"{sum(1 for _, i in issues if i.severity == 'error')} validation error(s)")


@dataclass(frozen=True)
class Settings:
    gap_limit: int = 2
    df_convention: str = "n-2"
    levels: tuple[float, ...] = (0.10, 0.05)
    direction: str = "before"
    positivity_alternative: str = "greater"
    allow_gaps: bool = False
    sample_start: int | None = None
    sample_end: int | None = None

    def __post_init__(self):
        if self.df_convention not in ("n-2", "n-1"):
            raise AttribError("CONFIG", f"df_convention {self.df_convention!r} not in n-2, n-1")
        if self.direction not in ("before", "after"):
            raise AttribError("CONFIG", f"direction {self.direction!r}")
        if self.positivity_alternative not in ("greater", "two_sided"):
            raise AttribError("CONFIG", f"positivity_alternative {self.positivity_alternative!r}")
        if not self.levels or not all(0 < lv < 1 for lv in self.levels):
            raise AttribError("CONFIG", f"levels {self.levels!r}")
        if self.gap_limit < 0:
            raise AttribError("CONFIG", "gap_limit must be >= 0")

    @property
    def classical_df(self) -> bool:
        return self.df_convention == "n-1"

    @property
    def level(self) -> float:
        return self.levels[0]

    def fingerprint(self) -> str:
        blob = json.dumps(dataclasses.asdict(self), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def in_sample(self, months: Sequence[int]) -> bool:
        if self.sample_start is not None and months[0] < self.sample_start:
            return False
        if self.sample_end is not None and months[-1] > self.sample_end:
            return False
        return True


_SETTING_KEYS = {f.name for f in dataclasses.fields(Settings)}


def read_config(root: str | os.PathLike) -> tuple[dict[str, Any], dict[str, Any]]:
    """Raw ``(settings, synth)`` tables from ``workspace.toml``; empty if absent."""
    path = os.path.join(root, CONFIG_FILE)
    if not os.path.exists(path):
        return {}, {}
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise AttribError("CONFIG", f"{CONFIG_FILE}: {exc}") from None
    synth = data.pop("synth", {})
    unknown = sorted(set(data) - _SETTING_KEYS)
    if unknown:
        raise AttribError("CONFIG", f"{CONFIG_FILE}: unknown key(s) {', '.join(unknown)}")
    return data, synth


def make_settings(raw: dict[str, Any], **overrides) -> Settings:
    values = dict(raw)
    for key in ("sample_start", "sample_end"):
        if values.get(key) is not None and not isinstance(values[key], int):
            try:
                values[key] = parse_month(str(values[key]))
            except ValueError as exc:
                raise AttribError("CONFIG", f"{key}: {exc}") from None
    if "levels" in values:
        values["levels"] = tuple(float(x) for x in values["levels"])
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Settings(**values)
    except TypeError as exc:
        raise AttribError("CONFIG", str(exc)) from None


@dataclass(frozen=True, eq=False)
class Workspace:
    root: str
    settings: Settings
    snapshots: tuple[HoldingsSnapshot, ...]
    benchmarks: dict[str, tuple[BenchmarkDefinition, ...]]
    fund_benchmark: dict[str, str]
    panel: MarketPanel
    warnings: tuple[tuple[str, Issue], ...] = ()
    threads: int = 1

    @property
    def fund_ids(self) -> tuple[str, ...]:
        return tuple(sorted({s.fund_id for s in self.snapshots}))

    def benchmark_for(self, fund_id: str, date: dt.date) -> BenchmarkDefinition:
        bid = self.fund_benchmark[fund_id]
        best = None
        for d in self.benchmarks.get(bid, ()):
            if d.as_of <= date:
                best = d
        if best is None:
            raise AttribError("NO_BENCHMARK", f"no {bid} definition on or before {date}")
        return best

    def semiannual(self) -> list[HoldingsSnapshot]:
        return [s for s in self.snapshots if s.report_kind == "semiannual"]


def default_threads() -> int:
    raw = os.environ.get("ATTRIB_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise AttribError("USAGE", f"ATTRIB_THREADS={raw!r} is not an integer") from None
        if n < 1:
            raise AttribError("USAGE", "ATTRIB_THREADS must be >= 1")
        return n
    return min(8, os.cpu_count() or 1)


def load_workspace(root: str | os.PathLike, settings: Settings | None = None,
                   threads: int | None = None) -> Workspace:
    """Parse and cross-check every input file.

    Raises :class:`WorkspaceInvalid` if any file, or any cross reference
    between files, has an error.
    """
    root = os.fspath(root)
    if settings is None:
        settings = make_settings(read_config(root)[0])
    missing = [n for n in INPUT_FILES if not os.path.exists(os.path.join(root, n))]
    if missing:
        raise WorkspaceInvalid([(n, Issue("error", "IO_READ", "file not found")) for n in missing])

    def path(name):
        return os.path.join(root, name)

    snapshots, h_rep = parse_holdings_csv(path("holdings.csv"))
    benchmarks, b_rep = parse_benchmark_csv(path("benchmark.csv"))
    fund_map, f_rep = parse_fund_map(path("funds.csv"))
    panel, m_rep = parse_market_panel(path("prices.csv"), path("industries.csv"), path("factors.csv"),
                                      path("nav.csv"), path("index.csv"), gap_limit=settings.gap_limit)
    issues = [(name, i) for name, rep in (("holdings.csv", h_rep), ("benchmark.csv", b_rep),
                                          ("funds.csv", f_rep), ("market", m_rep))
              for i in rep.issues]

    by_bench: dict[str, list[BenchmarkDefinition]] = defaultdict(list)
    for d in benchmarks:
        by_bench[d.benchmark_id].append(d)
    for fid in sorted({s.fund_id for s in snapshots}):
        if fid not in fund_map:
            issues.append(("funds.csv", Issue("error", "NO_BENCHMARK", f"{fid} has no benchmark mapping", item=fid)))
    for fid, bid in sorted(fund_map.items()):
        if bid not in by_bench:
            issues.append(("funds.csv", Issue("error", "NO_BENCHMARK", f"{fid} maps to undefined {bid}", item=fid)))
        if bid not in panel.benchmark_return:
            issues.append(("index.csv", Issue("warning", "MISSING_INDEX", f"no index returns for {bid}", item=bid)))

    if any(i.severity == "error" for _, i in issues):
        raise WorkspaceInvalid(issues)
    return Workspace(
        root=root,
        settings=settings,
        snapshots=tuple(sorted(snapshots, key=lambda s: (s.fund_id, s.report_date))),
        benchmarks={k: tuple(sorted(v, key=lambda d: d.as_of)) for k, v in sorted(by_bench.items())},
        fund_benchmark=dict(sorted(fund_map.items())),
        panel=panel,
        warnings=tuple(issues),
        threads=threads or default_threads(),
    )


def workspace_from_universe(universe, settings: Settings | None = None,
                            threads: int | None = None) -> Workspace:
    """Workspace built straight from a synthetic universe, skipping the CSV round trip.

    Gives the same objects as writing the universe and loading the directory;
    large simulation studies use it to avoid parsing millions of rows.
    """
    settings = settings or Settings()
    by_bench: dict[str, list[BenchmarkDefinition]] = defaultdict(list)
    for d in universe.benchmark_definitions():
        by_bench[d.benchmark_id].append(d)
    return Workspace(
        root="<memory>",
        settings=settings,
        snapshots=tuple(universe.snapshots()),
        benchmarks={k: tuple(sorted(v, key=lambda d: d.as_of)) for k, v in sorted(by_bench.items())},
        fund_benchmark=universe.fund_map(),
        panel=universe.market_panel(settings.gap_limit),
        threads=threads or default_threads(),
    )


# ---------------------------------------------------------------------------
# execution helpers
# ---------------------------------------------------------------------------

def fan_out(fn: Callable, items: Sequence, threads: int) -> list:
    """``[fn(x) for x in items]`` on a bounded pool; result order follows ``items``."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with cf.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class Exclusion:
    fund_id: str
    report_date: str
    measure: str
    code: str
    message: str

    def row(self):
        return [self.fund_id, self.report_date, self.measure, self.code, self.message]


EXCLUSION_HEADER = ("fund_id", "report_date", "measure", "code", "message")


@dataclass
class CommandOutput:
    """Tables (name -> header, rows) and a JSON summary for one command run."""

    command: str
    direction: str
    tables: dict[str, tuple[tuple[str, ...], list[list]]] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)


def _iso(d: dt.date) -> str:
    return d.isoformat()


def _windows(ws: Workspace, dates: Iterable[dt.date], direction: str, horizon: int,
             measure: str) -> tuple[dict[dt.date, WindowReturns], list[Exclusion]]:
    """Resolve one window per report date; dates outside panel or sample drop out for every fund."""
    out, dropped = {}, []
    for d in sorted(set(dates)):
        spec = WindowSpec(d, direction, horizon)
        if not ws.settings.in_sample(spec.months):
            continue
        try:
            out[d] = resolve_window(ws.panel, spec)
        except AttribError as exc:
            dropped.append(Exclusion("*", _iso(d), measure, exc.code, exc.message))
    return out, dropped


@dataclass(frozen=True, eq=False)
class MeasurePanel:
    """Per-fund, per-report values of one measure plus what was left out."""

    measure: str
    direction: str
    dates: tuple[dt.date, ...]
    values: dict[str, dict[dt.date, float]]
    exclusions: tuple[Exclusion, ...]
    records: tuple[AttributionRecord, ...] = ()

    def continuous(self) -> tuple[dict[str, list[float]], list[Exclusion]]:
        """Funds with a valid value at every sample report date, values in date order."""
        kept, dropped = {}, []
        for fid in sorted(self.values):
            vals = self.values[fid]
            missing = [d for d in self.dates if d not in vals]
            if missing:
                dropped.append(Exclusion(fid, "", self.measure, "NOT_CONTINUOUS",
                                         f"no valid {self.measure} at {len(missing)} of {len(self.dates)} "
                                         f"report(s), first {_iso(missing[0])}"))
            else:
                kept[fid] = [vals[d] for d in self.dates]
        return kept, dropped


def brinson_panels(ws: Workspace, direction: str) -> dict[str, MeasurePanel]:
    """SS, IA and IT for every semiannual report whose window is usable."""
    snaps = ws.semiannual()
    windows, dropped = _windows(ws, (s.report_date for s in snaps), direction, 6, "brinson")
    sides: dict[tuple[str, dt.date, dt.date], BenchmarkSide] = {}
    bench_errors: dict[tuple[str, dt.date], AttribError] = {}
    for s in snaps:
        if s.report_date not in windows:
            continue
        try:
            bench = ws.benchmark_for(s.fund_id, s.report_date)
        except AttribError as exc:
            bench_errors[(s.fund_id, s.report_date)] = exc
            continue
        key = (bench.benchmark_id, bench.as_of, s.report_date)
        if key not in sides:
            try:
                sides[key] = benchmark_side(bench, ws.panel.industry_of, windows[s.report_date])
            except AttribError as exc:
                bench_errors[(s.fund_id, s.report_date)] = exc

    by_fund: dict[str, list[HoldingsSnapshot]] = defaultdict(list)
    for s in snaps:
        if s.report_date in windows:
            by_fund[s.fund_id].append(s)

    def run(fid: str):
        recs, excl = [], []
        for s in by_fund[fid]:
            d = s.report_date
            try:
                if (fid, d) in bench_errors:
                    raise bench_errors[(fid, d)]
                bench = ws.benchmark_for(fid, d)
                side = sides[(bench.benchmark_id, bench.as_of, d)]
                recs.append(attribute(s, bench, ws.panel, direction, windows[d], side))
            except AttribError as exc:
                excl.append(Exclusion(fid, _iso(d), "brinson", exc.code, exc.message))
        return recs, excl

    fids = sorted(by_fund)
    results = fan_out(run, fids, ws.threads)
    records = [r for recs, _ in results for r in recs]
    exclusions = dropped + [e for _, excl in results for e in excl]
    dates = tuple(sorted(windows))
    panels = {}
    for m in BRINSON_MEASURES:
        values: dict[str, dict[dt.date, float]] = defaultdict(dict)
        for r in records:
            values[r.fund_id][r.report_date] = getattr(r, m)
        panels[m] = MeasurePanel(m, direction, dates, dict(values),
                                 tuple(dataclasses.replace(e, measure=m) for e in exclusions),
                                 tuple(records))
    return panels


def aa_panel(ws: Workspace) -> MeasurePanel:
    """Asset allocation over the three months after every report carrying sleeves."""
    windows, dropped = _windows(ws, (s.report_date for s in ws.snapshots), "after", 3, "aa")
    by_fund: dict[str, list[HoldingsSnapshot]] = defaultdict(list)
    for s in ws.snapshots:
        if s.report_date in windows:
            by_fund[s.fund_id].append(s)

    def run(fid: str):
        vals, excl = {}, []
        for s in by_fund[fid]:
            try:
                bench = ws.benchmark_for(fid, s.report_date)
                vals[s.report_date] = asset_allocation(s, bench, windows[s.report_date]).aa
            except AttribError as exc:
                excl.append(Exclusion(fid, _iso(s.report_date), "aa", exc.code, exc.message))
        return vals, excl

    fids = sorted(by_fund)
    results = fan_out(run, fids, ws.threads)
    values = {fid: vals for fid, (vals, _) in zip(fids, results)}
    exclusions = dropped + [e for _, excl in results for e in excl]
    return MeasurePanel("aa", "after", tuple(sorted(windows)), values, tuple(exclusions))


def measure_panels(ws: Workspace, direction: str, measures: Sequence[str]) -> dict[str, MeasurePanel]:
    out = {}
    if any(m in BRINSON_MEASURES for m in measures):
        out.update({m: p for m, p in brinson_panels(ws, direction).items() if m in measures})
    if "aa" in measures:
        out["aa"] = aa_panel(ws)
    return out


def _sample_months(ws: Workspace, start: int | None = None, end: int | None = None) -> slice:
    periods = ws.panel.periods
    if not periods:
        raise AttribError("EMPTY_UNIVERSE", "market panel has no months")
    lo = max(x for x in (periods[0], ws.settings.sample_start, start) if x is not None)
    hi = min(x for x in (periods[-1], ws.settings.sample_end, end) if x is not None)
    if start is not None and (start < periods[0] or (end is not None and end > periods[-1])):
        raise AttribError("WINDOW_OUT_OF_RANGE",
                          f"{month_label(start)}..{month_label(end)} not covered by panel "
                          f"{month_label(periods[0])}..{month_label(periods[-1])}")
    if hi < lo:
        raise AttribError("WINDOW_OUT_OF_RANGE", "sample bounds leave no month")
    return slice(lo - periods[0], hi - periods[0] + 1)


def _fmt(x) -> Any:
    if isinstance(x, float):
        return x if math.isfinite(x) else None
    return x


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_summarize(ws: Workspace) -> CommandOutput:
    """Per report date: fund count, average stock count and (if known) stock-sleeve capital."""
    by_date: dict[dt.date, list[HoldingsSnapshot]] = defaultdict(list)
    for s in ws.semiannual():
        if s.positions:
            by_date[s.report_date].append(s)
    has_value = any(s.stock_capital is not None for s in ws.semiannual())
    rows = []
    for d in sorted(by_date):
        group = by_date[d]
        caps = [s.stock_capital for s in group if s.stock_capital is not None]
        rows.append([_iso(d), len(group),
                     float(np.mean([s.n_stocks for s in group])),
                     float(np.mean(caps)) if has_value and len(caps) == len(group) else "",
                     float(np.mean([s.asset_weights.stock for s in group])),
                     float(np.mean([s.asset_weights.bond for s in group]))])
    out = CommandOutput("summarize", "na")
    out.tables["holdings"] = (("report_date", "n_funds", "avg_n_stocks", "avg_stock_capital",
                               "avg_stock_sleeve", "avg_bond_sleeve"), rows)
    out.summary = {
        "n_funds": len(ws.fund_ids),
        "n_report_dates": len(rows),
        "n_semiannual_snapshots": sum(r[1] for r in rows),
        "avg_n_stocks": _fmt(float(np.mean([s.n_stocks for g in by_date.values() for s in g]))) if rows else None,
        "note": None if has_value else "holdings.csv has no value column; average capital omitted",
    }
    return out


def cmd_attribute(ws: Workspace, direction: str | None = None,
                  measures: Sequence[str] = MEASURES) -> CommandOutput:
    """Per-fund records, Table-4-style cross-section summary, per-report positive shares."""
    st = ws.settings
    direction = direction or st.direction
    panels = measure_panels(ws, direction, measures)
    out = CommandOutput("attribute", direction)

    rows = []
    if any(m in panels for m in BRINSON_MEASURES):
        recs = next(p for m, p in panels.items() if m in BRINSON_MEASURES).records
        for r in sorted(recs, key=lambda r: (r.fund_id, r.report_date)):
            for m in BRINSON_MEASURES:
                if m in panels:
                    rows.append([r.fund_id, _iso(r.report_date), m, getattr(r, m), r.excess, r.residual])
    if "aa" in panels:
        for fid, vals in sorted(panels["aa"].values.items()):
            for d, v in sorted(vals.items()):
                rows.append([fid, _iso(d), "aa", v, "", ""])
    rows.sort(key=lambda r: (r[0], r[1], MEASURES.index(r[2])))
    out.tables["records"] = (("fund_id", "report_date", "measure", "value", "excess", "residual"), rows)

    summary_rows, share_rows, excl_rows, summary = [], [], [], {}
    for m in MEASURES:
        if m not in panels:
            continue
        p = panels[m]
        kept, dropped = p.continuous()
        excl_rows += [e.row() for e in p.exclusions] + [e.row() for e in dropped]
        try:
            sr = cross_section_summary(kept, m, st.classical_df, st.positivity_alternative, st.level)
            summary_rows.append([m, sr.n_funds, sr.positive_proportion,
                                 sr.significantly_positive_proportion, sr.n_zero_variance, st.level,
                                 st.positivity_alternative])
            summary[m] = {"n_funds": sr.n_funds, "positive_proportion": sr.positive_proportion,
                          "significantly_positive_proportion": sr.significantly_positive_proportion,
                          "n_zero_variance": sr.n_zero_variance, "n_reports": len(p.dates)}
        except AttribError as exc:
            summary_rows.append([m, 0, "", "", 0, st.level, st.positivity_alternative])
            summary[m] = {"n_funds": 0, "note": exc.message, "n_reports": len(p.dates)}
        for d in p.dates:
            vals = [v[d] for v in p.values.values() if d in v]
            if vals:
                share_rows.append([m, _iso(d), len(vals), sum(1 for x in vals if x > 0) / len(vals),
                                   float(np.mean(vals))])
    out.tables["summary"] = (("measure", "n_funds", "positive_proportion",
                              "significantly_positive_proportion", "n_zero_variance", "level",
                              "alternative"), summary_rows)
    out.tables["positive_share"] = (("measure", "report_date", "n_funds", "positive_proportion",
                                     "mean_value"), share_rows)
    out.tables["exclusions"] = (EXCLUSION_HEADER, sorted(excl_rows))
    out.summary = {"measures": summary, "n_record_rows": len(rows)}
    return out


def cmd_validate_benchmark(ws: Workspace, model: str = "simple") -> CommandOutput:
    """Per-fund benchmark regressions with a two-sided test of beta_d = 1."""
    if model not in ("simple", "ff"):
        raise AttribError("USAGE", f"model {model!r} not in simple, ff")
    st = ws.settings
    cols = _sample_months(ws)
    factors = ws.panel.factors[cols]
    fids = sorted(ws.fund_benchmark)

    def run(fid):
        nav = ws.panel.fund_nav_return.get(fid)
        bench = ws.panel.benchmark_return.get(ws.fund_benchmark[fid])
        if nav is None or bench is None:
            return None, Exclusion(fid, "", model, "MISSING_NAV" if nav is None else "MISSING_INDEX",
                                   "no return series")
        y, d = nav[cols], bench[cols]
        try:
            if model == "simple":
                fit = fit_benchmark_simple(y, d, allow_gaps=st.allow_gaps)
            else:
                fit = fit_benchmark_ff(y, d, factors, allow_gaps=st.allow_gaps)
            track = tracking_stats(y, d, allow_gaps=st.allow_gaps)
        except AttribError as exc:
            return None, Exclusion(fid, "", model, exc.code, exc.message)
        test = coef_test(fit, "beta_d", 1.0, "two_sided")
        row = [fid, ws.fund_benchmark[fid], model, fit.n_obs, fit.coef["alpha"], fit.coef["beta_d"],
               fit.stderr["beta_d"], test.statistic, test.p_value]
        row += [int(test.reject_at(lv)) for lv in st.levels]
        row += [int(fit.coef["beta_d"] > 1.0), int(fit.short_sample),
                track.mean_diff, track.sd_diff, track.median_rel_diff]
        return row, None

    results = fan_out(run, fids, ws.threads)
    rows = [r for r, _ in results if r is not None]
    excl = [e.row() for _, e in results if e is not None]
    out = CommandOutput("validate-benchmark", "na")
    level_cols = tuple(f"reject_{_level_tag(lv)}" for lv in st.levels)
    out.tables["funds"] = (("fund_id", "benchmark_id", "model", "n_obs", "alpha", "beta_d", "se_beta_d",
                            "t_beta_d_eq_1", "p_value") + level_cols
                           + ("beta_d_gt_1", "short_sample", "mean_diff", "sd_diff", "median_rel_diff"), rows)
    n = len(rows)
    agg = [["n_funds", n], ["greater_than_1", sum(r[-5] for r in rows) / n if n else ""]]
    for j, lv in enumerate(st.levels):
        agg.append([f"significantly_not_1_at_{_level_tag(lv)}",
                    sum(r[9 + j] for r in rows) / n if n else ""])
    out.tables["aggregate"] = (("statistic", "value"), agg)
    out.tables["exclusions"] = (EXCLUSION_HEADER, sorted(excl))
    out.summary = {"model": model, **{k: _fmt(v) if v != "" else None for k, v in agg}}
    return out


def _level_tag(level: float) -> str:
    return f"{round(level * 100):02d}"


def cmd_persistence(ws: Workspace, measures: Sequence[str] = MEASURES,
                    direction: str | None = None) -> CommandOutput:
    """AR(1) persistence per fund and measure, with a one-sided test of beta_1 > 0."""
    st = ws.settings
    direction = direction or st.direction
    panels = measure_panels(ws, direction, measures)
    rows, agg, excl, summary = [], [], [], {}
    for m in MEASURES:
        if m not in panels:
            continue
        kept, dropped = panels[m].continuous()
        excl += [e.row() for e in panels[m].exclusions] + [e.row() for e in dropped]
        fids = sorted(kept)

        def run(fid, m=m, kept=kept):
            try:
                fit = fit_persistence(kept[fid])
            except AttribError as exc:
                return None, Exclusion(fid, "", m, exc.code, exc.message)
            test = coef_test(fit, "beta_1", 0.0, "greater")
            return [fid, m, fit.n_obs, fit.coef["beta_1"], fit.stderr["beta_1"], test.statistic,
                    test.p_value] + [int(test.reject_at(lv)) for lv in st.levels], None

        res = fan_out(run, fids, ws.threads)
        mrows = [r for r, _ in res if r is not None]
        excl += [e.row() for _, e in res if e is not None]
        rows += mrows
        n = len(mrows)
        pos = sum(1 for r in mrows if r[3] > 0) / n if n else ""
        sig = [sum(r[7 + j] for r in mrows) / n if n else "" for j in range(len(st.levels))]
        agg.append([m, n, pos] + sig)
        summary[m] = {"n_funds": n, "positive_proportion": _fmt(pos) if n else None,
                      **{f"significantly_positive_{_level_tag(lv)}": (_fmt(s) if n else None)
                         for lv, s in zip(st.levels, sig)},
                      "n_reports": len(panels[m].dates)}
    tags = tuple(_level_tag(lv) for lv in st.levels)
    out = CommandOutput("persistence", direction)
    out.tables["funds"] = (("fund_id", "measure", "n_obs", "beta_1", "se_beta_1", "t_stat", "p_value")
                           + tuple(f"reject_{t}" for t in tags), rows)
    out.tables["summary"] = (("measure", "n_funds", "positive_proportion")
                             + tuple(f"significantly_positive_{t}" for t in tags), agg)
    out.tables["exclusions"] = (EXCLUSION_HEADER, sorted(excl))
    out.summary = {"measures": summary}
    return out


PAIRS = {"ia-timing": ("ia", "before", "gamma"), "ss-alpha": ("ss", "after", "alpha")}


def cmd_associate(ws: Workspace, pair: str, end_year: int, span: int = 5) -> CommandOutput:
    """Cross-fund correlation between an accumulated Brinson measure and a regression ability.

    The sample is the ``span`` calendar years ending with ``end_year``.
    Only funds with a valid measure at every report whose window lies in the
    sample, and a NAV at every sample month, enter.
    """
    if pair not in PAIRS:
        raise AttribError("USAGE", f"pair {pair!r} not in {', '.join(PAIRS)}")
    if span < 1:
        raise AttribError("USAGE", "span must be >= 1")
    measure, direction, ability = PAIRS[pair]
    start, end = (end_year - span + 1) * 12, end_year * 12 + 11
    cols = _sample_months(ws, start, end)
    st = dataclasses.replace(ws.settings, sample_start=start, sample_end=end)
    sub = dataclasses.replace(ws, settings=st)
    panel = brinson_panels(sub, direction)[measure]
    kept, dropped = panel.continuous()
    excl = [e.row() for e in panel.exclusions] + [e.row() for e in dropped]
    factors = ws.panel.factors[cols]

    def run(fid):
        nav = ws.panel.fund_nav_return.get(fid)
        if nav is None:
            return None, Exclusion(fid, "", pair, "MISSING_NAV", "no NAV series")
        y = nav[cols] - factors[:, 3]
        try:
            if ability == "gamma":
                fit = fit_treynor_mazuy(y, factors[:, 0], allow_gaps=st.allow_gaps)
            else:
                fit = fit_fama_french(y, factors, allow_gaps=st.allow_gaps)
            acc = accumulate_geometric(kept[fid])
        except AttribError as exc:
            return None, Exclusion(fid, "", pair, exc.code, exc.message)
        return [fid, acc, fit.coef[ability], fit.stderr[ability], fit.n_obs], None

    res = fan_out(run, sorted(kept), ws.threads)
    rows = [r for r, _ in res if r is not None]
    excl += [e.row() for _, e in res if e is not None]
    if len(rows) < 3:
        raise AttribError("EMPTY_UNIVERSE", f"{len(rows)} qualifying fund(s) for {pair} "
                          f"{end_year - span + 1}-{end_year}; need 3")
    corr = pearson_test([r[1] for r in rows], [r[2] for r in rows])
    out = CommandOutput("associate", direction)
    out.tables["funds"] = (("fund_id", f"accumulated_{measure}", ability, f"se_{ability}", "n_months"), rows)
    out.tables["table"] = (("pair", "start_year", "end_year", "n_funds", "n_reports", "correlation",
                            "t_stat", "p_value", "stars"),
                           [[pair, end_year - span + 1, end_year, corr.n, len(panel.dates), corr.r,
                             corr.t_stat, corr.p_value, corr.stars]])
    out.tables["exclusions"] = (EXCLUSION_HEADER, sorted(excl))
    out.summary = {"pair": pair, "start_year": end_year - span + 1, "end_year": end_year,
                   "n_funds": corr.n, "n_reports": len(panel.dates), "correlation": corr.r,
                   "t_stat": _fmt(corr.t_stat), "p_value": corr.p_value, "stars": corr.stars}
    return out


def cmd_diagnose_holdings(ws: Workspace, direction: str | None = None) -> CommandOutput:
    """Per-report spread of assumed-minus-actual returns across funds."""
    direction = direction or ws.settings.direction
    snaps = ws.semiannual()
    windows, dropped = _windows(ws, (s.report_date for s in snaps), direction, 6, "validity")
    by_fund: dict[str, list[HoldingsSnapshot]] = defaultdict(list)
    for s in snaps:
        if s.report_date in windows:
            by_fund[s.fund_id].append(s)

    def run(fid):
        rows, excl = [], []
        for s in by_fund[fid]:
            try:
                v = holding_validity_diff(fid, s, ws.panel, direction, windows[s.report_date])
                rows.append([fid, _iso(s.report_date), v.assumed_return, v.actual_return, v.diff])
            except AttribError as exc:
                excl.append(Exclusion(fid, _iso(s.report_date), "validity", exc.code, exc.message))
        return rows, excl

    res = fan_out(run, sorted(by_fund), ws.threads)
    rows = sorted(r for rs, _ in res for r in rs)
    excl = [e.row() for e in dropped] + [e.row() for _, es in res for e in es]
    by_date: dict[str, list[float]] = defaultdict(list)
    for r in rows:
        by_date[r[1]].append(r[4])
    bands = []
    for d in sorted(by_date):
        b = box_stats(by_date[d])
        bands.append([d, b.n, b.p2_5, b.p25, b.p50, b.p75, b.p97_5, int(b.covers_zero)])
    out = CommandOutput("diagnose-holdings", direction)
    out.tables["funds"] = (("fund_id", "report_date", "assumed_return", "actual_return", "diff"), rows)
    out.tables["bands"] = (("report_date", "n_funds", "p2_5", "p25", "p50", "p75", "p97_5", "covers_zero"), bands)
    out.tables["exclusions"] = (EXCLUSION_HEADER, sorted(excl))
    out.summary = {"n_reports": len(bands), "n_covering_zero": sum(b[-1] for b in bands),
                   "max_abs_diff": _fmt(max((abs(r[4]) for r in rows), default=float("nan")))}
    return out
