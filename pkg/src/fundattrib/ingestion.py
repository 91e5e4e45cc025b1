"""CSV ingestion, return windows and per-window cumulative returns.

File grammars (UTF-8, header row, '.' decimal, ISO-8601 dates; months may be
written ``YYYY-MM`` or as any date inside the month)::

    holdings.csv   fund_id,report_date,report_kind,stock_id,weight,stock_sleeve,bond_sleeve[,value]
    benchmark.csv  benchmark_id,as_of,stock_id,weight,stock_sleeve,bond_sleeve
    prices.csv     stock_id,month,close
    industries.csv stock_id,industry_id
    factors.csv    month,market_excess,smb,hml,risk_free
    nav.csv        fund_id,month,nav_return
    index.csv      benchmark_id,month,index_return
    funds.csv      fund_id,benchmark_id

A holdings row with an empty ``stock_id`` carries sleeve weights only (the
usual shape of a quarterly report). ``index.csv`` may also carry the reserved
series ``MKT_STOCK`` and ``MKT_BOND``: the stock and bond market indices used
for asset allocation. Without ``MKT_STOCK`` the stock market return is taken
as ``market_excess + risk_free``.
"""
from __future__ import annotations

import csv
import datetime as dt
import io
import math
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Union

import numpy as np

from .data_model import (
    FACTOR_COLUMNS,
    AssetWeights,
    AttribError,
    BenchmarkDefinition,
    Direction,
    HoldingsSnapshot,
    Issue,
    MarketPanel,
    ValidationReport,
    month_label,
    month_of,
    parse_month,
    validate_snapshot,
)

STOCK_MARKET_ID = "MKT_STOCK"
BOND_MARKET_ID = "MKT_BOND"
RESERVED_INDEX_IDS = (STOCK_MARKET_ID, BOND_MARKET_ID)

DEFAULT_GAP_LIMIT = 2
RENORM_TOL = 1e-4

HOLDINGS_COLUMNS = ("fund_id", "report_date", "report_kind", "stock_id", "weight",
                    "stock_sleeve", "bond_sleeve")
BENCHMARK_COLUMNS = ("benchmark_id", "as_of", "stock_id", "weight", "stock_sleeve", "bond_sleeve")
PRICE_COLUMNS = ("stock_id", "month", "close")
INDUSTRY_COLUMNS = ("stock_id", "industry_id")
FACTOR_FILE_COLUMNS = ("month",) + FACTOR_COLUMNS
NAV_COLUMNS = ("fund_id", "month", "nav_return")
INDEX_COLUMNS = ("benchmark_id", "month", "index_return")
FUND_MAP_COLUMNS = ("fund_id", "benchmark_id")

Source = Union[str, os.PathLike, bytes, IO[bytes], IO[str]]


# ---------------------------------------------------------------------------
# low-level reading
# ---------------------------------------------------------------------------

def _read_text(stream: Source) -> str:
    try:
        if isinstance(stream, (str, os.PathLike)):
            with open(stream, "rb") as fh:
                data = fh.read()
        elif isinstance(stream, bytes):
            data = stream
        else:
            data = stream.read()
    except OSError as exc:
        raise AttribError("IO_READ", str(exc)) from exc
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise AttribError("IO_READ", f"not UTF-8: {exc}") from exc
    return data


class _Rows:
    """Header-checked CSV rows with per-line issue collection."""

    def __init__(self, stream: Source, required: tuple[str, ...], name: str,
                 optional: tuple[str, ...] = ()):
        self.name = name
        self.issues: list[Issue] = []
        self._reader = csv.reader(io.StringIO(_read_text(stream)))
        self.columns: dict[str, int] = {}
        self.ok = False
        try:
            header = next(self._reader)
        except StopIteration:
            self.issues.append(Issue("error", "CSV_SYNTAX", f"{name}: missing header row", line=1))
            return
        header = [h.strip() for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            self.issues.append(Issue("error", "CSV_SYNTAX",
                                     f"{name}: header lacks {', '.join(missing)}", line=1))
            return
        self.columns = {c: header.index(c) for c in required + optional if c in header}
        self._width = len(header)
        self.ok = True

    def error(self, code: str, message: str, line: int | None, item: str | None = None) -> None:
        self.issues.append(Issue("error", code, f"{self.name}: {message}", line=line, item=item))

    def warn(self, code: str, message: str, line: int | None = None, item: str | None = None) -> None:
        self.issues.append(Issue("warning", code, f"{self.name}: {message}", line=line, item=item))

    def __iter__(self) -> Iterator[tuple[int, dict[str, str]]]:
        if not self.ok:
            return
        while True:
            try:
                raw = next(self._reader)
            except StopIteration:
                return
            except csv.Error as exc:
                self.error("CSV_SYNTAX", str(exc), self._reader.line_num)
                continue
            line = self._reader.line_num
            if not raw or all(not c.strip() for c in raw):
                continue
            if len(raw) != self._width:
                self.error("CSV_SYNTAX", f"expected {self._width} fields, got {len(raw)}", line)
                continue
            yield line, {c: raw[i].strip() for c, i in self.columns.items()}


def _number(text: str) -> float:
    x = float(text)
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {text!r}")
    return x


def _date(text: str) -> dt.date:
    return dt.date.fromisoformat(text)


# ---------------------------------------------------------------------------
# holdings
# ---------------------------------------------------------------------------

def parse_holdings_csv(stream: Source) -> tuple[list[HoldingsSnapshot], ValidationReport]:
    """Parse holdings rows into one snapshot per (fund, report date).

    Parsing never stops at a bad line: malformed rows become issues keyed by
    line number and any snapshot touched by an error is left out of the
    returned list.
    """
    rows = _Rows(stream, HOLDINGS_COLUMNS, "holdings.csv", optional=("value",))
    groups: dict[tuple[str, dt.date], dict] = {}
    bad: set[tuple[str, dt.date]] = set()

    for line, r in rows:
        try:
            fund_id = r["fund_id"]
            if not fund_id:
                raise ValueError("empty fund_id")
            report_date = _date(r["report_date"])
        except ValueError as exc:
            rows.error("CSV_SYNTAX", str(exc), line)
            continue
        key = (fund_id, report_date)
        g = groups.setdefault(key, {"positions": [], "lines": {}, "sleeves": None,
                                    "kind": None, "first_line": line, "capital": []})
        try:
            kind = r["report_kind"].lower()
            if kind not in ("semiannual", "quarterly"):
                raise ValueError(f"report_kind {r['report_kind']!r}")
            sleeves = (_number(r["stock_sleeve"]), _number(r["bond_sleeve"]))
            stock_id = r["stock_id"]
            weight = _number(r["weight"]) if stock_id else None
            value = r.get("value", "")
            value = _number(value) if (stock_id and value) else None
        except ValueError as exc:
            rows.error("CSV_SYNTAX", str(exc), line)
            bad.add(key)
            continue
        if g["kind"] is None:
            g["kind"] = kind
        elif g["kind"] != kind:
            rows.error("KIND_MISMATCH", f"{fund_id} {report_date} mixes report kinds", line)
            bad.add(key)
        if g["sleeves"] is None:
            g["sleeves"] = sleeves
        elif g["sleeves"] != sleeves:
            rows.error("SLEEVE_MISMATCH", f"{fund_id} {report_date} rows disagree on sleeves", line)
            bad.add(key)
        if stock_id:
            g["positions"].append((stock_id, weight))
            g["lines"].setdefault(stock_id, []).append(line)
            if value is not None:
                g["capital"].append(value)

    snapshots = []
    for key in sorted(groups):
        g = groups[key]
        if g["sleeves"] is None:
            continue
        n_pos = len(g["positions"])
        snap = HoldingsSnapshot(
            fund_id=key[0],
            report_date=key[1],
            positions=tuple(g["positions"]),
            asset_weights=AssetWeights.from_sleeves(*g["sleeves"]),
            report_kind=g["kind"],
            stock_capital=math.fsum(g["capital"]) if n_pos and len(g["capital"]) == n_pos else None,
        )
        report = validate_snapshot(snap)
        for issue in report.issues:
            lines = g["lines"].get(issue.item or "", [])
            line = lines[-1] if issue.code == "DUP_STOCK" and lines else (lines[0] if lines else g["first_line"])
            rows.issues.append(Issue(issue.severity, issue.code,
                                     f"holdings.csv: {report.subject_id}: {issue.message}",
                                     line=line, item=issue.item))
        if report.errors or key in bad:
            continue
        snapshots.append(snap)
    return snapshots, ValidationReport("holdings.csv", tuple(rows.issues))


def write_holdings_csv(snapshots: Iterable[HoldingsSnapshot], with_value: bool = False) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(HOLDINGS_COLUMNS + (("value",) if with_value else ()))
    for s in sorted(snapshots, key=lambda s: (s.fund_id, s.report_date)):
        base = [s.fund_id, s.report_date.isoformat(), s.report_kind]
        sleeves = [repr(s.asset_weights.stock), repr(s.asset_weights.bond)]
        if not s.positions:
            w.writerow(base + ["", ""] + sleeves + ([""] if with_value else []))
        for stock_id, weight in s.positions:
            w.writerow(base + [stock_id, repr(weight)] + sleeves + ([""] if with_value else []))
    return out.getvalue()


# ---------------------------------------------------------------------------
# benchmarks
# ---------------------------------------------------------------------------

def parse_benchmark_csv(stream: Source) -> tuple[list[BenchmarkDefinition], ValidationReport]:
    """Parse benchmark constituents, renormalizing weights to sum to one.

    A raw weight sum off by more than 1e-4 is renormalized with a ``RENORM``
    warning; smaller drift is renormalized silently.
    """
    rows = _Rows(stream, BENCHMARK_COLUMNS, "benchmark.csv")
    groups: dict[tuple[str, dt.date], dict] = {}
    bad: set = set()
    for line, r in rows:
        try:
            bid = r["benchmark_id"]
            if not bid:
                raise ValueError("empty benchmark_id")
            as_of = _date(r["as_of"])
        except ValueError as exc:
            rows.error("CSV_SYNTAX", str(exc), line)
            continue
        key = (bid, as_of)
        g = groups.setdefault(key, {"cons": [], "seen": set(), "sleeves": None, "line": line})
        try:
            sleeves = (_number(r["stock_sleeve"]), _number(r["bond_sleeve"]))
            stock_id = r["stock_id"]
            weight = _number(r["weight"]) if stock_id else None
        except ValueError as exc:
            rows.error("CSV_SYNTAX", str(exc), line)
            bad.add(key)
            continue
        if g["sleeves"] is None:
            g["sleeves"] = sleeves
        elif g["sleeves"] != sleeves:
            rows.error("SLEEVE_MISMATCH", f"{bid} {as_of} rows disagree on sleeves", line)
            bad.add(key)
        if not stock_id:
            continue
        if stock_id in g["seen"]:
            rows.error("DUP_STOCK", f"{bid} {as_of}: {stock_id} listed more than once", line, stock_id)
            bad.add(key)
        if not 0.0 <= weight <= 1.0:
            rows.error("WEIGHT_RANGE", f"{bid} {as_of}: {stock_id} weight {weight!r}", line, stock_id)
            bad.add(key)
        g["seen"].add(stock_id)
        g["cons"].append((stock_id, weight))

    out = []
    for key in sorted(groups):
        g = groups[key]
        if g["sleeves"] is None:
            continue
        bid, as_of = key
        stock, bond = g["sleeves"]
        if not (0 <= stock <= 1 and 0 <= bond <= 1) or stock + bond > 1 + 1e-9:
            rows.error("SLEEVE_SUM", f"{bid} {as_of}: sleeves ({stock}, {bond}) invalid", g["line"])
            continue
        if key in bad:
            continue
        total = math.fsum(w for _, w in g["cons"])
        if not total > 0:
            rows.error("EMPTY_POSITIONS", f"{bid} {as_of}: no constituent weight", g["line"])
            continue
        if abs(total - 1.0) > RENORM_TOL:
            rows.warn("RENORM", f"{bid} {as_of}: weights sum to {total:.8g}, renormalized", g["line"])
        cons = g["cons"] if total == 1.0 else [(s, w / total) for s, w in g["cons"]]
        out.append(BenchmarkDefinition(bid, as_of, tuple(cons), AssetWeights.from_sleeves(stock, bond)))
    return out, ValidationReport("benchmark.csv", tuple(rows.issues))


def write_benchmark_csv(definitions: Iterable[BenchmarkDefinition]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(BENCHMARK_COLUMNS)
    for d in sorted(definitions, key=lambda d: (d.benchmark_id, d.as_of)):
        for stock_id, weight in d.constituents:
            w.writerow([d.benchmark_id, d.as_of.isoformat(), stock_id, repr(weight),
                        repr(d.asset_weights.stock), repr(d.asset_weights.bond)])
    return out.getvalue()


def benchmark_as_of(definitions: Iterable[BenchmarkDefinition], benchmark_id: str,
                    date: dt.date) -> BenchmarkDefinition:
    """Latest definition of ``benchmark_id`` dated on or before ``date``."""
    best = None
    for d in definitions:
        if d.benchmark_id == benchmark_id and d.as_of <= date and (best is None or d.as_of > best.as_of):
            best = d
    if best is None:
        raise AttribError("NO_BENCHMARK", f"no {benchmark_id} definition on or before {date}")
    return best


# ---------------------------------------------------------------------------
# fund -> benchmark map
# ---------------------------------------------------------------------------

def parse_fund_map(stream: Source) -> tuple[dict[str, str], ValidationReport]:
    rows = _Rows(stream, FUND_MAP_COLUMNS, "funds.csv")
    mapping: dict[str, str] = {}
    for line, r in rows:
        fid, bid = r["fund_id"], r["benchmark_id"]
        if not fid or not bid:
            rows.error("CSV_SYNTAX", "empty identifier", line)
        elif fid in mapping and mapping[fid] != bid:
            rows.error("DUP_FUND", f"{fid} mapped to two benchmarks", line, fid)
        else:
            mapping[fid] = bid
    return dict(sorted(mapping.items())), ValidationReport("funds.csv", tuple(rows.issues))


def write_fund_map(mapping: dict[str, str]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(FUND_MAP_COLUMNS)
    for fid in sorted(mapping):
        w.writerow([fid, mapping[fid]])
    return out.getvalue()


# ---------------------------------------------------------------------------
# market panel
# ---------------------------------------------------------------------------

def _dated_series(rows: _Rows, id_col: str, value_col: str, positive: bool = False
                  ) -> dict[str, dict[int, float]]:
    series: dict[str, dict[int, float]] = defaultdict(dict)
    last_seen: dict[str, int] = {}
    bad: set[str] = set()
    for line, r in rows:
        sid = r[id_col]
        try:
            if not sid:
                raise ValueError(f"empty {id_col}")
            month = parse_month(r["month"])
            value = _number(r[value_col])
        except ValueError as exc:
            rows.error("CSV_SYNTAX", str(exc), line)
            continue
        if positive and not value > 0:
            rows.error("PRICE_RANGE", f"{sid} {month_label(month)} close {value!r} not positive", line, sid)
            bad.add(sid)
            continue
        if month in series[sid]:
            rows.error("DUP_ROW", f"{sid} {month_label(month)} given twice", line, sid)
            bad.add(sid)
            continue
        if sid in last_seen and month < last_seen[sid]:
            rows.error("NONMONOTONIC_DATES", f"{sid} dates out of order at {month_label(month)}", line, sid)
            bad.add(sid)
        last_seen[sid] = month
        series[sid][month] = value
    return {k: v for k, v in sorted(series.items()) if k not in bad}


def returns_from_closes(closes: np.ndarray, gap_limit: int = DEFAULT_GAP_LIMIT
                        ) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Simple monthly returns from a close-price row with NaN gaps.

    A gap of up to ``gap_limit`` months carries the last close forward (return
    0 while carried); trailing months after the last close count as a gap.
    Longer gaps leave the cells from month ``gap_limit + 1`` of the gap onward
    missing, and the month prices resume is missing too
    because no valid previous close exists. Returns the return row and the
    (start, stop) column spans marked stale.
    """
    n = len(closes)
    out = np.full(n, np.nan)
    stale: list[tuple[int, int]] = []
    if n and not np.isnan(closes).any():
        out[1:] = closes[1:] / closes[:-1] - 1.0
        return out, stale
    observed = np.flatnonzero(~np.isnan(closes))
    if observed.size == 0:
        return out, stale
    prev = closes[observed[0]]
    gap = 0
    stale_start = None
    for t in range(observed[0] + 1, n):
        p = closes[t]
        if not np.isnan(p):
            if prev is not None:
                out[t] = p / prev - 1.0
            if stale_start is not None:
                stale.append((stale_start, t))
                stale_start = None
            prev, gap = p, 0
        else:
            gap += 1
            if gap <= gap_limit and prev is not None:
                out[t] = 0.0
            else:
                prev = None
                if stale_start is None:
                    stale_start = t
    if stale_start is not None:
        stale.append((stale_start, n))
    return out, stale


def parse_market_panel(price_stream: Source, industry_stream: Source, factor_stream: Source,
                       nav_stream: Source, index_stream: Source,
                       gap_limit: int = DEFAULT_GAP_LIMIT) -> tuple[MarketPanel, ValidationReport]:
    """Assemble a :class:`MarketPanel` from the five market-data files.

    The month grid spans the earliest to the latest month seen in any file.
    Stock returns come from adjacent closes, ``p_t / p_{t-1} - 1``.
    """
    issues: list[Issue] = []

    prices_rows = _Rows(price_stream, PRICE_COLUMNS, "prices.csv")
    prices = _dated_series(prices_rows, "stock_id", "close", positive=True)
    issues += prices_rows.issues

    ind_rows = _Rows(industry_stream, INDUSTRY_COLUMNS, "industries.csv")
    industry_of: dict[str, str] = {}
    for line, r in ind_rows:
        sid, ind = r["stock_id"], r["industry_id"]
        if not sid or not ind:
            ind_rows.error("CSV_SYNTAX", "empty identifier", line)
        elif sid in industry_of:
            ind_rows.error("DUP_STOCK", f"{sid} classified twice", line, sid)
        else:
            industry_of[sid] = ind
    issues += ind_rows.issues

    fac_rows = _Rows(factor_stream, FACTOR_FILE_COLUMNS, "factors.csv")
    factor_map: dict[int, tuple[float, ...]] = {}
    last = None
    for line, r in fac_rows:
        try:
            month = parse_month(r["month"])
            values = tuple(_number(r[c]) for c in FACTOR_COLUMNS)
        except ValueError as exc:
            fac_rows.error("CSV_SYNTAX", str(exc), line)
            continue
        if month in factor_map:
            fac_rows.error("DUP_ROW", f"{month_label(month)} given twice", line)
            continue
        if last is not None and month < last:
            fac_rows.error("NONMONOTONIC_DATES", f"factor dates out of order at {month_label(month)}", line)
        last = month
        factor_map[month] = values
    issues += fac_rows.issues

    nav_rows = _Rows(nav_stream, NAV_COLUMNS, "nav.csv")
    nav = _dated_series(nav_rows, "fund_id", "nav_return")
    issues += nav_rows.issues

    idx_rows = _Rows(index_stream, INDEX_COLUMNS, "index.csv")
    index = _dated_series(idx_rows, "benchmark_id", "index_return")
    issues += idx_rows.issues

    months = set(factor_map)
    for group in (prices, nav, index):
        for s in group.values():
            months.update(s)
    if months:
        periods = tuple(range(min(months), max(months) + 1))
    else:
        periods = ()
    n = len(periods)
    first = periods[0] if periods else 0

    def dense(s: dict[int, float]) -> np.ndarray:
        a = np.full(n, np.nan)
        for m, v in s.items():
            a[m - first] = v
        return a

    stock_ids = tuple(sorted(prices))
    closes = np.full((len(stock_ids), n), np.nan)
    rets = np.full((len(stock_ids), n), np.nan)
    for i, sid in enumerate(stock_ids):
        closes[i] = dense(prices[sid])
        rets[i], stale = returns_from_closes(closes[i], gap_limit)
        for a, b in stale:
            issues.append(Issue("warning", "STALE_PRICE",
                                f"prices.csv: {sid} missing {month_label(periods[a])}..{month_label(periods[b - 1])}"
                                f" beyond gap limit {gap_limit}; returns marked missing", item=sid))

    factors = np.full((n, len(FACTOR_COLUMNS)), np.nan)
    for m, v in factor_map.items():
        factors[m - first] = v

    if STOCK_MARKET_ID in index:
        stock_market = dense(index[STOCK_MARKET_ID])
    else:
        stock_market = factors[:, 0] + factors[:, 3]
    bond_market = dense(index.get(BOND_MARKET_ID, {}))

    panel = MarketPanel(
        periods=periods,
        stock_ids=stock_ids,
        closes=closes,
        stock_returns=rets,
        industry_of=dict(sorted(industry_of.items())),
        factors=factors,
        stock_market_return=stock_market,
        bond_market_return=bond_market,
        fund_nav_return={k: dense(v) for k, v in nav.items()},
        benchmark_return={k: dense(v) for k, v in index.items() if k not in RESERVED_INDEX_IDS},
        gap_limit=gap_limit,
    )
    return panel, ValidationReport("market", tuple(issues))


def write_market_panel(panel: MarketPanel) -> dict[str, str]:
    """Serialize a panel back into the five market file grammars.

    Keys are ``prices``, ``industries``, ``factors``, ``nav`` and ``index``.
    Floats are written with ``repr`` so reparsing is exact.
    """
    labels = [month_label(m) for m in panel.periods]

    def table(header, rows) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return out.getvalue()

    def series_rows(sid, arr):
        return [[sid, labels[j], repr(float(arr[j]))] for j in np.flatnonzero(~np.isnan(arr))]

    prices = []
    for i, sid in enumerate(panel.stock_ids):
        prices += series_rows(sid, panel.closes[i])
    nav = []
    for fid, arr in panel.fund_nav_return.items():
        nav += series_rows(fid, arr)
    index = []
    for bid, arr in panel.benchmark_return.items():
        index += series_rows(bid, arr)
    index += series_rows(STOCK_MARKET_ID, panel.stock_market_return)
    index += series_rows(BOND_MARKET_ID, panel.bond_market_return)
    index.sort(key=lambda r: r[0])
    factors = [[labels[j]] + [repr(float(x)) for x in panel.factors[j]]
               for j in range(len(labels)) if not np.isnan(panel.factors[j]).all()]
    return {
        "prices": table(PRICE_COLUMNS, prices),
        "industries": table(INDUSTRY_COLUMNS, sorted(panel.industry_of.items())),
        "factors": table(FACTOR_FILE_COLUMNS, factors),
        "nav": table(NAV_COLUMNS, nav),
        "index": table(INDEX_COLUMNS, index),
    }


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowSpec:
    report_date: dt.date
    direction: Direction
    horizon_months: int = 6

    def __post_init__(self):
        if self.horizon_months not in (3, 6):
            raise AttribError("BAD_WINDOW", f"horizon {self.horizon_months} not in {{3, 6}}")
        if self.direction not in ("before", "after"):
            raise AttribError("BAD_WINDOW", f"direction {self.direction!r}")

    @property
    def months(self) -> tuple[int, ...]:
        """Month ordinals covered, in order.

        ``before`` ends with the report month; ``after`` starts the month
        after it.
        """
        m = month_of(self.report_date)
        h = self.horizon_months
        if self.direction == "before":
            return tuple(range(m - h + 1, m + 1))
        return tuple(range(m + 1, m + h + 1))


@dataclass(frozen=True, eq=False)
class WindowReturns:
    """Cumulative returns over one window.

    ``per_stock`` only holds stocks priced in every month of the window; the
    rest are listed in ``omitted``. Market legs are NaN if any month is
    missing.
    """

    spec: WindowSpec
    per_stock: dict[str, float]
    stock_market: float
    bond_market: float
    factor_rows: np.ndarray
    omitted: tuple[str, ...] = ()
    issues: tuple[Issue, ...] = field(default=())

    @property
    def months(self) -> tuple[int, ...]:
        return self.spec.months


def compound(returns: np.ndarray, axis: int = -1) -> np.ndarray:
    """Geometric compounding ``prod(1 + r) - 1`` along ``axis``."""
    return np.prod(1.0 + np.asarray(returns, dtype=float), axis=axis) - 1.0


def window_columns(panel: MarketPanel, spec: WindowSpec) -> slice:
    months = spec.months
    if not panel.periods or months[0] < panel.first or months[-1] > panel.last:
        raise AttribError("WINDOW_OUT_OF_RANGE",
                          f"{month_label(months[0])}..{month_label(months[-1])} not covered by panel")
    a = months[0] - panel.first
    return slice(a, a + len(months))


def resolve_window(panel: MarketPanel, spec: WindowSpec,
                   stocks: Iterable[str] | None = None) -> WindowReturns:
    """Cumulative stock and market returns over the window ``spec``.

    ``stocks`` restricts the per-stock table to a subset (all panel stocks by
    default); unknown ids count as omitted.
    """
    cols = window_columns(panel, spec)
    if stocks is None:
        ids = panel.stock_ids
        block = panel.stock_returns[:, cols]
        unknown: list[str] = []
    else:
        wanted = sorted(set(stocks))
        ids = tuple(s for s in wanted if s in panel.stock_index)
        unknown = [s for s in wanted if s not in panel.stock_index]
        block = panel.stock_returns[[panel.stock_index[s] for s in ids], cols]
    cum = compound(block, axis=1) if len(ids) else np.empty(0)
    priced = ~np.isnan(cum)
    per_stock = {s: float(c) for s, c, ok in zip(ids, cum, priced) if ok}
    omitted = tuple(sorted(unknown + [s for s, ok in zip(ids, priced) if not ok]))
    issues = ()
    if omitted and stocks is not None:
        label = f"{month_label(spec.months[0])}..{month_label(spec.months[-1])}"
        issues = (Issue("warning", "UNPRICED_STOCK",
                        f"{len(omitted)} stock(s) lack returns over {label}: {', '.join(omitted[:5])}"),)
    return WindowReturns(
        spec=spec,
        per_stock=per_stock,
        stock_market=float(compound(panel.stock_market_return[cols])),
        bond_market=float(compound(panel.bond_market_return[cols])),
        factor_rows=panel.factors[cols],
        omitted=omitted,
        issues=issues,
    )
