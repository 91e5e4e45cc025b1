"""Domain types shared across the package.

Weights are always fractions (0.6, not 60). File parsers convert once at the
boundary; nothing downstream rescales units.
"""
from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field, replace
from typing import Literal, Mapping

import numpy as np

ReportKind = Literal["semiannual", "quarterly"]
Direction = Literal["before", "after"]
Severity = Literal["error", "warning"]

SLEEVE_TOL = 1e-9
NORMALIZED_TOL = 1e-12


class AttribError(ValueError):
    """Raised when an operation cannot produce a result.

    ``code`` is a short machine-readable tag such as ``EMPTY_SLEEVE`` or
    ``RANK_DEFICIENT``.
    """

    def __init__(self, code: str, message: str = ""):
        self.code = code
        self.message = message or code
        super().__init__(f"{code}: {self.message}")


# ---------------------------------------------------------------------------
# months
# ---------------------------------------------------------------------------
# A month is an int ordinal: year * 12 + (month - 1).

def month_of(date: dt.date) -> int:
    return date.year * 12 + date.month - 1


def month_label(m: int) -> str:
    return f"{m // 12:04d}-{m % 12 + 1:02d}"


def parse_month(text: str) -> int:
    """Parse ``YYYY-MM`` or ``YYYY-MM-DD`` into a month ordinal."""
    text = text.strip()
    parts = text.split("-")
    if len(parts) == 2:
        year, month = int(parts[0]), int(parts[1])
        if not 1 <= month <= 12:
            raise ValueError(f"bad month {text!r}")
        return year * 12 + month - 1
    return month_of(dt.date.fromisoformat(text))


def month_end(m: int) -> dt.date:
    year, month = divmod(m, 12)
    nxt = dt.date(year + (month + 1) // 12, (month + 1) % 12 + 1, 1)
    return nxt - dt.timedelta(days=1)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Issue:
    severity: Severity
    code: str
    message: str
    line: int | None = None
    item: str | None = None


@dataclass(frozen=True)
class ValidationReport:
    subject_id: str
    issues: tuple[Issue, ...] = ()

    @property
    def errors(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "error")

    @property
    def warnings(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.subject_id, self.issues + other.issues)


# ---------------------------------------------------------------------------
# holdings and benchmarks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AssetWeights:
    stock: float
    bond: float
    other: float = 0.0

    @classmethod
    def from_sleeves(cls, stock: float, bond: float) -> "AssetWeights":
        return cls(stock, bond, max(0.0, 1.0 - stock - bond))

    def total(self) -> float:
        return self.stock + self.bond + self.other


@dataclass(frozen=True)
class HoldingsSnapshot:
    """One fund's reported positions at a report date.

    ``positions`` weights are fractions of fund net assets as reported;
    :func:`normalize_stock_sleeve` turns them into within-sleeve fractions.
    ``stock_capital`` is the summed position value when the source file
    carried one, else ``None``.
    """

    fund_id: str
    report_date: dt.date
    positions: tuple[tuple[str, float], ...]
    asset_weights: AssetWeights
    report_kind: ReportKind = "semiannual"
    stock_capital: float | None = None

    @property
    def weights(self) -> dict[str, float]:
        return dict(self.positions)

    @property
    def n_stocks(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class BenchmarkDefinition:
    benchmark_id: str
    as_of: dt.date
    constituents: tuple[tuple[str, float], ...]
    asset_weights: AssetWeights

    @property
    def weights(self) -> dict[str, float]:
        return dict(self.constituents)


# ---------------------------------------------------------------------------
# market data
# ---------------------------------------------------------------------------

FACTOR_COLUMNS = ("market_excess", "smb", "hml", "risk_free")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MarketPanel:
    """Monthly market data on a gap-free month grid.

    Every array is indexed by position in ``periods``. Missing cells are NaN;
    ``stock_returns`` is NaN wherever no return could be formed, and
    ``closes`` keeps the raw reported closes (NaN where nothing was reported)
    so the panel can be written back out losslessly.
    """

    periods: tuple[int, ...]
    stock_ids: tuple[str, ...]
    closes: np.ndarray
    stock_returns: np.ndarray
    industry_of: Mapping[str, str]
    factors: np.ndarray
    stock_market_return: np.ndarray
    bond_market_return: np.ndarray
    fund_nav_return: Mapping[str, np.ndarray]
    benchmark_return: Mapping[str, np.ndarray]
    gap_limit: int = 2
    stock_index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = self.periods
        if any(b - a != 1 for a, b in zip(p, p[1:])):
            raise AttribError("NONMONOTONIC_DATES", "panel periods must be consecutive months")
        n = len(p)
        for name in ("stock_returns", "closes"):
            arr = getattr(self, name)
            if arr.shape != (len(self.stock_ids), n):
                raise ValueError(f"{name} has shape {arr.shape}")
        if self.factors.shape != (n, len(FACTOR_COLUMNS)):
            raise ValueError(f"factors has shape {self.factors.shape}")
        finite = self.stock_returns[~np.isnan(self.stock_returns)]
        if not np.all(np.isfinite(finite)):
            raise AttribError("NONFINITE", "stock returns must be finite or missing")
        for name in ("closes", "stock_returns", "factors", "stock_market_return", "bond_market_return"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        object.__setattr__(self, "fund_nav_return",
                           {k: _frozen(v) for k, v in sorted(self.fund_nav_return.items())})
        object.__setattr__(self, "benchmark_return",
                           {k: _frozen(v) for k, v in sorted(self.benchmark_return.items())})
        object.__setattr__(self, "stock_index", {s: i for i, s in enumerate(self.stock_ids)})

    def equals(self, other: "MarketPanel") -> bool:
        """Exact equality, NaN cells comparing equal to NaN."""
        def same(a, b):
            return a.shape == b.shape and np.array_equal(a, b, equal_nan=True)

        def same_map(a, b):
            return a.keys() == b.keys() and all(same(a[k], b[k]) for k in a)

        return (
            self.periods == other.periods
            and self.stock_ids == other.stock_ids
            and dict(self.industry_of) == dict(other.industry_of)
            and self.gap_limit == other.gap_limit
            and all(same(getattr(self, n), getattr(other, n))
                    for n in ("closes", "stock_returns", "factors",
                              "stock_market_return", "bond_market_return"))
            and same_map(self.fund_nav_return, other.fund_nav_return)
            and same_map(self.benchmark_return, other.benchmark_return)
        )

    @property
    def first(self) -> int:
        return self.periods[0]

    @property
    def last(self) -> int:
        return self.periods[-1]

    def column(self, month: int) -> int:
        if not self.periods or not self.first <= month <= self.last:
            raise AttribError("WINDOW_OUT_OF_RANGE", f"{month_label(month)} outside panel")
        return month - self.first

    def market_return(self) -> np.ndarray:
        """Overall market return r_m (market excess plus risk-free)."""
        return self.factors[:, 0] + self.factors[:, 3]


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def validate_snapshot(snapshot: HoldingsSnapshot) -> ValidationReport:
    """List every violated snapshot invariant; never raises."""
    issues: list[Issue] = []
    seen: set[str] = set()
    dups: set[str] = set()
    for stock_id, w in snapshot.positions:
        if stock_id in seen:
            dups.add(stock_id)
        seen.add(stock_id)
        if not (isinstance(w, (int, float)) and 0.0 <= w <= 1.0):
            issues.append(Issue("error", "WEIGHT_RANGE", f"{stock_id} weight {w!r} outside [0, 1]",
                                item=stock_id))
    for stock_id in sorted(dups):
        issues.append(Issue("error", "DUP_STOCK", f"{stock_id} listed more than once", item=stock_id))

    aw = snapshot.asset_weights
    parts = {"stock": aw.stock, "bond": aw.bond, "other": aw.other}
    bad = [k for k, v in parts.items() if not (0.0 <= v <= 1.0)]
    for k in bad:
        issues.append(Issue("error", "WEIGHT_RANGE", f"{k} sleeve {parts[k]!r} outside [0, 1]"))
    if not bad and aw.total() > 1.0 + SLEEVE_TOL:
        issues.append(Issue("error", "SLEEVE_SUM", f"sleeves sum to {aw.total():.6g} > 1"))

    if snapshot.report_kind == "semiannual" and not snapshot.positions:
        issues.append(Issue("error", "EMPTY_POSITIONS", "semiannual report has no positions"))
    subject = f"{snapshot.fund_id}@{snapshot.report_date.isoformat()}"
    return ValidationReport(subject, tuple(issues))


def normalize_stock_sleeve(snapshot: HoldingsSnapshot) -> HoldingsSnapshot:
    """Rescale position weights to within-sleeve fractions summing to one."""
    total = math.fsum(w for _, w in snapshot.positions)
    if not total > 0.0:
        raise AttribError("EMPTY_SLEEVE", f"{snapshot.fund_id} has no positive stock weight")
    # already-normalized input is returned untouched, which makes this idempotent
    if abs(total - 1.0) <= NORMALIZED_TOL:
        return snapshot
    positions = tuple((s, w / total) for s, w in snapshot.positions)
    return replace(snapshot, positions=positions)
