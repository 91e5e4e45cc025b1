"""Seeded synthetic fund universes with known skills.

The generator writes exactly the eight input files the ingestion layer reads,
so a synthetic workspace can be pushed through the whole pipeline and the
outputs checked against the skills that were injected.

Model, per month t in half-year h::

    r_it = rf + beta_j * m_t + f_jt + d_ih + e_it

with ``j`` the stock's industry, ``m_t`` the latent market excess return,
``f_jt`` an industry shock, ``e_it`` idiosyncratic noise, and
``d_ih = +/- winner_spread`` a drift that splits each industry into winners
and losers for the half-year.

Each half-year every fund holds one stock portfolio, bought at the start of
the half at its target weights and left untouched until the half ends. NAV
returns are the buy-and-hold returns of that stock portfolio plus optional
``nav_noise``; cash and bond sleeves are reported but do not enter the NAV.

Skills act on the portfolio choice:

* ``selection_drift`` tilts picks toward the half's winners so the held
  stocks' expected drift is ``selection_drift`` per month.
* ``timing_gamma`` shifts portfolio beta by ``timing_gamma * M_h`` (clipped
  to +/-0.5), where ``M_h`` is the half's realized market excess return, by
  reweighting industries with different betas. The fund's payoff is then
  convex in the market.
* ``persistence_rho`` makes the fund's half-yearly selection skill an AR(1)
  process around ``selection_drift`` with stationary sd ``skill_vol``.

``disclosure`` decides which portfolio a semiannual report shows: ``after``
reports at the end of half ``h - 1`` the portfolio held through half ``h``,
so after-window measures are exact; ``before`` reports at the end of half
``h`` the portfolio held through it.

Randomness comes from Philox streams keyed by ``(seed, purpose, index)``, so
a fund's draws never depend on how many other funds exist.
"""
from __future__ import annotations

import csv
import dataclasses
import datetime as dt
import io
import math
import os
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .data_model import (
    AssetWeights,
    AttribError,
    BenchmarkDefinition,
    HoldingsSnapshot,
    MarketPanel,
    month_end,
    month_label,
)
from .ingestion import (
    BENCHMARK_COLUMNS,
    BOND_MARKET_ID,
    DEFAULT_GAP_LIMIT,
    FACTOR_FILE_COLUMNS,
    FUND_MAP_COLUMNS,
    HOLDINGS_COLUMNS,
    INDEX_COLUMNS,
    INDUSTRY_COLUMNS,
    NAV_COLUMNS,
    PRICE_COLUMNS,
    STOCK_MARKET_ID,
    parse_benchmark_csv,
    returns_from_closes,
)

FILE_NAMES = ("holdings.csv", "benchmark.csv", "prices.csv", "industries.csv",
              "factors.csv", "nav.csv", "index.csv", "funds.csv")

# stream purposes
_MARKET, _STOCKS, _BENCH, _SKILL, _HOLD, _SLEEVE, _NAV, _SIZE = range(8)

MAX_BETA_SHIFT = 0.5


@dataclass(frozen=True)
class FundSkill:
    selection_drift: float = 0.0
    timing_gamma: float = 0.0
    persistence_rho: float = 0.0

    def __post_init__(self):
        if not -1.0 < self.persistence_rho < 1.0:
            raise ValueError(f"persistence_rho {self.persistence_rho} outside (-1, 1)")


@dataclass(frozen=True)
class UniverseConfig:
    """Size, seed and skills of a synthetic universe.

    ``skill`` lists one :class:`FundSkill` per fund; funds past its end get
    zero skill. ``n_months`` must be a whole number of half-years and the
    panel starts in January of ``start_year``.
    """

    n_funds: int = 40
    n_stocks: int = 200
    n_industries: int = 8
    n_months: int = 72
    seed: int = 0
    skill: tuple[FundSkill, ...] = ()
    start_year: int = 2012
    holdings_per_fund: int = 20
    n_benchmarks: int = 2
    turnover: float = 1.0
    disclosure: Literal["after", "before"] = "after"
    market_premium: float = 0.006
    market_vol: float = 0.045
    industry_vol: float = 0.02
    idio_vol: float = 0.06
    winner_spread: float = 0.01
    skill_vol: float = 0.0
    nav_noise: float = 0.0
    risk_free: float = 0.002
    bond_vol: float = 0.004
    factor_vol: float = 0.02
    industry_concentration: float = 40.0
    cap_dispersion: float = 1.0
    quarterly_reports: bool = True

    def __post_init__(self):
        for name in ("n_funds", "n_stocks", "n_industries", "n_months", "holdings_per_fund",
                     "n_benchmarks"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.n_months % 6:
            raise ValueError("n_months must be a multiple of 6")
        if self.n_industries > self.n_stocks:
            raise ValueError("more industries than stocks")
        if not 0.0 <= self.turnover <= 1.0:
            raise ValueError("turnover must lie in [0, 1]")
        if self.disclosure not in ("after", "before"):
            raise ValueError(f"disclosure {self.disclosure!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "skill", tuple(self.skill))

    def skill_of(self, fund: int) -> FundSkill:
        return self.skill[fund] if fund < len(self.skill) else FundSkill()


def _stream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(purpose, index))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class Trade:
    fund: int
    month: int
    into: int


@dataclass(frozen=True, eq=False)
class SyntheticUniverse:
    """A generated universe plus its ground truth.

    Month indices are 0-based positions in the return grid; ``month_ords``
    maps them to month ordinals. Index ``-1`` is the price base month.
    """

    config: UniverseConfig
    month_ords: tuple[int, ...]
    stock_ids: tuple[str, ...]
    industry_ids: tuple[str, ...]
    stock_industry: np.ndarray
    industry_beta: np.ndarray
    caps: np.ndarray
    closes: np.ndarray
    returns: np.ndarray
    winners: np.ndarray
    factors: np.ndarray
    stock_market: np.ndarray
    bond_market: np.ndarray
    benchmark_ids: tuple[str, ...]
    benchmark_sleeves: tuple[tuple[float, float], ...]
    benchmark_weights: np.ndarray
    benchmark_index: np.ndarray
    fund_ids: tuple[str, ...]
    fund_benchmark: tuple[int, ...]
    fund_size: np.ndarray
    selection_path: np.ndarray
    portfolios: tuple[tuple[tuple[np.ndarray, np.ndarray], ...], ...]
    sleeves: tuple[dict[int, tuple[float, float]], ...]
    nav: np.ndarray
    trades: tuple[Trade, ...] = field(default=())

    # ------------------------------------------------------------------
    @property
    def n_halves(self) -> int:
        return self.config.n_months // 6

    def report_month(self, half: int) -> int:
        """Return-grid index of the semiannual report disclosing ``half``'s portfolio."""
        return 6 * half - 1 if self.config.disclosure == "after" else 6 * half + 5

    def report_date(self, half: int) -> dt.date:
        return month_end(self.month_ords[0] + self.report_month(half))

    def fund_index(self, fund_id: str) -> int:
        try:
            return self.fund_ids.index(fund_id)
        except ValueError:
            raise AttribError("UNKNOWN_FUND", f"{fund_id} not in universe") from None

    def half_window_months(self, half: int) -> range:
        return range(6 * half, 6 * half + 6)

    # ------------------------------------------------------------------
    # in-memory views, identical to parsing the written files
    def snapshots(self) -> list[HoldingsSnapshot]:
        base = self.month_ords[0]
        reports = self._report_rows()
        out = []
        for f, fid in enumerate(self.fund_ids):
            for e, kind, h in reports:
                stock_s, bond_s = self.sleeves[f][e]
                sleeves = AssetWeights.from_sleeves(stock_s, bond_s)
                date = month_end(base + e)
                if kind == "quarterly":
                    out.append(HoldingsSnapshot(fid, date, (), sleeves, kind))
                    continue
                idx, w = self.portfolios[f][h]
                pos = tuple((self.stock_ids[i], float(wi * stock_s)) for i, wi in zip(idx, w))
                capital = math.fsum(float(wi * stock_s * self.fund_size[f]) for wi in w)
                out.append(HoldingsSnapshot(fid, date, pos, sleeves, kind, capital))
        return sorted(out, key=lambda s: (s.fund_id, s.report_date))

    def benchmark_definitions(self) -> list[BenchmarkDefinition]:
        defs, _ = parse_benchmark_csv(io.StringIO(self._benchmark_csv()))
        return defs

    def fund_map(self) -> dict[str, str]:
        return dict(sorted((fid, self.benchmark_ids[b]) for fid, b in zip(self.fund_ids, self.fund_benchmark)))

    def market_panel(self, gap_limit: int = DEFAULT_GAP_LIMIT) -> MarketPanel:
        T = self.config.n_months

        def padded(a):
            return np.concatenate([[np.nan], a])

        rets = np.array([returns_from_closes(row, gap_limit)[0] for row in self.closes])
        series = {bid: padded(self.benchmark_index[b]) for b, bid in enumerate(self.benchmark_ids)}
        return MarketPanel(
            periods=tuple(range(self.month_ords[0] - 1, self.month_ords[0] + T)),
            stock_ids=self.stock_ids,
            closes=self.closes,
            stock_returns=rets.reshape(len(self.stock_ids), T + 1),
            industry_of=dict(sorted((s, self.industry_ids[j]) for s, j in zip(self.stock_ids, self.stock_industry))),
            factors=np.vstack([np.full((1, 4), np.nan), self.factors]),
            stock_market_return=padded(self.stock_market),
            bond_market_return=padded(self.bond_market),
            fund_nav_return={fid: padded(row) for fid, row in zip(self.fund_ids, self.nav)},
            benchmark_return=dict(sorted(series.items())),
            gap_limit=gap_limit,
        )

    def files(self) -> dict[str, str]:
        """All eight input files as UTF-8 text, keyed by file name."""
        return {
            "holdings.csv": self._holdings_csv(),
            "benchmark.csv": self._benchmark_csv(),
            "prices.csv": self._prices_csv(),
            "industries.csv": _table(INDUSTRY_COLUMNS,
                                     [[s, self.industry_ids[j]] for s, j in zip(self.stock_ids, self.stock_industry)]),
            "factors.csv": _table(FACTOR_FILE_COLUMNS,
                                  [[month_label(m)] + [repr(float(x)) for x in row]
                                   for m, row in zip(self.month_ords, self.factors)]),
            "nav.csv": _table(NAV_COLUMNS,
                              [[fid, month_label(m), repr(float(x))]
                               for fid, row in zip(self.fund_ids, self.nav)
                               for m, x in zip(self.month_ords, row)]),
            "index.csv": self._index_csv(),
            "funds.csv": _table(FUND_MAP_COLUMNS,
                                [[fid, self.benchmark_ids[b]] for fid, b in zip(self.fund_ids, self.fund_benchmark)]),
        }

    def write(self, directory: str | os.PathLike) -> list[str]:
        os.makedirs(directory, exist_ok=True)
        paths = []
        for name, text in self.files().items():
            path = os.path.join(directory, name)
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            paths.append(path)
        return paths

    def _report_rows(self):
        """(grid month index, kind, half or None) for every report, in date order."""
        rows = {}
        for h in range(self.n_halves):
            rows[self.report_month(h)] = ("semiannual", h)
        if self.config.quarterly_reports:
            for e in range(-1, self.config.n_months, 3):
                rows.setdefault(e, ("quarterly", None))
        return sorted((e, kind, h) for e, (kind, h) in rows.items())

    def _holdings_csv(self) -> str:
        out = []
        base = self.month_ords[0]
        reports = self._report_rows()
        for f, fid in enumerate(self.fund_ids):
            for e, kind, h in reports:
                date = month_end(base + e).isoformat()
                stock_s, bond_s = self.sleeves[f][e]
                sl = [repr(stock_s), repr(bond_s)]
                if kind == "quarterly":
                    out.append([fid, date, kind, "", ""] + sl + [""])
                    continue
                idx, w = self.portfolios[f][h]
                for i, wi in zip(idx, w):
                    out.append([fid, date, kind, self.stock_ids[i], repr(float(wi * stock_s))] + sl
                               + [repr(float(wi * stock_s * self.fund_size[f]))])
        return _table(HOLDINGS_COLUMNS + ("value",), out)

    def _benchmark_csv(self) -> str:
        as_of = month_end(self.month_ords[0] - 1).isoformat()
        rows = []
        for b, bid in enumerate(self.benchmark_ids):
            s, bd = self.benchmark_sleeves[b]
            for i, w in enumerate(self.benchmark_weights):
                rows.append([bid, as_of, self.stock_ids[i], repr(float(w)), repr(s), repr(bd)])
        return _table(BENCHMARK_COLUMNS, rows)

    def _prices_csv(self) -> str:
        labels = [month_label(self.month_ords[0] - 1)] + [month_label(m) for m in self.month_ords]
        rows = [[sid, labels[t], repr(float(p))]
                for sid, row in zip(self.stock_ids, self.closes) for t, p in enumerate(row)]
        return _table(PRICE_COLUMNS, rows)

    def _index_csv(self) -> str:
        rows = []
        series = [(bid, self.benchmark_index[b]) for b, bid in enumerate(self.benchmark_ids)]
        series += [(STOCK_MARKET_ID, self.stock_market), (BOND_MARKET_ID, self.bond_market)]
        for sid, arr in sorted(series, key=lambda s: s[0]):
            rows += [[sid, month_label(m), repr(float(x))] for m, x in zip(self.month_ords, arr)]
        return _table(INDEX_COLUMNS, rows)


def _table(header, rows) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return out.getvalue()


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------

def generate_universe(config: UniverseConfig) -> SyntheticUniverse:
    """Draw a universe; the same config always gives byte-identical files."""
    c = config
    T, H = c.n_months, c.n_months // 6
    n_s, n_j = c.n_stocks, c.n_industries
    start = c.start_year * 12

    mkt = _stream(c.seed, _MARKET)
    m_latent = mkt.normal(c.market_premium, c.market_vol, T)
    smb = mkt.normal(0.0, c.factor_vol, T)
    hml = mkt.normal(0.0, c.factor_vol, T)
    ind_shock = mkt.normal(0.0, c.industry_vol, (n_j, T))
    bond = c.risk_free + mkt.normal(0.0, c.bond_vol, T)
    rf = np.full(T, c.risk_free)

    st = _stream(c.seed, _STOCKS)
    stock_industry = np.arange(n_s) % n_j
    industry_beta = np.linspace(0.6, 1.4, n_j) if n_j > 1 else np.ones(1)
    caps = st.lognormal(0.0, c.cap_dispersion, n_s)
    winners = np.zeros((n_s, H), dtype=bool)
    members = [np.flatnonzero(stock_industry == j) for j in range(n_j)]
    for h in range(H):
        for m in members:
            winners[st.permutation(m)[: len(m) // 2], h] = True
    drift = np.where(winners, c.winner_spread, -c.winner_spread).repeat(6, axis=1)
    idio = st.normal(0.0, c.idio_vol, (n_s, T))
    raw = (rf + industry_beta[stock_industry, None] * m_latent + ind_shock[stock_industry]
           + drift + idio)
    raw = np.maximum(raw, -0.9)
    p0 = 5.0 + 45.0 * st.random(n_s)
    closes = np.empty((n_s, T + 1))
    closes[:, 0] = p0
    for t in range(T):
        closes[:, t + 1] = closes[:, t] * (1.0 + raw[:, t])
    # the pipeline sees returns re-derived from closes; use the same numbers here
    returns = closes[:, 1:] / closes[:, :-1] - 1.0

    bench_w = caps / caps.sum()
    stock_market = bench_w @ returns
    factors = np.column_stack([stock_market - rf, smb, hml, rf])

    n_b = c.n_benchmarks
    bench_sleeves = []
    for b in range(n_b):
        s = float(np.round(_stream(c.seed, _BENCH, b).uniform(0.6, 0.95), 2))
        bench_sleeves.append((s, round(1.0 - s, 2)))
    bench_index = np.array([s * stock_market + bd * bond for s, bd in bench_sleeves])

    half_market = np.prod(1.0 + factors[:, 0].reshape(H, 6), axis=1) - 1.0
    pools = _pools(stock_industry, winners, n_j)
    sqrt_caps = np.sqrt(caps)
    ind_bench = np.bincount(stock_industry, weights=bench_w, minlength=n_j)

    portfolios, sleeves, selection, sizes = [], [], [], []
    for f in range(c.n_funds):
        sk = c.skill_of(f)
        path = _selection_path(c, sk, f, H)
        selection.append(path)
        portfolios.append(_portfolio_path(c, sk, f, path, half_market, ind_bench, industry_beta,
                                          pools, sqrt_caps))
        sleeves.append(_sleeve_path(c, f))
        sizes.append(float(_stream(c.seed, _SIZE, f).lognormal(11.0, 0.8)))

    uni = SyntheticUniverse(
        config=c,
        month_ords=tuple(range(start, start + T)),
        stock_ids=tuple(f"S{i + 1:0{max(4, len(str(n_s)))}d}" for i in range(n_s)),
        industry_ids=tuple(f"IND{j + 1:02d}" for j in range(n_j)),
        stock_industry=stock_industry,
        industry_beta=industry_beta,
        caps=caps,
        closes=closes,
        returns=returns,
        winners=winners,
        factors=factors,
        stock_market=stock_market,
        bond_market=bond,
        benchmark_ids=tuple(f"BM{b + 1:02d}" for b in range(n_b)),
        benchmark_sleeves=tuple(bench_sleeves),
        benchmark_weights=bench_w,
        benchmark_index=bench_index,
        fund_ids=tuple(f"F{f + 1:0{max(4, len(str(c.n_funds)))}d}" for f in range(c.n_funds)),
        fund_benchmark=tuple(f % n_b for f in range(c.n_funds)),
        fund_size=np.array(sizes),
        selection_path=np.array(selection).reshape(c.n_funds, H),
        portfolios=tuple(portfolios),
        sleeves=tuple(sleeves),
        nav=np.zeros((c.n_funds, T)),
    )
    nav = np.array([_nav_path(uni, f) for f in range(c.n_funds)]).reshape(c.n_funds, T)
    return dataclasses.replace(uni, nav=nav)


def _selection_path(c: UniverseConfig, sk: FundSkill, f: int, H: int) -> np.ndarray:
    rng = _stream(c.seed, _SKILL, f)
    z = rng.standard_normal(H)
    u = np.empty(H)
    rho = sk.persistence_rho
    u[0] = c.skill_vol * z[0]
    innov = c.skill_vol * math.sqrt(1.0 - rho * rho)
    for h in range(1, H):
        u[h] = rho * u[h - 1] + innov * z[h]
    return sk.selection_drift + u


def _pools(stock_industry: np.ndarray, winners: np.ndarray, n_j: int):
    """Per half-year and industry: (winner ids, loser ids)."""
    members = [np.flatnonzero(stock_industry == j) for j in range(n_j)]
    return [[(m[winners[m, h]], m[~winners[m, h]]) for m in members]
            for h in range(winners.shape[1])]


def _portfolio_path(c, sk, f, selection, half_market, ind_bench, beta, pools, sqrt_caps):
    rng = _stream(c.seed, _HOLD, f)
    H = len(selection)
    alpha = np.maximum(c.industry_concentration * ind_bench, 1e-3)
    out = []
    for h in range(H):
        redraw = rng.random() < c.turnover
        if h > 0 and not redraw:
            out.append(out[-1])
            continue
        w_ind = rng.dirichlet(alpha)
        if sk.timing_gamma:
            shift = min(MAX_BETA_SHIFT, max(-MAX_BETA_SHIFT, sk.timing_gamma * half_market[h]))
            mean_beta = float(w_ind @ beta)
            var_beta = float(w_ind @ (beta - mean_beta) ** 2)
            if var_beta > 0:
                w_ind = np.maximum(w_ind * (1.0 + shift / var_beta * (beta - mean_beta)), 0.0)
                w_ind = w_ind / w_ind.sum()
        if c.winner_spread > 0:
            p_win = min(1.0, max(0.0, 0.5 * (1.0 + selection[h] / c.winner_spread)))
        else:
            p_win = 0.5
        idx, wts = [], []
        for j in np.flatnonzero(w_ind > 0):
            win, lose = pools[h][j]
            k = min(len(win) + len(lose), max(1, int(round(c.holdings_per_fund * w_ind[j]))))
            n_win = int(rng.binomial(k, p_win))
            n_win = min(len(win), max(k - len(lose), n_win))
            chosen = np.concatenate([win[np.argsort(rng.random(len(win)))[:n_win]],
                                     lose[np.argsort(rng.random(len(lose)))[:k - n_win]]])
            sw = sqrt_caps[chosen]
            idx.append(chosen)
            wts.append(w_ind[j] * sw / sw.sum())
        idx = np.concatenate(idx)
        wts = np.concatenate(wts)
        order = np.argsort(idx)
        out.append((idx[order], wts[order] / wts.sum()))
    return tuple(out)


def _sleeve_path(c: UniverseConfig, f: int) -> dict[int, tuple[float, float]]:
    rng = _stream(c.seed, _SLEEVE, f)
    base = rng.uniform(0.6, 0.95)
    ends = range(-1, c.n_months, 3)
    stock = np.round(np.clip(base + rng.normal(0.0, 0.03, len(ends)), 0.05, 0.98), 6)
    bond = np.round((1.0 - stock) * rng.uniform(0.2, 0.8, len(ends)), 6)
    return {e: (float(s), float(b)) for e, s, b in zip(ends, stock, bond)}


def _nav_path(uni: SyntheticUniverse, f: int) -> np.ndarray:
    c = uni.config
    nav = np.empty(c.n_months)
    trades = {t.month: t.into for t in uni.trades if t.fund == f}
    for h in range(uni.n_halves):
        idx, w = uni.portfolios[f][h]
        cols = slice(6 * h, 6 * h + 6)
        value = w @ np.cumprod(1.0 + uni.returns[idx, cols], axis=1)
        switch = [t for t in range(6 * h, 6 * h + 6) if t in trades]
        if switch:
            t0 = switch[0] - 6 * h
            # first switch inside the half; later ones chain from it
            path = list(value[:t0])
            v = path[-1] if path else 1.0
            held = trades[switch[0]]
            for t in range(t0, 6):
                if 6 * h + t in trades:
                    held = trades[6 * h + t]
                v = v * (1.0 + uni.returns[held, 6 * h + t])
                path.append(v)
            value = np.array(path)
        nav[cols] = value / np.concatenate([[1.0], value[:-1]]) - 1.0
    if c.nav_noise > 0:
        nav = nav + _stream(c.seed, _NAV, f).normal(0.0, c.nav_noise, c.n_months)
    return nav


def inject_trading_gap(universe: SyntheticUniverse, fund_id: str, trade_month: int | str,
                       into: str | None = None) -> SyntheticUniverse:
    """Make a fund switch its whole stock sleeve mid-half without reporting it.

    From ``trade_month`` (grid index or ``YYYY-MM`` label) to the end of that
    half-year the fund holds only ``into``; by default the stock with the best
    return over those months. Reported snapshots are unchanged, so the
    holdings-validity diagnostic sees the gap.
    """
    f = universe.fund_index(fund_id)
    if isinstance(trade_month, str):
        label = trade_month
        labels = [month_label(m) for m in universe.month_ords]
        if label not in labels:
            raise AttribError("WINDOW_OUT_OF_RANGE", f"{label} outside universe")
        trade_month = labels.index(label)
    if not 0 <= trade_month < universe.config.n_months:
        raise AttribError("WINDOW_OUT_OF_RANGE", f"month index {trade_month} outside universe")
    end = 6 * (trade_month // 6) + 6
    if into is None:
        growth = np.prod(1.0 + universe.returns[:, trade_month:end], axis=1)
        target = int(np.argmax(growth))
    else:
        if into not in universe.stock_ids:
            raise AttribError("UNKNOWN_STOCK", f"{into} not in universe")
        target = universe.stock_ids.index(into)
    trades = tuple(t for t in universe.trades if not (t.fund == f and t.month == trade_month))
    uni = dataclasses.replace(universe, trades=trades + (Trade(f, trade_month, target),))
    nav = universe.nav.copy()
    nav[f] = _nav_path(uni, f)
    return dataclasses.replace(uni, nav=nav)


def zero_skill(n_funds: int) -> tuple[FundSkill, ...]:
    return tuple(FundSkill() for _ in range(n_funds))


def split_skill(n_funds: int, skilled: FundSkill) -> tuple[FundSkill, ...]:
    """First half of the funds get ``skilled``, the rest none."""
    return tuple(skilled if f < n_funds // 2 else FundSkill() for f in range(n_funds))
