import datetime as dt

import numpy as np
import pytest

from fundattrib.data_model import AssetWeights, BenchmarkDefinition, HoldingsSnapshot, MarketPanel
from fundattrib.synthetic import FundSkill, UniverseConfig, generate_universe


def snapshot(positions, sleeves=(1.0, 0.0), fund_id="F1", date=dt.date(2017, 6, 30), kind="semiannual"):
    return HoldingsSnapshot(fund_id, date, tuple(positions.items()) if isinstance(positions, dict) else tuple(positions),
                            AssetWeights.from_sleeves(*sleeves), kind)


def benchmark(constituents, sleeves=(0.8, 0.2), bid="B1", as_of=dt.date(2016, 12, 31)):
    return BenchmarkDefinition(bid, as_of, tuple(constituents.items()), AssetWeights.from_sleeves(*sleeves))


def panel_from_returns(stock_returns: dict, industry_of: dict, first_month=2017 * 12, nav=None,
                       bench=None, stock_market=None, bond_market=None):
    """Small MarketPanel from per-stock monthly return lists (all the same length)."""
    ids = tuple(sorted(stock_returns))
    n = len(next(iter(stock_returns.values())))
    rets = np.array([stock_returns[s] for s in ids], dtype=float).reshape(len(ids), n)
    closes = 10.0 * np.cumprod(1.0 + np.nan_to_num(rets), axis=1)
    factors = np.zeros((n, 4))
    return MarketPanel(
        periods=tuple(range(first_month, first_month + n)),
        stock_ids=ids,
        closes=closes,
        stock_returns=rets,
        industry_of=industry_of,
        factors=factors,
        stock_market_return=np.zeros(n) if stock_market is None else np.asarray(stock_market, float),
        bond_market_return=np.zeros(n) if bond_market is None else np.asarray(bond_market, float),
        fund_nav_return={k: np.asarray(v, float) for k, v in (nav or {}).items()},
        benchmark_return={k: np.asarray(v, float) for k, v in (bench or {}).items()},
    )


@pytest.fixture(scope="session")
def small_universe():
    cfg = UniverseConfig(n_funds=24, n_stocks=120, n_industries=6, n_months=36, seed=11,
                         skill=tuple(FundSkill(selection_drift=0.004) if f % 2 else FundSkill()
                                     for f in range(24)))
    return generate_universe(cfg)


@pytest.fixture(scope="session")
def small_workspace(small_universe, tmp_path_factory):
    root = tmp_path_factory.mktemp("ws")
    small_universe.write(root)
    (root / "workspace.toml").write_text('direction = "after"\n')
    return root


ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
