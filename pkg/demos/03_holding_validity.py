"""
When does a half-yearly snapshot describe the fund?
===================================================

Compare the buy-and-hold return of each reported portfolio with the fund's
actual NAV return over the same six months. Without trading the two agree;
an unreported mid-window switch shows up in that window's band only.
"""
from fundattrib.pipeline import Settings, cmd_diagnose_holdings, workspace_from_universe
from fundattrib.synthetic import UniverseConfig, generate_universe, inject_trading_gap

uni = generate_universe(UniverseConfig(n_funds=30, n_stocks=200, n_months=48, seed=3, turnover=0.0))


def show(universe, title):
    out = cmd_diagnose_holdings(workspace_from_universe(universe, Settings(direction="after")))
    print(title)
    for date, n, lo, _, mid, _, hi, covers in out.tables["bands"][1]:
        print(f"  {date}  n={n:2d}  2.5%={lo:+.2e}  50%={mid:+.2e}  97.5%={hi:+.2e}  covers 0: {bool(covers)}")


show(uni, "no trading")

# A third of the funds quietly move into the half-year's best stock two
# months into the window that follows the 2013-12-31 report
traded = uni
for fid in uni.fund_ids[:10]:
    traded = inject_trading_gap(traded, fid, "2014-03")
show(traded, "ten funds trade in March 2014")
