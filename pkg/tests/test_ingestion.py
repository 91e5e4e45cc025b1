import datetime as dt
import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fundattrib.data_model import AttribError
from fundattrib.ingestion import (
    WindowSpec,
    benchmark_as_of,
    compound,
    parse_benchmark_csv,
    parse_fund_map,
    parse_holdings_csv,
    parse_market_panel,
    resolve_window,
    returns_from_closes,
    write_benchmark_csv,
    write_holdings_csv,
    write_market_panel,
)

H = "fund_id,report_date,report_kind,stock_id,weight,stock_sleeve,bond_sleeve\n"
B = "benchmark_id,as_of,stock_id,weight,stock_sleeve,bond_sleeve\n"


def market(prices="stock_id,month,close\n", industries="stock_id,industry_id\n",
           factors="month,market_excess,smb,hml,risk_free\n", nav="fund_id,month,nav_return\n",
           index="benchmark_id,month,index_return\n", gap_limit=2):
    return parse_market_panel(io.StringIO(prices), io.StringIO(industries), io.StringIO(factors),
                              io.StringIO(nav), io.StringIO(index), gap_limit=gap_limit)


class TestHoldings:
    def test_two_rows(self):
        snaps, rep = parse_holdings_csv(io.StringIO(H + "F1,2017-06-30,semiannual,A,0.6,1,0\n"
                                                        "F1,2017-06-30,semiannual,B,0.4,1,0\n"))
        assert rep.issues == ()
        assert len(snaps) == 1 and snaps[0].positions == (("A", 0.6), ("B", 0.4))
        assert snaps[0].report_date == dt.date(2017, 6, 30)

    def test_header_only(self):
        snaps, rep = parse_holdings_csv(io.StringIO(H))
        assert snaps == [] and rep.issues == ()

    def test_weight_out_of_range(self):
        snaps, rep = parse_holdings_csv(io.StringIO(H + "F1,2017-06-30,semiannual,A,1.3,1,0\n"
                                                        "F2,2017-06-30,semiannual,A,1.0,1,0\n"))
        assert [s.fund_id for s in snaps] == ["F2"]
        (err,) = rep.errors
        assert err.code == "WEIGHT_RANGE" and err.line == 2

    def test_total_on_bad_lines(self):
        text = H + ("F1,2017-06-30,semiannual,A,abc,1,0\n"
                    "F1,not-a-date,semiannual,A,0.5,1,0\n"
                    "F2,2017-06-30,semiannual,A,1,1,0\n"
                    "F3,2017-06-30,semiannual,A,1\n")
        snaps, rep = parse_holdings_csv(io.StringIO(text))
        assert [s.fund_id for s in snaps] == ["F2"]
        assert sorted(i.line for i in rep.errors) == [2, 3, 5]
        assert {i.code for i in rep.errors} == {"CSV_SYNTAX"}

    def test_duplicate_line_number(self):
        _, rep = parse_holdings_csv(io.StringIO(H + "F1,2017-06-30,semiannual,A,0.5,1,0\n"
                                                    "F1,2017-06-30,semiannual,A,0.5,1,0\n"))
        (err,) = rep.errors
        assert err.code == "DUP_STOCK" and err.line == 3

    def test_quarterly_sleeve_only(self):
        snaps, rep = parse_holdings_csv(io.StringIO(H + "F1,2017-03-31,quarterly,,,0.8,0.1\n"))
        assert rep.ok and snaps[0].positions == () and snaps[0].asset_weights.bond == 0.1

    def test_missing_column(self):
        _, rep = parse_holdings_csv(io.StringIO("fund_id,report_date\nF1,2017-06-30\n"))
        assert rep.errors[0].code == "CSV_SYNTAX"

    def test_io_error(self, tmp_path):
        with pytest.raises(AttribError) as e:
            parse_holdings_csv(tmp_path / "nope.csv")
        assert e.value.code == "IO_READ"

    def test_value_column(self):
        snaps, _ = parse_holdings_csv(io.StringIO(H.strip() + ",value\n"
                                                  "F1,2017-06-30,semiannual,A,0.5,1,0,300\n"
                                                  "F1,2017-06-30,semiannual,B,0.5,1,0,200\n"))
        assert snaps[0].stock_capital == 500.0

    def test_roundtrip(self):
        text = H + "F1,2017-06-30,semiannual,A,0.1,0.9,0.05\nF1,2017-09-30,quarterly,,,0.8,0.1\n"
        snaps, _ = parse_holdings_csv(io.StringIO(text))
        again, _ = parse_holdings_csv(io.StringIO(write_holdings_csv(snaps)))
        assert again == snaps


class TestBenchmark:
    def test_exact(self):
        defs, rep = parse_benchmark_csv(io.StringIO(B + "B1,2017-01-01,A,0.5,0.8,0.2\nB1,2017-01-01,B,0.5,0.8,0.2\n"))
        assert rep.issues == () and defs[0].weights == {"A": 0.5, "B": 0.5}

    def test_renorm(self):
        defs, rep = parse_benchmark_csv(io.StringIO(B + "B1,2017-01-01,A,0.5,0.8,0.2\nB1,2017-01-01,B,0.49,0.8,0.2\n"))
        assert [i.code for i in rep.warnings] == ["RENORM"]
        assert defs[0].weights["A"] == pytest.approx(0.5 / 0.99, abs=1e-15)
        assert defs[0].weights["B"] == pytest.approx(0.49 / 0.99, abs=1e-15)

    def test_duplicate(self):
        defs, rep = parse_benchmark_csv(io.StringIO(B + "B1,2017-01-01,A,0.5,0.8,0.2\nB1,2017-01-01,A,0.5,0.8,0.2\n"))
        assert defs == [] and [i.code for i in rep.errors] == ["DUP_STOCK"]

    def test_roundtrip_and_as_of(self):
        text = B + "B1,2016-01-01,A,1,0.8,0.2\nB1,2017-01-01,A,0.25,0.8,0.2\nB1,2017-01-01,C,0.75,0.8,0.2\n"
        defs, _ = parse_benchmark_csv(io.StringIO(text))
        again, _ = parse_benchmark_csv(io.StringIO(write_benchmark_csv(defs)))
        assert again == defs
        assert benchmark_as_of(defs, "B1", dt.date(2016, 12, 31)).as_of == dt.date(2016, 1, 1)
        assert benchmark_as_of(defs, "B1", dt.date(2017, 6, 30)).as_of == dt.date(2017, 1, 1)
        with pytest.raises(AttribError):
            benchmark_as_of(defs, "B1", dt.date(2015, 6, 30))


def test_fund_map_conflict():
    m, rep = parse_fund_map(io.StringIO("fund_id,benchmark_id\nF1,B1\nF1,B2\nF2,B1\n"))
    assert m == {"F1": "B1", "F2": "B1"} and [i.code for i in rep.errors] == ["DUP_FUND"]


class TestPrices:
    def test_simple_return(self):
        p, rep = market(prices="stock_id,month,close\nA,2017-01,10\nA,2017-02,11\n")
        assert rep.ok
        assert p.stock_returns[0, 1] == pytest.approx(0.10, abs=1e-15)
        assert np.isnan(p.stock_returns[0, 0])

    def test_carry_forward(self):
        r, stale = returns_from_closes(np.array([10.0, np.nan, 12.0]), gap_limit=2)
        assert r[1] == 0.0 and r[2] == pytest.approx(0.2, abs=1e-15) and stale == []

    def test_long_gap(self):
        r, stale = returns_from_closes(np.array([10.0, np.nan, np.nan, np.nan, np.nan, 12.0]), gap_limit=2)
        assert list(r[1:3]) == [0.0, 0.0]
        assert np.isnan(r[3:]).all()
        assert stale == [(3, 5)]

    def test_stale_warning(self):
        text = "stock_id,month,close\nA,2017-01,10\nA,2017-06,11\nB,2017-01,5\nB,2017-06,5\n" + \
               "".join(f"B,2017-{m:02d},5\n" for m in (2, 3, 4, 5))
        p, rep = market(prices=text)
        assert [i.code for i in rep.warnings] == ["STALE_PRICE"]
        assert rep.warnings[0].item == "A"

    def test_nonmonotonic(self):
        _, rep = market(prices="stock_id,month,close\nA,2017-02,10\nA,2017-01,11\n")
        assert "NONMONOTONIC_DATES" in [i.code for i in rep.errors]

    def test_market_leg_fallback(self):
        p, _ = market(factors="month,market_excess,smb,hml,risk_free\n2017-01,0.01,0,0,0.002\n")
        assert p.stock_market_return[0] == pytest.approx(0.012)


def test_panel_roundtrip(small_universe):
    files = small_universe.files()
    p, rep = market(files["prices.csv"], files["industries.csv"], files["factors.csv"],
                    files["nav.csv"], files["index.csv"])
    assert rep.ok
    out = write_market_panel(p)
    q, _ = market(out["prices"], out["industries"], out["factors"], out["nav"], out["index"])
    assert p.equals(q)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.one_of(st.none(), st.floats(0.5, 100)), min_size=2, max_size=12), st.integers(0, 3))
def test_panel_roundtrip_with_gaps(prices, gap):
    if prices[0] is None:
        prices[0] = 1.0
    text = "stock_id,month,close\n" + "".join(
        f"A,2017-{m + 1:02d},{v!r}\n" for m, v in enumerate(prices) if v is not None)
    p, _ = market(prices=text, gap_limit=gap)
    out = write_market_panel(p)
    q, _ = market(out["prices"], out["industries"], out["factors"], out["nav"], out["index"], gap_limit=gap)
    assert p.equals(q)


class TestWindows:
    def test_before(self):
        assert WindowSpec(dt.date(2017, 6, 30), "before").months == tuple(range(2017 * 12, 2017 * 12 + 6))

    def test_after(self):
        assert WindowSpec(dt.date(2017, 6, 30), "after").months == tuple(range(2017 * 12 + 6, 2017 * 12 + 12))

    def test_adjacent(self):
        d = dt.date(2016, 12, 31)
        b, a = WindowSpec(d, "before").months, WindowSpec(d, "after").months
        assert b[-1] + 1 == a[0] and not set(a) & set(b)

    def test_bad_horizon(self):
        with pytest.raises(AttribError) as e:
            WindowSpec(dt.date(2017, 6, 30), "after", 4)
        assert e.value.code == "BAD_WINDOW"

    def _panel(self):
        rows = ["stock_id,month,close"]
        for m, (a, c) in enumerate([(10, 7), (11, 7), (9.9, 7), (9.9, 7)]):
            rows.append(f"A,2017-{m + 1:02d},{a}")
            rows.append(f"C,2017-{m + 1:02d},{c}")
        rows.append("B,2017-03,4")
        p, _ = market(prices="\n".join(rows) + "\n")
        return p

    def test_cumulative(self):
        w = resolve_window(self._panel(), WindowSpec(dt.date(2017, 1, 31), "after", 3))
        assert w.per_stock["A"] == pytest.approx(1.1 * 0.9 - 1, abs=1e-15)
        assert w.per_stock["C"] == 0.0
        assert "B" in w.omitted

    def test_omitted_warning(self):
        w = resolve_window(self._panel(), WindowSpec(dt.date(2017, 1, 31), "after", 3), ["A", "B"])
        assert list(w.per_stock) == ["A"] and w.issues[0].code == "UNPRICED_STOCK"

    def test_out_of_range(self):
        with pytest.raises(AttribError) as e:
            resolve_window(self._panel(), WindowSpec(dt.date(2017, 3, 31), "after", 3))
        assert e.value.code == "WINDOW_OUT_OF_RANGE"


def test_compound():
    assert compound(np.array([0.1, -0.1])) == pytest.approx(-0.01, abs=1e-15)
