import datetime as dt

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import snapshot
from fundattrib.data_model import (
    AssetWeights,
    AttribError,
    MarketPanel,
    month_end,
    month_label,
    month_of,
    normalize_stock_sleeve,
    parse_month,
    validate_snapshot,
)


def codes(report):
    return sorted(i.code for i in report.errors)


class TestValidateSnapshot:
    def test_clean(self):
        assert validate_snapshot(snapshot({"A": 0.6, "B": 0.4})).issues == ()

    def test_duplicate(self):
        s = snapshot([("A", 0.3), ("A", 0.3)])
        assert codes(validate_snapshot(s)) == ["DUP_STOCK"]

    def test_sleeve_sum(self):
        s = snapshot({"A": 1.0}, sleeves=(0.8, 0.3))
        assert codes(validate_snapshot(s)) == ["SLEEVE_SUM"]

    def test_weight_range(self):
        s = snapshot({"A": 1.3})
        rep = validate_snapshot(s)
        assert codes(rep) == ["WEIGHT_RANGE"]
        assert rep.errors[0].item == "A"

    def test_empty_positions_only_for_semiannual(self):
        assert codes(validate_snapshot(snapshot({}, kind="semiannual"))) == ["EMPTY_POSITIONS"]
        assert validate_snapshot(snapshot({}, kind="quarterly")).ok

    def test_sleeve_tolerance(self):
        assert validate_snapshot(snapshot({"A": 1.0}, sleeves=(0.7, 0.3 + 5e-10))).ok


class TestNormalize:
    def test_halves(self):
        assert normalize_stock_sleeve(snapshot({"A": 0.45, "B": 0.45})).weights == {"A": 0.5, "B": 0.5}

    def test_identity(self):
        s = snapshot({"A": 1.0})
        assert normalize_stock_sleeve(s) == s

    def test_three(self):
        w = normalize_stock_sleeve(snapshot({"A": 0.3, "B": 0.1, "C": 0.1})).weights
        assert w == pytest.approx({"A": 0.6, "B": 0.2, "C": 0.2}, abs=1e-15)

    def test_empty(self):
        with pytest.raises(AttribError) as e:
            normalize_stock_sleeve(snapshot({"A": 0.0}))
        assert e.value.code == "EMPTY_SLEEVE"

    def test_sleeves_untouched(self):
        s = snapshot({"A": 0.2, "B": 0.6}, sleeves=(0.8, 0.1))
        assert normalize_stock_sleeve(s).asset_weights == s.asset_weights

    @given(st.lists(st.floats(1e-6, 1.0), min_size=1, max_size=30))
    def test_idempotent(self, ws):
        s = snapshot([(f"S{i}", w) for i, w in enumerate(ws)])
        once = normalize_stock_sleeve(s)
        assert normalize_stock_sleeve(once) == once
        assert abs(sum(w for _, w in once.positions) - 1.0) < 1e-12


@st.composite
def snapshots(draw):
    n = draw(st.integers(0, 8))
    ids = draw(st.lists(st.sampled_from("ABCDEFGHIJ"), min_size=n, max_size=n))
    ws = draw(st.lists(st.floats(-0.5, 1.5, allow_nan=False), min_size=n, max_size=n))
    stock = draw(st.floats(-0.2, 1.2))
    bond = draw(st.floats(-0.2, 1.2))
    kind = draw(st.sampled_from(["semiannual", "quarterly"]))
    return snapshot(list(zip(ids, ws)), (stock, bond), kind=kind), (ids, ws, stock, bond, kind)


@given(snapshots())
def test_validation_matches_invariants(case):
    s, (ids, ws, stock, bond, kind) = case
    valid = (
        len(set(ids)) == len(ids)
        and all(0 <= w <= 1 for w in ws)
        and 0 <= stock <= 1 and 0 <= bond <= 1
        and stock + bond + max(0.0, 1 - stock - bond) <= 1 + 1e-9
        and (kind == "quarterly" or len(ids) > 0)
    )
    assert validate_snapshot(s).ok == valid


def test_asset_weights_other():
    assert AssetWeights.from_sleeves(0.7, 0.2).other == pytest.approx(0.1)


class TestMonths:
    def test_roundtrip(self):
        m = month_of(dt.date(2017, 6, 30))
        assert month_label(m) == "2017-06"
        assert parse_month("2017-06") == m == parse_month("2017-06-15")
        assert month_end(m) == dt.date(2017, 6, 30)
        assert month_end(month_of(dt.date(2016, 2, 3))) == dt.date(2016, 2, 29)

    def test_bad(self):
        with pytest.raises(ValueError):
            parse_month("2017-13")


class TestMarketPanel:
    def _panel(self, periods=(10, 11, 12)):
        n = len(periods)
        return MarketPanel(periods, ("A",), np.ones((1, n)), np.zeros((1, n)), {"A": "X"},
                           np.zeros((n, 4)), np.zeros(n), np.zeros(n), {}, {})

    def test_gap_in_grid(self):
        with pytest.raises(AttribError) as e:
            self._panel((10, 12, 13))
        assert e.value.code == "NONMONOTONIC_DATES"

    def test_frozen_arrays(self):
        p = self._panel()
        with pytest.raises(ValueError):
            p.stock_returns[0, 0] = 1.0

    def test_nonfinite(self):
        with pytest.raises(AttribError):
            MarketPanel((1, 2), ("A",), np.ones((1, 2)), np.array([[np.inf, 0.0]]), {}, np.zeros((2, 4)),
                        np.zeros(2), np.zeros(2), {}, {})

    def test_column(self):
        p = self._panel()
        assert p.column(11) == 1
        with pytest.raises(AttribError) as e:
            p.column(13)
        assert e.value.code == "WINDOW_OUT_OF_RANGE"
