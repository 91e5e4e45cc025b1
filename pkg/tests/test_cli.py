import csv
import dataclasses
import json

import numpy as np
import pytest

from conftest import panel_from_returns
from fundattrib.cli import main
from fundattrib.data_model import AttribError
from fundattrib.pipeline import (
    Settings,
    Workspace,
    WorkspaceInvalid,
    cmd_associate,
    cmd_attribute,
    cmd_diagnose_holdings,
    cmd_persistence,
    cmd_summarize,
    cmd_validate_benchmark,
    load_workspace,
    make_settings,
    workspace_from_universe,
)
from fundattrib.synthetic import FundSkill, UniverseConfig, generate_universe

MONTHS = [f"{y}-{m:02d}" for y in (2017, 2018) for m in range(1, 13)]


def tiny_files():
    stocks = [f"S{i}" for i in range(1, 6)]
    rng = np.random.default_rng(0)
    prices = ["stock_id,month,close"]
    for s in stocks:
        p = 10.0
        for m in MONTHS:
            prices.append(f"{s},{m},{p!r}")
            p *= 1 + float(rng.normal(0.01, 0.05))
    hold = ["fund_id,report_date,report_kind,stock_id,weight,stock_sleeve,bond_sleeve"]
    hold += [f"F1,2017-06-30,semiannual,{s},{0.9 / 3!r},0.9,0.05" for s in stocks[:3]]
    hold += [f"F2,2017-06-30,semiannual,{s},0.16,0.8,0.15" for s in stocks]
    hold += ["F1,2017-09-30,quarterly,,,0.85,0.1"]
    bench = ["benchmark_id,as_of,stock_id,weight,stock_sleeve,bond_sleeve"]
    bench += [f"B1,2017-01-01,{s},0.2,0.8,0.2" for s in stocks]
    factors = ["month,market_excess,smb,hml,risk_free"] + [f"{m},0.01,0.0,0.0,0.002" for m in MONTHS]
    nav = ["fund_id,month,nav_return"] + [f"{f},{m},0.01" for f in ("F1", "F2") for m in MONTHS]
    index = ["benchmark_id,month,index_return"] + [f"B1,{m},0.01" for m in MONTHS]
    return {
        "prices.csv": prices, "holdings.csv": hold, "benchmark.csv": bench,
        "industries.csv": ["stock_id,industry_id", "S1,X", "S2,X", "S3,Y", "S4,Y", "S5,Z"],
        "factors.csv": factors, "nav.csv": nav, "index.csv": index,
        "funds.csv": ["fund_id,benchmark_id", "F1,B1", "F2,B1"],
    }


def write_ws(root, files, config=None):
    root.mkdir(parents=True, exist_ok=True)
    for name, lines in files.items():
        (root / name).write_text("\n".join(lines) + "\n")
    if config is not None:
        (root / "workspace.toml").write_text(config)
    return root


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def series_workspace(nav, bench, factors=None, settings=None):
    """Workspace holding only return series, for the benchmark regressions."""
    n = len(next(iter(bench.values())))
    panel = panel_from_returns({"A": [0.0] * n}, {"A": "X"}, nav=nav, bench=bench)
    if factors is not None:
        panel = dataclasses.replace(panel, factors=factors)
    fmap = {fid: "B1" for fid in nav}
    return Workspace("<test>", settings or Settings(), (), {}, fmap, panel, threads=1)


class TestSummarize:
    def test_tiny(self, tmp_path):
        ws = load_workspace(write_ws(tmp_path / "ws", tiny_files()), threads=1)
        out = cmd_summarize(ws)
        header, rows = out.tables["holdings"]
        assert len(rows) == 1  # the quarterly-only date has no positions
        assert rows[0][:3] == ["2017-06-30", 2, 4.0]
        assert rows[0][3] == ""
        assert "omitted" in out.summary["note"]

    def test_synthetic_counts(self, small_universe):
        out = cmd_summarize(workspace_from_universe(small_universe, threads=1))
        _, rows = out.tables["holdings"]
        assert len(rows) == small_universe.n_halves
        assert all(r[1] == small_universe.config.n_funds for r in rows)
        for h, r in enumerate(rows):
            sizes = [len(small_universe.portfolios[f][h][0]) for f in range(small_universe.config.n_funds)]
            assert r[2] == pytest.approx(np.mean(sizes), abs=1e-12)
        assert all(isinstance(r[3], float) for r in rows)


class TestAttribute:
    def test_replicating_fund(self):
        uni = generate_universe(UniverseConfig(n_funds=2, n_stocks=40, n_industries=4, n_months=24, seed=1))
        ws = workspace_from_universe(uni, Settings(direction="after"), threads=1)
        bench = ws.benchmarks[ws.fund_benchmark[uni.fund_ids[0]]][0]
        clones = tuple(dataclasses.replace(s, positions=tuple(bench.weights.items()))
                       for s in ws.snapshots if s.fund_id == uni.fund_ids[0] and s.report_kind == "semiannual")
        ws = dataclasses.replace(ws, snapshots=clones)
        _, rows = cmd_attribute(ws, "after", ("ss", "ia", "it")).tables["records"]
        assert rows and all(r[3] == 0.0 and r[4] == 0.0 for r in rows)

    def test_additivity_and_schema(self, small_universe):
        out = cmd_attribute(workspace_from_universe(small_universe, Settings(direction="after"), threads=1))
        _, rows = out.tables["records"]
        assert all(abs(r[5]) < 1e-12 for r in rows if r[2] != "aa")
        _, summary = out.tables["summary"]
        assert [r[0] for r in summary] == ["ss", "ia", "it", "aa"]
        for r in summary:
            assert 0 <= r[3] <= r[2] <= 1


class TestValidateBenchmark:
    def test_greater_than_one(self):
        d = np.random.default_rng(3).normal(0.005, 0.04, 36)
        out = cmd_validate_benchmark(series_workspace({"F1": 1.2 * d}, {"B1": d}))
        _, rows = out.tables["funds"]
        assert rows[0][5] == pytest.approx(1.2, abs=1e-12)
        assert dict(out.tables["aggregate"][1])["greater_than_1"] == 1.0

    def test_ff_orthogonal(self):
        n = 48
        d = np.tile([0.02, -0.01, 0.02, -0.01], n // 4)
        f = np.zeros((n, 4))
        f[:, 1] = np.tile([1, 1, -1, -1], n // 4) * 0.01
        f[:, 2] = np.tile([1, -1, -1, 1], n // 4) * 0.01
        # centered and orthogonal to d and to each other
        assert abs(f[:, 1] @ (d - d.mean())) < 1e-15 and abs(f[:, 2] @ (d - d.mean())) < 1e-15
        y = 0.9 * d + np.tile([0.003, -0.001, 0.0, -0.002], n // 4)
        simple = cmd_validate_benchmark(series_workspace({"F1": y}, {"B1": d}, f), "simple")
        ff = cmd_validate_benchmark(series_workspace({"F1": y}, {"B1": d}, f), "ff")
        assert ff.tables["funds"][1][0][5] == pytest.approx(simple.tables["funds"][1][0][5], abs=1e-12)

    def test_tracker_size(self):
        rng = np.random.default_rng(11)
        d = rng.normal(0.005, 0.04, 60)
        nav = {f"F{i:03d}": d + rng.normal(0, 0.01, 60) for i in range(400)}
        agg = dict(cmd_validate_benchmark(series_workspace(nav, {"B1": d})).tables["aggregate"][1])
        assert 0.06 <= agg["significantly_not_1_at_10"] <= 0.14

    def test_short_series_excluded(self):
        d = np.linspace(-0.02, 0.03, 12)
        out = cmd_validate_benchmark(series_workspace({"F1": d}, {"B1": d}))
        assert out.tables["funds"][1] == []
        assert out.tables["exclusions"][1][0][3] == "TOO_FEW_OBS"


class TestPersistence:
    def _uni(self, rho, seed):
        skill = FundSkill(selection_drift=0.0, persistence_rho=rho)
        return generate_universe(UniverseConfig(
            n_funds=60, n_stocks=200, n_industries=4, n_months=96, seed=seed, skill_vol=0.006,
            skill=tuple(skill for _ in range(60)), disclosure="after", quarterly_reports=False))

    def test_persistent_skill(self):
        ws = workspace_from_universe(self._uni(0.6, 2), Settings(direction="after"), threads=1)
        _, agg = cmd_persistence(ws, ["ss"]).tables["summary"]
        assert agg[0][2] > 0.5

    def test_short_series_excluded(self):
        uni = generate_universe(UniverseConfig(n_funds=4, n_stocks=40, n_industries=4, n_months=18, seed=2))
        out = cmd_persistence(workspace_from_universe(uni, Settings(direction="after"), threads=1), ["ss"])
        # three reports give only two lagged pairs
        assert out.tables["summary"][1][0][1] == 0
        assert {e[3] for e in out.tables["exclusions"][1]} == {"TOO_FEW_OBS"}


class TestAssociate:
    def test_too_few_funds(self, small_universe):
        ws = workspace_from_universe(small_universe, threads=1)
        ws = dataclasses.replace(ws, snapshots=tuple(s for s in ws.snapshots if s.fund_id in small_universe.fund_ids[:2]))
        with pytest.raises(AttribError) as e:
            cmd_associate(ws, "ss-alpha", 2014, span=2)
        assert e.value.code == "EMPTY_UNIVERSE"

    def test_unknown_pair(self, small_universe):
        with pytest.raises(AttribError):
            cmd_associate(workspace_from_universe(small_universe, threads=1), "aa-beta", 2014)


class TestDiagnose:
    def test_single_fund_band(self, small_universe):
        ws = workspace_from_universe(small_universe, Settings(direction="after"), threads=1)
        one = dataclasses.replace(ws, snapshots=tuple(s for s in ws.snapshots if s.fund_id == small_universe.fund_ids[0]))
        out = cmd_diagnose_holdings(one)
        _, funds = out.tables["funds"]
        _, bands = out.tables["bands"]
        for f, b in zip(funds, bands):
            assert b[1] == 1 and b[2] == b[4] == b[6] == f[4]

    def test_no_trading_covers_zero(self, small_universe):
        out = cmd_diagnose_holdings(workspace_from_universe(small_universe, Settings(direction="after"), threads=1))
        assert out.summary["n_covering_zero"] == out.summary["n_reports"] > 0


class TestMain:
    def test_all_commands(self, small_workspace, tmp_path, capsys):
        out = tmp_path / "out"
        for cmd in ("summarize", "attribute", "validate-benchmark", "persistence", "diagnose-holdings"):
            assert main([cmd, "--workspace", str(small_workspace), "--out", str(out)]) == 0, cmd
        rows = read_csv(out / "attribute_records.csv")
        assert {r["direction"] for r in rows} == {"after"}
        assert {r["df_convention"] for r in rows} == {"n-2"}
        assert len({r["config"] for r in rows}) == 1
        summary = json.loads((out / "attribute.json").read_text())
        assert summary["settings"]["direction"] == "after"

    def test_associate(self, small_workspace, tmp_path):
        out = tmp_path / "out"
        code = main(["associate", "--workspace", str(small_workspace), "--pair", "ss-alpha",
                     "--end-year", "2014", "--span", "2", "--out", str(out)])
        assert code == 0
        (row,) = read_csv(out / "associate_table.csv")
        assert row["pair"] == "ss-alpha" and int(row["n_funds"]) >= 3

    def test_rerun_identical(self, small_workspace, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for d in (a, b):
            assert main(["attribute", "--workspace", str(small_workspace), "--out", str(d)]) == 0
        for p in sorted(a.iterdir()):
            assert p.read_bytes() == (b / p.name).read_bytes()

    def test_flags_change_fingerprint(self, small_workspace, tmp_path):
        main(["attribute", "--workspace", str(small_workspace), "--measure", "ss", "--out", str(tmp_path / "a")])
        main(["attribute", "--workspace", str(small_workspace), "--measure", "ss", "--classical-df",
              "--out", str(tmp_path / "b")])
        a = read_csv(tmp_path / "a" / "attribute_summary.csv")[0]
        b = read_csv(tmp_path / "b" / "attribute_summary.csv")[0]
        assert (a["df_convention"], b["df_convention"]) == ("n-2", "n-1")
        assert a["config"] != b["config"]

    def test_usage_errors(self, small_workspace, tmp_path):
        assert main(["frobnicate", "--workspace", str(small_workspace)]) == 2
        assert main(["associate", "--workspace", str(small_workspace)]) == 2
        assert main(["summarize", "--workspace", str(tmp_path / "missing")]) == 2
        assert main(["summarize"]) == 2

    def test_validation_error(self, tmp_path, capsys):
        files = tiny_files()
        files["holdings.csv"].append("F2,2017-12-31,semiannual,S1,1.3,1,0")
        ws = write_ws(tmp_path / "bad", files)
        assert main(["summarize", "--workspace", str(ws), "--out", str(tmp_path / "o")]) == 1
        assert "WEIGHT_RANGE" in capsys.readouterr().err
        assert not (tmp_path / "o").exists()

    def test_missing_file(self, tmp_path):
        files = tiny_files()
        del files["funds.csv"]
        with pytest.raises(WorkspaceInvalid):
            load_workspace(write_ws(tmp_path / "ws", files))
        assert main(["summarize", "--workspace", str(tmp_path / "ws")]) == 1

    def test_unmapped_fund(self, tmp_path):
        files = tiny_files()
        files["funds.csv"] = ["fund_id,benchmark_id", "F1,B1"]
        with pytest.raises(WorkspaceInvalid) as e:
            load_workspace(write_ws(tmp_path / "ws", files))
        assert [i.code for _, i in e.value.issues] == ["NO_BENCHMARK"]

    def test_config_errors(self, tmp_path):
        ws = write_ws(tmp_path / "ws", tiny_files(), 'direction = "sideways"\n')
        assert main(["summarize", "--workspace", str(ws)]) == 1
        (ws / "workspace.toml").write_text("colour = 1\n")
        assert main(["summarize", "--workspace", str(ws)]) == 1

    def test_sample_bounds(self):
        s = make_settings({"sample_start": "2015-01", "sample_end": "2016-12"})
        assert s.in_sample(range(2015 * 12, 2015 * 12 + 6))
        assert not s.in_sample(range(2016 * 12 + 9, 2017 * 12 + 3))

    def test_bad_threads(self, small_workspace, monkeypatch):
        monkeypatch.setenv("ATTRIB_THREADS", "zero")
        assert main(["summarize", "--workspace", str(small_workspace)]) == 2

    def test_synth(self, tmp_path):
        ws = tmp_path / "syn"
        ws.mkdir()
        (ws / "workspace.toml").write_text(
            'direction = "after"\n[synth]\nn_funds = 6\nn_stocks = 40\nn_industries = 4\nn_months = 24\n'
            '[synth.skill]\nshare = 0.5\nselection_drift = 0.004\n')
        assert main(["synth", "--workspace", str(ws), "--seed", "9"]) == 0
        truth = read_csv(ws / "out" / "synth_truth.csv")
        assert [float(r["selection_drift"]) for r in truth] == [0.004] * 3 + [0.0] * 3
        first = (ws / "holdings.csv").read_bytes()
        assert main(["synth", "--workspace", str(ws), "--seed", "9"]) == 0
        assert (ws / "holdings.csv").read_bytes() == first
        assert main(["summarize", "--workspace", str(ws)]) == 0
