"""``attrib`` batch command line.

Each command reads a workspace, computes, and writes tidy CSV tables plus a
JSON summary to ``--out`` (default ``WORKSPACE/out``). Every CSV row ends
with ``df_convention``, ``direction`` and ``config`` (a 12-hex fingerprint of
the effective settings) so the tables describe themselves.

Exit status: 0 success, 1 validation or data errors, 2 usage errors.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from typing import Sequence

from .data_model import AttribError
from .pipeline import (
    MEASURES,
    PAIRS,
    CommandOutput,
    Settings,
    WorkspaceInvalid,
    cmd_associate,
    cmd_attribute,
    cmd_diagnose_holdings,
    cmd_persistence,
    cmd_summarize,
    cmd_validate_benchmark,
    default_threads,
    load_workspace,
    make_settings,
    read_config,
)
from .synthetic import FundSkill, UniverseConfig, generate_universe

COMMANDS = ("summarize", "attribute", "validate-benchmark", "persistence", "associate",
            "diagnose-holdings", "synth")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="attrib", description="Holdings-based fund attribution.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--workspace", required=True, help="directory with the input CSVs")
    p.add_argument("--direction", choices=("before", "after"))
    p.add_argument("--model", choices=("simple", "ff"), default="simple")
    p.add_argument("--measure", choices=MEASURES, action="append",
                   help="restrict to one measure; repeatable (default: all)")
    p.add_argument("--pair", choices=tuple(PAIRS))
    p.add_argument("--end-year", type=int)
    p.add_argument("--span", type=int, default=5)
    p.add_argument("--seed", type=int, help="synth: override the universe seed")
    p.add_argument("--classical-df", action="store_true",
                   help="positivity test on n-1 df instead of n-2")
    p.add_argument("--allow-gaps", action="store_true",
                   help="let regressions skip interior missing months")
    p.add_argument("--out", help="output directory (default WORKSPACE/out)")
    return p


def _cell(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_output(out_dir: str, result: CommandOutput, settings: Settings) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    stem = result.command.replace("-", "_")
    tail = [settings.df_convention, result.direction, settings.fingerprint()]
    paths = []
    for name in sorted(result.tables):
        header, rows = result.tables[name]
        path = os.path.join(out_dir, f"{stem}_{name}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(list(header) + ["df_convention", "direction", "config"])
            for row in rows:
                w.writerow([_cell(x) for x in row] + tail)
        paths.append(path)
    summary = {
        "command": result.command,
        "direction": result.direction,
        "config": settings.fingerprint(),
        "settings": _settings_json(settings),
        **result.summary,
    }
    path = os.path.join(out_dir, f"{stem}.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(summary, sort_keys=True, indent=2, allow_nan=False) + "\n")
    paths.append(path)
    return paths


def _settings_json(settings: Settings) -> dict:
    d = dataclasses.asdict(settings)
    d["levels"] = list(d["levels"])
    return d


def synth_config(raw: dict, seed: int | None) -> UniverseConfig:
    """UniverseConfig from a ``[synth]`` table.

    ``[synth.skill]`` takes ``share`` (fraction of funds, first by id, that
    are skilled) and the :class:`FundSkill` fields.
    """
    raw = dict(raw)
    skill = dict(raw.pop("skill", {}))
    share = float(skill.pop("share", 0.5 if skill else 0.0))
    fields = {f.name for f in dataclasses.fields(UniverseConfig)} - {"skill"}
    unknown = sorted(set(raw) - fields)
    if unknown:
        raise AttribError("CONFIG", f"[synth]: unknown key(s) {', '.join(unknown)}")
    if seed is not None:
        raw["seed"] = seed
    try:
        fs = FundSkill(**skill)
        n = int(raw.get("n_funds", UniverseConfig.n_funds))
        k = int(round(share * n))
        raw["skill"] = tuple(fs if f < k else FundSkill() for f in range(n))
        return UniverseConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise AttribError("CONFIG", f"[synth]: {exc}") from None


def run_synth(workspace: str, out_dir: str, synth_raw: dict, seed: int | None) -> dict:
    cfg = synth_config(synth_raw, seed)
    uni = generate_universe(cfg)
    uni.write(workspace)
    os.makedirs(out_dir, exist_ok=True)
    truth = os.path.join(out_dir, "synth_truth.csv")
    with open(truth, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["fund_id", "benchmark_id", "selection_drift", "timing_gamma", "persistence_rho",
                    "mean_realized_selection"])
        for f, fid in enumerate(uni.fund_ids):
            sk = cfg.skill_of(f)
            w.writerow([fid, uni.benchmark_ids[uni.fund_benchmark[f]], repr(sk.selection_drift),
                        repr(sk.timing_gamma), repr(sk.persistence_rho),
                        repr(float(uni.selection_path[f].mean()))])
    return {"n_funds": cfg.n_funds, "n_stocks": cfg.n_stocks, "n_months": cfg.n_months,
            "seed": cfg.seed, "disclosure": cfg.disclosure}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    ws_dir = args.workspace
    out_dir = args.out or os.path.join(ws_dir, "out")
    try:
        if args.command == "synth":
            os.makedirs(ws_dir, exist_ok=True)
            _, synth_raw = read_config(ws_dir)
            info = run_synth(ws_dir, out_dir, synth_raw, args.seed)
            print(json.dumps(info, sort_keys=True))
            return 0
        if not os.path.isdir(ws_dir):
            print(f"attrib: workspace {ws_dir} is not a directory", file=sys.stderr)
            return 2
        if args.command == "associate" and (args.pair is None or args.end_year is None):
            print("attrib: associate needs --pair and --end-year", file=sys.stderr)
            return 2
        raw, _ = read_config(ws_dir)
        settings = make_settings(raw, direction=args.direction,
                                 df_convention="n-1" if args.classical_df else None,
                                 allow_gaps=True if args.allow_gaps else None)
        ws = load_workspace(ws_dir, settings, default_threads())
        measures = tuple(args.measure) if args.measure else MEASURES
        if args.command == "summarize":
            result = cmd_summarize(ws)
        elif args.command == "attribute":
            result = cmd_attribute(ws, args.direction, measures)
        elif args.command == "validate-benchmark":
            result = cmd_validate_benchmark(ws, args.model)
        elif args.command == "persistence":
            result = cmd_persistence(ws, measures, args.direction)
        elif args.command == "associate":
            result = cmd_associate(ws, args.pair, args.end_year, args.span)
        else:
            result = cmd_diagnose_holdings(ws, args.direction)
        for path in write_output(out_dir, result, settings):
            print(path)
        return 0
    except WorkspaceInvalid as exc:
        for name, issue in exc.issues:
            if issue.severity == "error":
                where = f":{issue.line}" if issue.line else ""
                print(f"{name}{where}: {issue.code}: {issue.message}", file=sys.stderr)
        print(f"attrib: {exc}; nothing computed", file=sys.stderr)
        return 1
    except AttribError as exc:
        print(f"attrib: {exc.code}: {exc.message}", file=sys.stderr)
        return 2 if exc.code == "USAGE" else 1


if __name__ == "__main__":
    sys.exit(main())
