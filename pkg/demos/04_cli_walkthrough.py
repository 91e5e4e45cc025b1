"""
The attrib command line, end to end
===================================

Generate a workspace, then run each batch command on it. Every command
writes tidy CSV tables plus a JSON summary into the output directory.
"""
import csv
import pathlib
import tempfile

from fundattrib.cli import main

root = pathlib.Path(tempfile.mkdtemp()) / "ws"
root.mkdir()
(root / "workspace.toml").write_text("""\
direction = "after"

[synth]
n_funds = 40
n_stocks = 200
n_months = 72
start_year = 2012

[synth.skill]
share = 0.5
selection_drift = 0.004
""")

# same as: attrib synth --workspace ws --seed 5
main(["synth", "--workspace", str(root), "--seed", "5"])
print(sorted(p.name for p in root.glob("*.csv")))

for argv in (["summarize"],
             ["attribute"],
             ["validate-benchmark", "--model", "ff"],
             ["persistence", "--measure", "ss"],
             ["associate", "--pair", "ss-alpha", "--end-year", "2017", "--span", "6"],
             ["diagnose-holdings"]):
    code = main([argv[0], "--workspace", str(root)] + argv[1:])
    print("exit", code)

out = root / "out"
with open(out / "attribute_summary.csv", newline="") as fh:
    for row in csv.DictReader(fh):
        print(row["measure"], row["n_funds"], row["positive_proportion"], row["significantly_positive_proportion"])
print((out / "associate.json").read_text())
