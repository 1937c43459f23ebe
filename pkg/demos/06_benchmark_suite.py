"""Programmatic benchmark suite run.

Equivalent to the command line

    sscfw run configs/quickstart.toml --out runs/quickstart
    sscfw verify runs/quickstart
    sscfw plot-data runs/quickstart

but drives the harness directly and prints the comparison table.
"""

import csv
from pathlib import Path

from sscfw.bench import BenchConfig, emit_plot_data, run_suite, verify_run_dir

cfg = BenchConfig(
    region_kind="simplex", region_n=3,
    family="sc_quadratic", mu=0.1, lipschitz=1.0,
    methods=["afw", "pfw", "fdfw"], wrappers=["plain", "ssc"],
    seeds=[0], budget=500, tol=1e-8, x0_policy="vertex", seed=2024,
)
out = Path("runs/quickstart-demo")
ok = run_suite(cfg, out_dir=out)
print(f"suite written to {out}/ (all checks passed: {ok})")

with open(out / "comparison.csv", newline="") as fh:
    rows = list(csv.DictReader(fh))
cols = ("cell", "outer_steps", "good_steps", "bad_steps", "fitted_contraction",
        "q_gs_theory", "q_theory")
print("\n" + "  ".join(f"{c:>18s}" for c in cols))
for row in rows:
    print("  ".join(f"{(row[c] or '-')[:18]:>18s}" for c in cols))

ok_again, lines = verify_run_dir(out)
print(f"\nre-verification from disk: {'all PASS' if ok_again else 'FAILURES'} "
      f"({len(lines)} checks)")
print(f"plot data: {emit_plot_data(out)}")
