"""Benchmark harness: seeded problem matrices, trace artifacts, verification.

``run_suite`` executes every (method, wrapper, seed) cell of a TOML config,
writes one trace CSV + summary JSON + rate-report JSON per cell plus a
combined comparison table, and returns whether every gated verification
passed.  Artifacts are byte-identical across repeated runs of the same
config and seed: numbers are written with 17 significant digits, JSON keys
are sorted, and nothing carries a timestamp.

Command line:
    sscfw run CONFIG.toml [--out DIR] [--seed N]
    sscfw verify RUN_DIR
    sscfw plot-data RUN_DIR [--out FILE]

Exit code 0 iff all verifications pass.  SSC_FW_THREADS caps the thread pool
used to run independent cells (default: available cores).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import geometry, rates, region as regions
from .directions import ActiveIterate
from .objective import distance_squared, indefinite_quadratic, sc_quadratic
from .rng import SplitMix64
from .solver import RunTrace, StepKind, run_plain, run_with_ssc

FAMILIES = ("sc_quadratic", "indefinite_quadratic", "distance_squared")
CONVEX_FAMILIES = ("sc_quadratic", "distance_squared")
WRAPPERS = ("plain", "ssc")
METHODS = ("afw", "pfw", "fdfw")
_GEOMETRY_SAMPLE_SEED = 1729
_GEOMETRY_SAMPLES = 4000

__all__ = ["BenchConfig", "run_suite", "emit_plot_data", "verify_run_dir", "main"]


# -- configuration -------------------------------------------------------------


@dataclass
class BenchConfig:
    region_kind: str = "simplex"
    region_n: int = 3
    region_radius: float = 1.0
    atoms_csv: str | None = None
    family: str = "sc_quadratic"
    mu: float = 0.1
    lipschitz: float = 1.0
    methods: list = field(default_factory=lambda: ["afw"])
    wrappers: list = field(default_factory=lambda: ["plain", "ssc"])
    seeds: list = field(default_factory=lambda: [0])
    budget: int = 500
    tol: float = 1e-8
    x0_policy: str = "vertex"
    stepsize_rule: str = "lipschitz"
    out_dir: str = "runs"
    seed: int = 0

    def validate(self):
        if self.region_kind not in ("simplex", "hypercube", "l1ball", "vrep_csv"):
            raise ValueError(f"unknown region kind {self.region_kind!r}")
        if self.region_kind == "vrep_csv" and not self.atoms_csv:
            raise ValueError("vrep_csv region needs atoms_csv")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown objective family {self.family!r}")
        if self.family == "sc_quadratic" and not 0 < self.mu <= self.lipschitz:
            raise ValueError("need 0 < mu <= L")
        if not self.methods:
            raise ValueError("methods list is empty")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        if not self.wrappers:
            raise ValueError("wrappers list is empty")
        for w in self.wrappers:
            if w not in WRAPPERS:
                raise ValueError(f"unknown wrapper {w!r}")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.tol < 0:
            raise ValueError("tol must be >= 0")
        if self.x0_policy not in ("vertex", "barycenter"):
            raise ValueError("x0 policy must be 'vertex' or 'barycenter'")
        if self.stepsize_rule not in ("lipschitz", "linesearch"):
            raise ValueError("stepsize_rule must be 'lipschitz' or 'linesearch'")
        if not self.seeds:
            raise ValueError("seeds list is empty")
        return self

    @classmethod
    def from_toml(cls, path) -> "BenchConfig":
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        reg = data.get("region", {})
        obj = data.get("objective", {})
        run = data.get("run", {})
        cfg = cls(
            region_kind=reg.get("kind", "simplex"),
            region_n=int(reg.get("n", 3)),
            region_radius=float(reg.get("radius", 1.0)),
            atoms_csv=reg.get("atoms_csv"),
            family=obj.get("family", "sc_quadratic"),
            mu=float(obj.get("mu", 0.1)),
            lipschitz=float(obj.get("L", obj.get("lipschitz", 1.0))),
            methods=[str(m) for m in run.get("methods", ["afw"])],
            wrappers=[str(w) for w in run.get("wrappers", ["plain", "ssc"])],
            seeds=[int(s) for s in run.get("seeds", [0])],
            budget=int(run.get("budget", 500)),
            tol=float(run.get("tol", 1e-8)),
            x0_policy=run.get("x0", "vertex"),
            stepsize_rule=run.get("stepsize_rule", "lipschitz"),
            out_dir=run.get("out", "runs"),
            seed=int(run.get("seed", 0)),
        )
        return cfg.validate()


def build_region(cfg: BenchConfig):
    if cfg.region_kind == "simplex":
        return regions.simplex(cfg.region_n)
    if cfg.region_kind == "hypercube":
        return regions.hypercube(cfg.region_n)
    if cfg.region_kind == "l1ball":
        return regions.l1_ball(cfg.region_n, cfg.region_radius)
    atoms = np.loadtxt(cfg.atoms_csv, delimiter=",", ndmin=2)
    return regions.from_atoms(atoms)


def _cell_seed(cfg: BenchConfig, instance_seed: int) -> int:
    return (cfg.seed * 1_000_003 + instance_seed) & 0xFFFFFFFFFFFF


def build_objective(cfg: BenchConfig, reg, instance_seed: int):
    seed = _cell_seed(cfg, instance_seed)
    if cfg.family == "sc_quadratic":
        return sc_quadratic(reg.n, cfg.mu, cfg.lipschitz, seed)
    if cfg.family == "indefinite_quadratic":
        return indefinite_quadratic(reg.n, cfg.lipschitz, seed)
    rng = SplitMix64(seed).spawn(5)
    x_star = rng.dirichlet(reg.atom_set.m) @ reg.atoms
    return distance_squared(x_star)


def build_x0(cfg: BenchConfig, reg, instance_seed: int) -> ActiveIterate:
    if cfg.x0_policy == "barycenter":
        return ActiveIterate.barycenter(reg)
    rng = SplitMix64(_cell_seed(cfg, instance_seed)).spawn(7)
    return ActiveIterate.from_vertex(reg, rng.randint(reg.atom_set.m))


_GEOMETRY_CACHE: dict = {}


def region_bounds(reg) -> geometry.GeometryBounds:
    """Angle constants for a region: closed form on simplices, sampled elsewhere."""
    key = reg.fingerprint()
    if key not in _GEOMETRY_CACHE:
        if reg.kind == "simplex":
            _GEOMETRY_CACHE[key] = geometry.simplex_bounds(reg.n)
        else:
            _GEOMETRY_CACHE[key] = geometry.estimated_bounds(
                reg.atoms, _GEOMETRY_SAMPLES, _GEOMETRY_SAMPLE_SEED
            )
    return _GEOMETRY_CACHE[key]


# -- one suite cell --------------------------------------------------------------


def plain_good_step_factor(method: str, mu: float, lipschitz: float, tau: float) -> float:
    """Worst-case contraction per good step of the plain variants."""
    consts = geometry.rate_constants(mu, lipschitz, tau)
    if method == "pfw":
        return consts["q_gs_short"]
    return max(consts["q_gs_short"], consts["q_gs_fw"])


def run_cell(cfg: BenchConfig, method: str, wrapper: str, instance_seed: int) -> dict:
    reg = build_region(cfg)
    obj = build_objective(cfg, reg, instance_seed)
    x0 = build_x0(cfg, reg, instance_seed)
    if wrapper == "plain":
        trace = run_plain(method, obj, reg, x0, cfg.budget, cfg.tol, cfg.stepsize_rule)
    else:
        trace = run_with_ssc(method, obj, reg, x0, cfg.budget, cfg.tol)

    bounds = region_bounds(reg)
    tau = geometry.tau_for_method(method, bounds)
    convex = cfg.family in CONVEX_FAMILIES
    summary = {
        "cell": f"{method}_{wrapper}_seed{instance_seed}",
        "method": method,
        "wrapper": wrapper,
        "seed": instance_seed,
        "region": reg.fingerprint(),
        "family": cfg.family,
        "lipschitz": obj.lipschitz,
        "mu": obj.strong_mu,
        "diameter": reg.diameter,
        "tau": tau,
        "tau_source": bounds.source,
        "outer_steps": len(trace.records),
        "good_steps": trace.good_step_count,
        "bad_steps": trace.bad_step_count,
        "gradient_calls": trace.gradient_calls,
        "stop_reason": trace.stop_reason.value,
        "final_f": trace.final_f,
        "final_stationarity": trace.final_stationarity,
        "min_fw_gap": min(g for g in ([r.fw_gap for r in trace.records] + [trace.final_gap])),
        "f_star": None,
        "f_tilde": trace.final_f,
        "q_theory": None,
        "q_gs_theory": None,
        "K_theory": None,
        "fitted_contraction": None,
    }

    report = rates.RateReport()
    report.add(rates.verify_gap_domination(trace))
    if wrapper == "ssc" or cfg.stepsize_rule == "lipschitz":
        report.add(rates.verify_sufficient_decrease(trace))

    if convex:
        mu = obj.strong_mu
        f_star = rates.f_star_oracle(obj, reg)
        summary["f_star"] = f_star
        summary["fitted_contraction"] = rates.fitted_contraction(trace, f_star)
        if wrapper == "ssc":
            consts = geometry.rate_constants(mu, obj.lipschitz, tau)
            summary["q_theory"] = consts["q"]
            summary["K_theory"] = consts["K"]
            report.add(rates.verify_linear_rate(trace, f_star, consts["q"]))
            report.add(rates.verify_tail_length(trace, f_star, consts["q"]))
        else:
            q_gs = plain_good_step_factor(method, mu, obj.lipschitz, tau)
            summary["q_gs_theory"] = q_gs
            report.add(rates.verify_linear_rate(trace, f_star, q_gs,
                                                rel_slack=1e-7, exponent="good_steps"))
    elif wrapper == "ssc":
        rates.annotate_hidden_points(trace, obj, reg)
        k_const = tau / (obj.lipschitz * (1.0 + tau))
        summary["K_theory"] = k_const
        report.add(rates.verify_sqrt_rate(trace, k_const, trace.final_f,
                                          k_max=cfg.budget))
        hidden = [r.hidden_stationarity for r in trace.records]
        summary["min_hidden_stationarity"] = min(hidden) if hidden else None
        hidden_gaps = [r.hidden_gap for r in trace.records]
        summary["min_hidden_gap"] = min(hidden_gaps) if hidden_gaps else None

    summary["all_passed"] = report.all_passed
    return {"trace": trace, "summary": summary, "report": report, "region": reg}


# -- artifact writing --------------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _trace_rows(trace: RunTrace, n: int):
    header = ["k", "f", "stationarity", "gap", "step_kind", "step_norm",
              "inner_count", "termination_case", "hidden_index",
              "hidden_stationarity", "hidden_gap", "dsb", "alpha", "alpha_bar",
              "alpha_max", "direction_kind"] + [f"x{i}" for i in range(n)]
    rows = [header]
    for rec in trace.records:
        inner = rec.ssc
        rows.append([
            rec.k, _fmt(rec.f_value), _fmt(rec.stationarity), _fmt(rec.fw_gap),
            rec.step_kind.value, _fmt(rec.step_norm),
            "" if inner is None else inner.inner_count,
            "" if inner is None else int(inner.termination_case),
            "" if inner is None else inner.hidden_index,
            _fmt(rec.hidden_stationarity), _fmt(rec.hidden_gap),
            _fmt(rec.dsb), _fmt(rec.alpha), _fmt(rec.alpha_bar), _fmt(rec.alpha_max),
            "" if rec.direction_kind is None else rec.direction_kind.value,
        ] + [_fmt(float(v)) for v in rec.point])
    rows.append([
        len(trace.records), _fmt(trace.final_f), _fmt(trace.final_stationarity),
        _fmt(trace.final_gap), "final", _fmt(0.0), "", "", "", "", "", "", "", "", "", "",
    ] + [_fmt(float(v)) for v in trace.final_point])
    return rows


def _write_csv(path: Path, rows):
    with open(path, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def _write_json(path: Path, payload: dict):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


COMPARISON_COLUMNS = [
    "cell", "region", "family", "method", "wrapper", "seed", "outer_steps",
    "good_steps", "bad_steps", "gradient_calls", "fitted_contraction",
    "q_gs_theory", "q_theory", "min_hidden_stationarity", "min_fw_gap",
    "final_f", "f_star", "all_passed",
]


def run_suite(cfg: BenchConfig, out_dir=None) -> bool:
    """Run every cell, write artifacts, return True iff all checks passed."""
    cfg.validate()
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cells = [(m, w, s) for s in cfg.seeds for m in cfg.methods for w in cfg.wrappers]
    workers = int(os.environ.get("SSC_FW_THREADS", 0)) or (os.cpu_count() or 1)
    region_bounds(build_region(cfg))  # warm the geometry cache outside the pool
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda c: run_cell(cfg, *c), cells))

    comparison = [COMPARISON_COLUMNS]
    all_ok = True
    for res in results:
        summary = res["summary"]
        name = summary["cell"]
        _write_csv(out / f"{name}.trace.csv", _trace_rows(res["trace"], res["region"].n))
        _write_json(out / f"{name}.summary.json", summary)
        _write_json(out / f"{name}.report.json", res["report"].to_dict())
        all_ok &= summary["all_passed"]
        comparison.append([_fmt(summary.get(col)) for col in COMPARISON_COLUMNS])
    _write_csv(out / "comparison.csv", comparison)
    return all_ok


# -- disk-based re-verification ------------------------------------------------------


def _read_trace_csv(path: Path, summary: dict) -> RunTrace:
    """Rebuild the trace fields the verifiers need from a stored CSV."""
    from .solver import IterationRecord

    with open(path, newline="") as fh:
        reader = list(csv.reader(fh))
    header, rows = reader[0], reader[1:]
    col = {name: i for i, name in enumerate(header)}
    x_cols = [i for name, i in col.items() if name.startswith("x")]
    trace = RunTrace(
        method=summary["method"], wrapper=summary["wrapper"],
        lipschitz=summary["lipschitz"], region_diameter=summary["diameter"],
    )

    def fget(row, name):
        raw = row[col[name]]
        return None if raw == "" else float(raw)

    for row in rows:
        point = np.array([float(row[i]) for i in x_cols])
        if row[col["step_kind"]] == "final":
            trace.final_f = fget(row, "f")
            trace.final_stationarity = fget(row, "stationarity")
            trace.final_gap = fget(row, "gap")
            trace.final_point = point
            continue
        trace.records.append(IterationRecord(
            k=int(row[col["k"]]),
            f_value=fget(row, "f"),
            stationarity=fget(row, "stationarity"),
            fw_gap=fget(row, "gap"),
            step_kind=StepKind(row[col["step_kind"]]),
            step_norm=fget(row, "step_norm"),
            point=point,
            hidden_stationarity=fget(row, "hidden_stationarity"),
            hidden_gap=fget(row, "hidden_gap"),
        ))
    return trace


def verify_run_dir(run_dir) -> tuple[bool, list]:
    """Re-run the rate verifiers from stored artifacts; returns (ok, lines)."""
    run_dir = Path(run_dir)
    summaries = sorted(run_dir.glob("*.summary.json"))
    if not summaries:
        raise FileNotFoundError(f"no summaries under {run_dir}")
    lines = []
    all_ok = True
    for spath in summaries:
        with open(spath) as fh:
            summary = json.load(fh)
        name = summary["cell"]
        trace = _read_trace_csv(run_dir / f"{name}.trace.csv", summary)
        report = rates.RateReport()
        report.add(rates.verify_gap_domination(trace))
        if summary["wrapper"] == "ssc":
            report.add(rates.verify_sufficient_decrease(trace))
        if summary.get("f_star") is not None:
            if summary["wrapper"] == "ssc" and summary.get("q_theory") is not None:
                report.add(rates.verify_linear_rate(trace, summary["f_star"], summary["q_theory"]))
                report.add(rates.verify_tail_length(trace, summary["f_star"], summary["q_theory"]))
            elif summary.get("q_gs_theory") is not None:
                report.add(rates.verify_linear_rate(trace, summary["f_star"], summary["q_gs_theory"],
                                                    exponent="good_steps"))
        elif summary["wrapper"] == "ssc" and summary.get("K_theory") is not None:
            report.add(rates.verify_sqrt_rate(trace, summary["K_theory"], summary["f_tilde"]))
        for entry in report.entries:
            status = "PASS" if entry.passed else "FAIL"
            lines.append(f"{status} {name} {entry.claim} "
                         f"(worst violation {entry.worst_violation:.3e})")
        all_ok &= report.all_passed
    return all_ok, lines


# -- plot data -------------------------------------------------------------------


def emit_plot_data(run_dir, out_path=None) -> Path:
    """Long-format CSV of (cell, series, k, value) for external plotting."""
    run_dir = Path(run_dir)
    out_path = Path(out_path) if out_path else run_dir / "plot_data.csv"
    rows = [["cell", "series", "k", "value"]]
    for spath in sorted(run_dir.glob("*.summary.json")):
        with open(spath) as fh:
            summary = json.load(fh)
        name = summary["cell"]
        trace = _read_trace_csv(run_dir / f"{name}.trace.csv", summary)
        f_star = summary.get("f_star")
        if summary["family"] in CONVEX_FAMILIES:
            if f_star is None:
                raise ValueError(f"cell {name}: convex family without a stored f*")
            for k, f in enumerate(trace.f_values):
                gap = f - f_star
                if gap > 0:
                    rows.append([name, "log10_f_gap", k, _fmt(float(np.log10(gap)))])
        for k, pi in enumerate(trace.stationarities):
            if pi > 0:
                rows.append([name, "log10_stationarity", k, _fmt(float(np.log10(pi)))])
    _write_csv(out_path, rows)
    return out_path


# -- CLI ------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sscfw",
        description="Frank-Wolfe variants with short-step chaining: benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a suite from a TOML config")
    p_run.add_argument("config", help="path to the TOML config")
    p_run.add_argument("--out", default=None, help="output directory (overrides config)")
    p_run.add_argument("--seed", type=int, default=None, help="global seed (overrides config)")

    p_verify = sub.add_parser("verify", help="re-run rate verification from stored traces")
    p_verify.add_argument("run_dir")

    p_plot = sub.add_parser("plot-data", help="emit plot-ready CSV from stored traces")
    p_plot.add_argument("run_dir")
    p_plot.add_argument("--out", default=None)

    args = parser.parse_args(argv)
    if args.command == "run":
        cfg = BenchConfig.from_toml(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        ok = run_suite(cfg, out_dir=args.out)
        print("all verifications passed" if ok else "verification FAILURES (see reports)")
        return 0 if ok else 1
    if args.command == "verify":
        ok, lines = verify_run_dir(args.run_dir)
        print("\n".join(lines))
        return 0 if ok else 1
    path = emit_plot_data(args.run_dir, args.out)
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
