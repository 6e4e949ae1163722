"""Command-line interface.

Every command writes CSV (numbers at 12 significant digits, booleans as 0/1)
to stdout or ``--out``. Diagnostics go to stderr. Exit codes: 0 success,
2 config error, 3 numerical-consistency error, 4 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from .config import emit_config, load_config
from .cost import cost_rate_curve, downtime_moments
from .errors import ConfigError, DyninspectError, NumericalConsistencyError
from .optimizer import cost_curves, optimal_interval, scenario_sweep, surface_triples
from .simulation import SimulationPlan, downtime_se_floor, reliability_se_floor, simulate, z_score
from .system import SystemModel, Topology, reliability_curve

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_USAGE = 0, 2, 3, 4


class UsageError(DyninspectError):
    exit_code = EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format(float(value), ".12g")


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"not a comma-separated list of numbers: {text!r}") from None


def parse_grid(text: str) -> np.ndarray:
    """``a,b,c`` lists, ``start:stop:num`` linear grids, ``log:start:stop:num`` log grids."""
    try:
        if text.startswith("log:"):
            a, b, n = text[4:].split(":")
            grid = np.geomspace(float(a), float(b), int(n))
        elif ":" in text:
            a, b, n = text.split(":")
            grid = np.linspace(float(a), float(b), int(n))
        else:
            grid = np.array(parse_floats(text))
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}") from None
    if grid.size == 0 or np.any(np.diff(grid) <= 0) or not np.all(np.isfinite(grid)):
        raise UsageError(f"grid {text!r} must be non-empty and strictly increasing")
    return grid


def read_scenarios(path: str) -> list[tuple[float, ...]]:
    """JSON list of age lists, or CSV with one age vector per row (header optional)."""
    text = Path(path).read_text()
    if path.endswith(".json"):
        return [tuple(float(a) for a in row) for row in json.loads(text)]
    rows = []
    for row in csv.reader(io.StringIO(text)):
        if not row:
            continue
        try:
            rows.append(tuple(float(a) for a in row))
        except ValueError:
            if rows:
                raise UsageError(f"non-numeric scenario row {row!r}") from None
    return rows


def write_rows(header, rows, out):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    if out:
        Path(out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _ages(args, cfg):
    if args.ages is None:
        return [0.0] * cfg.system.n
    ages = parse_floats(args.ages)
    if len(ages) != cfg.system.n:
        raise UsageError(f"--ages has {len(ages)} values but the system has {cfg.system.n} components")
    return ages


def cmd_reliability(cfg, ages, t_grid, out=None, backend=None):
    sys_ = cfg.system
    cols = [reliability_curve(sys_, t_grid, ages, cfg.numerics, backend)]
    for comp, age in zip(sys_.components, ages):
        single = SystemModel(Topology.SERIES, (comp,), sys_.shock)
        cols.append(reliability_curve(single, t_grid, [age], cfg.numerics, backend))
    header = ["t", "R_system"] + [f"R_component_{i + 1}" for i in range(sys_.n)]
    write_rows(header, zip(t_grid, *cols), out)


def cmd_cost_curve(cfg, ages, tau_grid, out=None, backend=None):
    values = cost_rate_curve(cfg.system, cfg.costs, tau_grid, ages, cfg.numerics, backend)
    write_rows(["tau", "cost_rate"], zip(tau_grid, values), out)


_RESULT_COLS = ["tau_star", "cost_rate", "evaluations", "boundary", "immediate_action"]


def _result_row(r):
    return [r.tau_star, r.cost_rate_at_star, r.evaluations, r.boundary, r.immediate_action]


def cmd_optimize(cfg, ages, out=None, backend=None):
    r = optimal_interval(cfg.system, cfg.costs, ages, cfg.optimizer, cfg.numerics, backend)
    if r.boundary:
        print("warning: minimizer lies on a search bound; widen tau_min/tau_max", file=sys.stderr)
    write_rows(_RESULT_COLS, [_result_row(r)], out)
    return r


def cmd_table(cfg, scenarios, out=None, threads=1, curves_out=None, tau_grid=None, surface_out=None, backend=None):
    results = scenario_sweep(cfg.system, cfg.costs, scenarios, cfg.optimizer, cfg.numerics, threads, backend)
    n = cfg.system.n
    header = ["scenario"] + [f"u{i + 1}" for i in range(n)] + _RESULT_COLS + ["error"]
    rows = [[k + 1, *r.ages, *_result_row(r), r.error] for k, r in enumerate(results)]
    write_rows(header, rows, out)
    if curves_out:
        grid = tau_grid if tau_grid is not None else cfg.optimizer.grid()
        curves = cost_curves(cfg.system, cfg.costs, scenarios, grid, cfg.numerics, backend)
        write_rows(
            ["scenario", "tau", "cost_rate"],
            ([k + 1, tau, c] for k, row in enumerate(curves) for tau, c in zip(grid, row)),
            curves_out,
        )
    if surface_out:
        write_rows(["u1", "u2", "tau_star"], surface_triples(results), surface_out)
    for k, r in enumerate(results):
        if r.error:
            print(f"scenario {k + 1}: {r.error}", file=sys.stderr)
    return results


def cmd_simulate(cfg, ages, t_grid, n_paths, seed, taus=(), out=None, threads=1, backend=None):
    plan = SimulationPlan(n_paths=n_paths, time_grid=tuple(t_grid), seed=seed)
    est = simulate(cfg.system, ages, plan, taus, cfg.numerics, threads)
    analytic = reliability_curve(cfg.system, t_grid, ages, cfg.numerics, backend)
    rows = []
    for (t, p, se), a in zip(est.reliability_at, analytic):
        rows.append(["reliability", t, a, p, se, z_score(p, se, a, reliability_se_floor(a, n_paths))])
    for tau, m, se in est.expected_downtime:
        a, second = downtime_moments(cfg.system, tau, ages, cfg.numerics, backend)
        rows.append(["expected_downtime", tau, a, m, se, z_score(m, se, a, downtime_se_floor(a, second, n_paths))])
    write_rows(["quantity", "time", "analytic", "mc_estimate", "mc_se", "z_score"], rows, out)
    return est


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", required=True, help="config JSON path or bundled name (series3, parallel2)")
    common.add_argument("--gamma-parameterization", choices=("scale", "rate"), default=None)
    common.add_argument("--out", default=None, help="write CSV here instead of stdout")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--backend", choices=("numba", "numpy"), default=None)

    parser = _Parser(prog="dyninspect", description="Reliability and dynamic inspection-interval optimization.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reliability", parents=[common], help="system and component reliability over time")
    p.add_argument("--ages", default=None)
    p.add_argument("--t-grid", default="0:10:101")

    p = sub.add_parser("cost-curve", parents=[common], help="cost rate versus inspection interval")
    p.add_argument("--ages", default=None)
    p.add_argument("--tau-grid", default="log:0.01:20:200")

    p = sub.add_parser("optimize", parents=[common], help="optimal next inspection interval")
    p.add_argument("--ages", default=None)

    p = sub.add_parser("table", parents=[common], help="optimize every scenario")
    p.add_argument("--scenarios", default=None, help="JSON or CSV age vectors; defaults to the config's list")
    p.add_argument("--curves-out", default=None, help="also write cost-rate curves per scenario")
    p.add_argument("--tau-grid", default=None, help="tau grid for --curves-out")
    p.add_argument("--surface-out", default=None, help="also write (u1, u2, tau_star) triples")

    p = sub.add_parser("simulate", parents=[common], help="analytic versus Monte Carlo comparison")
    p.add_argument("--ages", default=None)
    p.add_argument("--t-grid", default="0.5:5:10")
    p.add_argument("--tau", default="", help="comma-separated taus for expected downtime")
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=20191)

    sub.add_parser("emit-config", parents=[common], help="print the validated config as JSON")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    cfg = load_config(args.config).with_parameterization(args.gamma_parameterization)
    if args.command == "reliability":
        cmd_reliability(cfg, _ages(args, cfg), parse_grid(args.t_grid), args.out, args.backend)
    elif args.command == "cost-curve":
        cmd_cost_curve(cfg, _ages(args, cfg), parse_grid(args.tau_grid), args.out, args.backend)
    elif args.command == "optimize":
        cmd_optimize(cfg, _ages(args, cfg), args.out, args.backend)
    elif args.command == "table":
        scenarios = read_scenarios(args.scenarios) if args.scenarios else cfg.scenarios
        if not scenarios:
            raise UsageError("no scenarios: pass --scenarios or add them to the config")
        tau_grid = parse_grid(args.tau_grid) if args.tau_grid else None
        cmd_table(cfg, scenarios, args.out, args.threads, args.curves_out, tau_grid, args.surface_out, args.backend)
    elif args.command == "simulate":
        taus = parse_floats(args.tau) if args.tau else []
        cmd_simulate(
            cfg, _ages(args, cfg), parse_grid(args.t_grid), args.paths, args.seed, taus, args.out, args.threads,
            args.backend,
        )
    elif args.command == "emit-config":
        text = emit_config(cfg)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except ConfigError as exc:
        print(f"dyninspect: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalConsistencyError as exc:
        print(f"dyninspect: numerical consistency error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DyninspectError, ValueError, OSError) as exc:
        print(f"dyninspect: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", EXIT_USAGE) if isinstance(exc, DyninspectError) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
