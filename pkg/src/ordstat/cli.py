"""Command-line front end.

Subcommands: ``reproduce`` runs one of the four builtin comparisons,
``compare`` runs a scenario file, ``oracle-check`` exercises the
closed-form-vs-enumeration identity, ``simulate`` cross-checks an
independent scenario against Monte Carlo.  Curve CSVs, SVG plots, and
text verdicts land in --out-dir (or $ORDSTAT_OUT, or ./ordstat-out).

Exit codes: 0 success, 1 I/O failure, 2 hypothesis failure, 3 dominance
or concordance failure, 64 malformed scenario/configuration.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .copula import survival_copula_eval
from .marginals import mphr_sf
from .mcsim import SimConfig, mc_vs_analytic_report
from .orderstats import DependentSampleSpec, oracle_identity_max_deviation
from .scenarios import (
    EXAMPLE_IDS,
    ScenarioError,
    builtin_example,
    load_scenario_file,
)
from .stochorder import (
    PRIMARY_CHECK,
    DominanceReport,
    Scenario,
    check_hr,
    check_st,
    scenario_hazard_functions,
    scenario_survival_functions,
    validate_theorem,
)
from .svgplot import render_csv_plot

ORACLE_TOLERANCE = 1e-10


def _fmt(v: float | None) -> str:
    return "" if v is None else f"{v:.17g}"


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _curves_csv(scenario: Scenario) -> str:
    """Schema u,x,sf_X,sf_Y,hr_X,hr_Y,source; rows ascend in u.

    Hazard cells stay empty for survival-only comparisons and at x = 0,
    distinguishing "not computed" from an actual zero.
    """
    grid = scenario.grid
    xs = grid.x
    sf_x, sf_y = scenario_survival_functions(scenario)
    fx = np.asarray(sf_x(xs), dtype=float)
    fy = np.asarray(sf_y(xs), dtype=float)
    hazards = scenario_hazard_functions(scenario)
    hx = hy = None
    if hazards is not None:
        pos = grid.u < 1.0
        hx = np.full(xs.size, np.nan)
        hy = np.full(xs.size, np.nan)
        hx[pos] = np.asarray(hazards[0](xs[pos]), dtype=float)
        hy[pos] = np.asarray(hazards[1](xs[pos]), dtype=float)
    lines = ["u,x,sf_X,sf_Y,hr_X,hr_Y,source"]
    for i, u in enumerate(grid.u):
        hxi = None if hx is None or not np.isfinite(hx[i]) else float(hx[i])
        hyi = None if hy is None or not np.isfinite(hy[i]) else float(hy[i])
        lines.append(f"{_fmt(float(u))},{_fmt(float(xs[i]))},{_fmt(float(fx[i]))},"
                     f"{_fmt(float(fy[i]))},{_fmt(hxi)},{_fmt(hyi)},analytic")
    return "\n".join(lines) + "\n"


def _run_checks(scenario: Scenario) -> dict[str, DominanceReport]:
    sf_x, sf_y = scenario_survival_functions(scenario)
    checks = {"st": check_st(sf_x, sf_y, scenario.grid)}
    hazards = scenario_hazard_functions(scenario)
    if hazards is not None:
        checks["hr"] = check_hr(hazards[0], hazards[1], sf_x, sf_y, scenario.grid)
    return checks


def _report_text(scenario: Scenario, hyp, checks: dict[str, DominanceReport],
                 exit_code: int, files: list[Path]) -> str:
    grid = scenario.grid
    lines = [
        f"scenario: {scenario.name or 'unnamed'}",
        f"theorem tag: {scenario.theorem}",
        f"grid: {grid.u.size} points, u in [{grid.u[0]:g}, {grid.u[-1]:g}], x = -log(u)",
        "",
    ]
    if hyp.conditions:
        lines.append("hypothesis conditions:")
        for c in hyp.conditions:
            mark = "pass" if c.passed else "FAIL"
            detail = f"  ({c.detail})" if c.detail else ""
            lines.append(f"  [{mark}] {c.name}{detail}")
    else:
        lines.append("hypothesis conditions: none (untagged scenario)")
    lines.append("")
    lines.append("order checks (finite-grid certificates):")
    for order, rep in checks.items():
        mark = "pass" if rep.holds else "FAIL"
        lines.append(f"  [{mark}] {order}: min margin {rep.min_margin:.6e} "
                     f"at x={rep.witness_x:.6g}")
        if rep.ratio_margin is not None:
            rmark = "pass" if rep.ratio_holds else "FAIL"
            lines.append(f"         [{rmark}] survival-ratio monotonicity: "
                         f"min step {rep.ratio_margin:.6e}")
            if not rep.routes_agree:
                lines.append("         WARNING: the two hazard-order routes disagree "
                             "(numerical instability)")
    lines.append("")
    lines.append(f"verdict: {'PASS' if exit_code == 0 else 'FAIL'} (exit {exit_code})")
    if files:
        lines.append("files:")
        lines.extend(f"  {p}" for p in files)
    return "\n".join(lines) + "\n"


def _resolve_out_dir(flag_value: str | None) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get("ORDSTAT_OUT")
    return Path(env) if env else Path("ordstat-out")


def _run_comparison(scenario: Scenario, out_dir: Path, output: dict | None = None) -> int:
    output = output or {}
    stem = scenario.name or "scenario"
    csv_path = out_dir / output.get("csv", f"{stem}_curves.csv")
    svg_path = out_dir / output.get("svg", f"{stem}_plot.svg")
    report_path = out_dir / output.get("report", f"{stem}_report.txt")

    hyp = validate_theorem(scenario)
    checks = _run_checks(scenario)
    primary = PRIMARY_CHECK[scenario.theorem]
    if primary not in checks:  # tagged hr but hazards unavailable
        primary = "st"

    exit_code = 0
    if scenario.theorem != "none" and not hyp.ok:
        exit_code = 2
    elif not checks[primary].holds:
        exit_code = 3

    csv_text = _curves_csv(scenario)
    _write_atomic(csv_path, csv_text)
    _write_atomic(svg_path, render_csv_plot(csv_text))
    report = _report_text(scenario, hyp, checks, exit_code,
                          [csv_path, svg_path, report_path])
    _write_atomic(report_path, report)
    sys.stdout.write(report)
    return exit_code


def _cmd_reproduce(args) -> int:
    scenario = builtin_example(args.example, _grid_override(args))
    return _run_comparison(scenario, _resolve_out_dir(args.out_dir))


def _cmd_compare(args) -> int:
    scenario, output = load_scenario_file(args.scenario, _grid_override(args))
    return _run_comparison(scenario, _resolve_out_dir(args.out_dir), output)


def _sign_flipped_sf(spec: DependentSampleSpec, x: float) -> float:
    # deliberately wrong combination used only by --inject-sign-flip
    G = [float(mphr_sf(m, x)) for m in spec.marginals]
    n = len(G)
    acc = sum(survival_copula_eval(spec.generator, G[:i] + G[i + 1:]) for i in range(n))
    return acc + (n - 1) * survival_copula_eval(spec.generator, G)


def _cmd_oracle_check(args) -> int:
    if not 2 <= args.n <= 10:
        raise ScenarioError("--n must lie in [2, 10]")
    closed = _sign_flipped_sf if args.inject_sign_flip else None
    worst = oracle_identity_max_deviation(max_n=args.n, trials=args.trials,
                                          seed=args.seed, closed_form=closed)
    ok = worst <= ORACLE_TOLERANCE
    print(f"oracle identity: max |closed form - count oracle| = {worst:.3e} "
          f"over {args.trials} random samples (n <= {args.n}) "
          f"[{'OK' if ok else 'VIOLATION'}]")
    return 0 if ok else 3


def _cmd_simulate(args) -> int:
    scenario, output = load_scenario_file(args.scenario, _grid_override(args))
    side = scenario.side_x
    if not (isinstance(side, DependentSampleSpec)
            and side.generator.name == "independence" and scenario.law_x is None):
        print("simulate needs an independent x_side without a sample-size law",
              file=sys.stderr)
        return 2
    config = SimConfig(replications=args.replications, seed=args.seed,
                       marginals=side.marginals, grid=scenario.grid)
    report = mc_vs_analytic_report(config)

    out_dir = _resolve_out_dir(args.out_dir)
    stem = (scenario.name or "scenario") + "_mc"
    lines = ["u,x,sf_X,sf_Y,hr_X,hr_Y,source"]
    xs = scenario.grid.x
    for i, u in enumerate(scenario.grid.u):
        lines.append(f"{_fmt(float(u))},{_fmt(float(xs[i]))},"
                     f"{_fmt(float(report.analytic[i]))},,,,analytic")
    for i, u in enumerate(scenario.grid.u):
        lines.append(f"{_fmt(float(u))},{_fmt(float(xs[i]))},"
                     f"{_fmt(float(report.empirical[i]))},,,,mc")
    csv_text = "\n".join(lines) + "\n"
    csv_path = out_dir / output.get("csv", f"{stem}_curves.csv")
    _write_atomic(csv_path, csv_text)
    _write_atomic(out_dir / output.get("svg", f"{stem}_plot.svg"),
                  render_csv_plot(csv_text))
    verdict = "PASS" if report.passed else "FAIL"
    text = (f"scenario: {scenario.name}\n"
            f"replications: {report.replications}  seed: {report.seed}  "
            f"rng: {report.algorithm}\n"
            f"max standardized deviation: {report.max_std_dev:.4f} "
            f"(threshold 4.0)\nverdict: {verdict}\n")
    _write_atomic(out_dir / output.get("report", f"{stem}_report.txt"), text)
    sys.stdout.write(text)
    return 0 if report.passed else 3


def _grid_override(args) -> dict:
    return {"points": getattr(args, "grid_points", None),
            "u_min": getattr(args, "u_min", None)}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--grid-points", type=int, default=None,
                        help="number of u-grid points (default 1000)")
    shared.add_argument("--u-min", type=float, default=None,
                        help="smallest u on the grid (default 1e-3)")
    shared.add_argument("--out-dir", default=None,
                        help="output directory (default $ORDSTAT_OUT or ./ordstat-out)")

    parser = argparse.ArgumentParser(
        prog="ordstat",
        description="Fail-safe system lifetime comparisons for tilted "
                    "proportional-hazards samples")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", parents=[shared],
                       help="run one of the builtin comparisons")
    p.add_argument("example", type=int, choices=EXAMPLE_IDS)
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("compare", parents=[shared],
                       help="run a scenario JSON file")
    p.add_argument("scenario")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("oracle-check", parents=[shared],
                       help="closed form vs subset-enumeration oracle")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-sign-flip", action="store_true",
                   help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("simulate", parents=[shared],
                       help="Monte Carlo concordance for an independent scenario")
    p.add_argument("scenario")
    p.add_argument("--replications", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 64
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 64
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
