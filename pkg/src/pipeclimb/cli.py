"""Command-line entry point: ``pipeclimb {speeds,simulate,validate,report}``.

Exit codes: 0 ok, 1 config/input error, 2 invalid geometry, 3 simulation
error, 4 validation tolerance failed. Every failure also prints one
``error_code=<n> msg="..."`` line on stderr.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import analysis
from .config import load_scenario, parse_modes, with_overrides
from .errors import ConfigError, GeometryError, PipeClimbError
from .kinematics import bend_track_speeds, normalize_deg
from .sim import Mode, run, with_orientation, write_csv, report_from_csv

EXIT_OK, EXIT_CONFIG, EXIT_GEOMETRY, EXIT_SIM, EXIT_VALIDATION = 0, 1, 2, 3, 4
OUT_ENV = "PIPECLIMB_OUT"


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _report_error(code: int, msg: str) -> int:
    msg = " ".join(str(msg).split()).replace('"', "'")
    print(f'error_code={code} msg="{msg}"', file=sys.stderr)
    return code


def _out_dir(arg) -> Path:
    return Path(arg or os.environ.get(OUT_ENV) or "out")


def run_name(scenario_name: str, mu: float, mode: Mode) -> str:
    return f"{scenario_name}_mu{normalize_deg(mu):g}_{mode.value}"


_RUN_NAME = re.compile(r"^(?P<scenario>.+)_mu(?P<mu>[0-9.eE+-]+)_(?P<mode>passive|fixed)$")


def _run_one(job):
    scenario, mu, mode = job
    robot = with_orientation(scenario.robot, mu)
    settings = replace(scenario.settings, mode=mode)
    return run(scenario.network, robot, settings, name=run_name(scenario.name, mu, mode))


def simulate_scenario(scenario, jobs: int = 1):
    """Run every (mu, mode) pair; reports come back in input order."""
    work = [(scenario, mu, mode) for mu in scenario.mus for mode in scenario.modes]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, work))
    return [_run_one(job) for job in work]


def cmd_speeds(args) -> int:
    try:
        speeds = bend_track_speeds(args.v, args.R, args.r, args.mu)
    except GeometryError as exc:
        raise CliError(EXIT_GEOMETRY, str(exc)) from None
    p = args.precision
    print(" ".join(f"{x:.{p}f}" for x in speeds))
    print(f"sum {sum(speeds):.{p}f}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        modes = parse_modes(args.mode) if args.mode else None
        if args.dt is not None and not args.dt > 0:
            raise ConfigError(f"--dt must be positive, got {args.dt}")
        if args.record_stride is not None and args.record_stride < 1:
            raise ConfigError(f"--record-stride must be >= 1, got {args.record_stride}")
        scenario = with_overrides(scenario, mus=args.mu, modes=modes, dt=args.dt, stride=args.record_stride)
    except (ConfigError, ValueError) as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None

    try:
        reports = simulate_scenario(scenario, jobs=args.jobs)
    except (PipeClimbError, ValueError) as exc:
        raise CliError(EXIT_SIM, f"simulation failed: {exc}") from None

    out = _out_dir(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for rep in reports:
            write_csv(rep, out / f"{rep.name}.csv")
        comparisons = [c for rep in reports for c in analysis.bend_segment_comparisons(rep, scenario.network)]
        text = analysis.render_report(reports, comparisons, out_dir=out, plots=not args.no_plots)
    except OSError as exc:
        raise CliError(EXIT_CONFIG, f"cannot write output: {exc}") from None
    print(text, end="")
    print(f"wrote {len(reports)} run(s) to {out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        ref = analysis.load_reference(args.reference)
        rows = analysis.validate_reference(ref)
    except ConfigError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    except PipeClimbError as exc:
        raise CliError(EXIT_CONFIG, f"invalid reference data: {exc}") from None

    print(analysis.format_comparisons([r.comparison for r in rows]))
    print()
    failed = []
    for r in rows:
        status = {True: "PASS", False: "FAIL", None: "INFO"}[r.passed]
        if r.reference.kind == "straight":
            target = f"max APE < {r.reference.tolerance:g}%"
        else:
            target = f"max APE {r.reference.reported_ape:g}% +/- {r.reference.tolerance:g}"
        print(f"{status} {r.comparison.label}: max APE {r.comparison.max_ape:.2f}% "
              f"(mean {r.comparison.mean_ape:.2f}%), target {target}")
        if r.passed is False:
            failed.append(r.comparison.label)
    if failed:
        raise CliError(EXIT_VALIDATION, f"tolerance failed for: {', '.join(failed)}")
    return EXIT_OK


def cmd_report(args) -> int:
    src = Path(args.directory)
    if not src.is_dir():
        raise CliError(EXIT_CONFIG, f"not a directory: {src}")
    reports = []
    try:
        for path in sorted(src.glob("*.csv")):
            if path.name == "summary.csv":
                continue
            m = _RUN_NAME.match(path.stem)
            kw = {"mode": m["mode"], "mu": float(m["mu"])} if m else {}
            reports.append(report_from_csv(path, **kw))
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    if not reports:
        raise CliError(EXIT_CONFIG, f"no time-series CSV files in {src}")
    out = Path(args.out) if args.out else src
    try:
        text = analysis.render_report(reports, [], out_dir=out, plots=not args.no_plots)
    except OSError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pipeclimb", description="In-pipe tracked robot kinematic simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("speeds", help="no-slip track speeds in a bend")
    p.add_argument("--v", type=float, required=True, help="centerline speed [mm/s]")
    p.add_argument("--R", type=float, required=True, help="bend centerline radius [mm]")
    p.add_argument("--r", type=float, required=True, help="pipe inner radius [mm]")
    p.add_argument("--mu", type=float, default=0.0, help="orientation of module A [deg]")
    p.add_argument("--precision", type=int, default=2)
    p.set_defaults(func=cmd_speeds)

    p = sub.add_parser("simulate", help="run a scenario and write CSV + summary")
    p.add_argument("scenario", help="scenario file, or a bundled name (paper_network)")
    p.add_argument("--mu", type=float, action="append", help="orientation [deg]; repeatable")
    p.add_argument("--mode", action="append", choices=["passive", "fixed", "both"])
    p.add_argument("--dt", type=float)
    p.add_argument("--record-stride", type=int)
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./out)")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="compare bundled reference speeds with theory")
    p.add_argument("--reference", help="reference JSON (default: bundled dataset)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="re-render summary and plots from run CSVs")
    p.add_argument("directory")
    p.add_argument("--out")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return EXIT_OK
        return _report_error(EXIT_CONFIG, "invalid command line")
    try:
        return args.func(args)
    except CliError as exc:
        return _report_error(exc.code, str(exc))


if __name__ == "__main__":
    sys.exit(main())
