"""Command-line interface for lvadvect.

This module provides the ``lvadvect`` command with the subcommands
``classify``, ``run``, ``sweep`` and ``presets``.

Exit codes:
    0  success (classify: a criterion is satisfied; run: bounded verdict)
    2  malformed input or configuration
    3  classify: no criterion is satisfied
    4  run: Growing or BlowUpSuspected
    5  run: Failed
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from lvadvect.config import LabConfig
from lvadvect.configfile import load_config
from lvadvect.exceptions import ConfigurationError, LVAdvectError
from lvadvect.harness import (
    PRESET_DESCRIPTIONS,
    compare_theory,
    run_sweep,
    write_run_artifacts,
    write_sweep,
)
from lvadvect.models.results import RunVerdict
from lvadvect.models.spec import (
    ModelSpec,
    PowerLawDiffusion,
    PowerLawSensitivity,
    TaxisSign,
    VDynamics,
)
from lvadvect.stepper import run_detailed
from lvadvect.theory import any_satisfied, classify
from lvadvect.utils import configure_logging, describe_validation_error

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_SATISFIED = 3
EXIT_UNBOUNDED = 4
EXIT_FAILED = 5

RUN_EXIT_CODES = {
    RunVerdict.BOUNDED: EXIT_OK,
    RunVerdict.CONVERGED: EXIT_OK,
    RunVerdict.GROWING: EXIT_UNBOUNDED,
    RunVerdict.BLOW_UP_SUSPECTED: EXIT_UNBOUNDED,
    RunVerdict.FAILED: EXIT_FAILED,
}


def _error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


# ==================== Commands ====================


def cmd_classify(args: argparse.Namespace) -> int:
    """Print one line (or JSON object) per applicable criterion."""
    if args.config is not None:
        scenario = load_config(args.config, args.set).scenario()
        spec = scenario.spec
        dimension = args.N if args.N is not None else scenario.grid.dim
    else:
        spec = ModelSpec(
            alpha=args.alpha,
            chi=args.chi,
            taxis_sign=TaxisSign(args.taxis),
            v_dynamics=VDynamics(args.v_dynamics),
            diffusion_law=PowerLawDiffusion(m1=args.m1),
            sensitivity_law=PowerLawSensitivity(m2=args.m2),
            assume_b1_large=args.assume_b1_large,
        )
        dimension = args.N if args.N is not None else 2

    reports = classify(spec, dimension)
    if args.json:
        print(json.dumps([r.report_dict() for r in reports], indent=2))
    else:
        for report in reports:
            print(report.format_line())

    return EXIT_OK if any_satisfied(reports) else EXIT_NOT_SATISFIED


def cmd_run(args: argparse.Namespace, config: LabConfig) -> int:
    """Run one scenario and write its artifacts."""
    scenario = load_config(args.config, args.set).scenario()
    out = Path(args.out) if args.out else Path("runs") / scenario.name

    summary, state = run_detailed(scenario)
    write_run_artifacts(summary, state, scenario, out, float_format=config.float_format)

    print(f"{scenario.name}: {summary.verdict.value} at t={summary.t_final:.6g} ({out})")
    for note in summary.notes:
        print(f"  note: {note}")
    return RUN_EXIT_CODES[summary.verdict]


def cmd_sweep(args: argparse.Namespace, config: LabConfig) -> int:
    """Run a sweep and write the sweep directory."""
    plan = load_config(args.config, args.set).sweep_plan()
    out = Path(args.out) if args.out else Path("sweeps") / plan.base.name
    workers = config.workers if config.workers is not None else args.workers

    result = run_sweep(plan, worker_count=workers, cap=config.sweep_cap)
    write_sweep(result, plan, out, float_format=config.float_format)
    table = compare_theory(result)

    print(f"{plan.base.name}: {len(result.rows)} runs ({out})")
    for name, count in table.class_counts.items():
        print(f"  {name:<22} {count}")
    if table.agreement_fraction is not None:
        print(f"  guaranteed points bounded: {table.agreement_fraction:.1%}")
    return EXIT_OK


def cmd_presets(args: argparse.Namespace) -> int:
    """List presets with their flux and kinetics."""
    for preset, (flux, kinetics) in PRESET_DESCRIPTIONS.items():
        print(f"{preset.value}")
        print(f"  flux:     {flux}")
        print(f"  kinetics: {kinetics}")
    return EXIT_OK


# ==================== Parser ====================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lvadvect",
        description="Boundedness lab for competition systems with nonlinear diffusion and taxis",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging")
    sub = parser.add_subparsers(dest="command", required=True)

    classify_p = sub.add_parser("classify", help="Evaluate the boundedness criteria")
    classify_p.add_argument("--config", type=Path, help="Scenario file to classify")
    classify_p.add_argument("--m1", type=float, default=0.0, help="Diffusion growth exponent")
    classify_p.add_argument("--m2", type=float, default=1.0, help="Sensitivity growth exponent")
    classify_p.add_argument("--alpha", type=float, default=1.0, help="Self-limitation exponent")
    classify_p.add_argument("--chi", type=float, default=1.0, help="Taxis strength")
    classify_p.add_argument("--N", type=int, default=None, help="Space dimension")
    classify_p.add_argument(
        "--v-dynamics", choices=[v.value for v in VDynamics], default=VDynamics.PARABOLIC.value
    )
    classify_p.add_argument(
        "--taxis", choices=[t.value for t in TaxisSign], default=TaxisSign.REPULSION.value
    )
    classify_p.add_argument(
        "--assume-b1-large", action="store_true", help="Accept the relaxed equality cases"
    )
    classify_p.add_argument("--json", action="store_true", help="Print JSON instead of text")

    run_p = sub.add_parser("run", help="Integrate one scenario")
    run_p.add_argument("config", type=Path, help="Scenario file")
    run_p.add_argument("--out", type=Path, help="Output directory")

    sweep_p = sub.add_parser("sweep", help="Run a parameter sweep")
    sweep_p.add_argument("config", type=Path, help="Scenario file with a sweep section")
    sweep_p.add_argument("--workers", type=int, default=1, help="Worker processes")
    sweep_p.add_argument("--out", type=Path, help="Output directory")

    for command in (classify_p, run_p, sweep_p):
        command.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="Override a config value, e.g. control.t_end=50",
        )

    sub.add_parser("presets", help="List the named systems")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``lvadvect`` command; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_INPUT

    try:
        config = LabConfig.from_env()
    except ConfigurationError as e:
        return _error(str(e))

    level = config.level
    if args.verbose:
        level = logging.DEBUG if args.verbose > 1 else logging.INFO
    configure_logging(level)

    try:
        match args.command:
            case "classify":
                return cmd_classify(args)
            case "run":
                return cmd_run(args, config)
            case "sweep":
                return cmd_sweep(args, config)
            case "presets":
                return cmd_presets(args)
    except ValidationError as e:
        return _error(describe_validation_error(e))
    except (LVAdvectError, OSError) as e:
        return _error(str(e))

    return _error(f"unknown command: {args.command}")
