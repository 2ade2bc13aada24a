"""
Command-line front end.

    python app.py compute  RUN_FILE [--csv] [--magnitude] [--dump-config]
    python app.py sweep    RUN_FILE [--csv PATH] [--magnitude] [--dump-config]
    python app.py validate [--only REGEX] [--csv PATH]
    python app.py material RUN_FILE [--k K ...] [--gap]

Every subcommand takes --threads N and --log-level LEVEL.
Exit codes: 0 success, 1 failed validation checks, 2 configuration error,
3 numerical or physical error (message printed verbatim).
"""

import argparse
import logging
import math
import sys
from typing import List, Optional, Sequence

from rich.console import Console
from rich.table import Table

from core_logic.errors import CasimirError, ConfigError
from core_logic.parallel import DEFAULT_WORKERS
from core_logic.permittivity import Material, eps_imag_axis
from core_logic.run_pipeline import compute_pressure, run_sweep
from core_logic.validation import run_suite
from helpers.config_parser import dump_config, load_config, load_material
from helpers.csv_utils import sweep_frame, write_frame_csv, write_sweep_csv
from helpers.logging_utils import DEFAULT_LOG_LEVEL, LOG_LEVELS, setup_logging


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

DEFAULT_MATERIAL_K = (0.0, 0.01, 0.1, 1.0)
# eps(k) - 1 must be below this at K_INFINITY for the eps(inf) = 1 check
K_INFINITY = 1.0e6
EPS_INFINITY_TOL = 1.0e-6


# ----- Subcommands -----


def cmd_compute(args: argparse.Namespace, console: Console) -> int:
    run = load_config(args.config)
    if args.dump_config:
        console.out(dump_config(run), end="")
        return EXIT_OK

    result = compute_pressure(run, run.to_settings(workers=args.threads))
    pressure = result.magnitude if args.magnitude else result.pressure
    if args.csv:
        frame = sweep_frame([run.geometry.d], [result], magnitude=args.magnitude)
        write_sweep_csv(frame, sys.stdout)
        return EXIT_OK

    label = "|P|" if args.magnitude else "P"
    console.out(
        f"{label} = {pressure:.6e} N/m^2  est_error = {result.est_error:.3e}  "
        f"tail_fraction = {result.tail_fraction:.3e}  ({result.method})"
    )
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, console: Console) -> int:
    run = load_config(args.config)
    if args.dump_config:
        console.out(dump_config(run), end="")
        return EXIT_OK
    if run.sweep is None:
        raise ConfigError("the sweep command needs a [sweep] section")

    outcome = run_sweep(run, workers=args.threads)
    frame = sweep_frame(outcome.values, outcome.results, magnitude=args.magnitude)
    aborted = None
    if not outcome.complete:
        aborted = f"at {outcome.variable} = {outcome.failed_value!r}: {outcome.error}"

    destination = args.csv or run.output.path
    write_sweep_csv(frame, destination or sys.stdout, aborted=aborted)
    if destination:
        logger.info("wrote %d rows to %s", len(frame), destination)

    if outcome.error is not None:
        raise outcome.error
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, console: Console) -> int:
    report = run_suite(only=args.only, workers=args.threads)

    table = Table(title="Validation")
    for column in ("check", "status", "measured", "tolerance", "seconds", "detail"):
        table.add_column(column)
    for r in report.results:
        table.add_row(
            r.name,
            "PASS" if r.passed else "FAIL",
            f"{r.measured:.3e}",
            f"{r.tolerance:.1e}",
            f"{r.seconds:.1f}",
            r.detail,
        )
    console.print(table)
    console.out(f"{len(report.results) - len(report.failures)}/{len(report.results)} checks passed")

    if args.csv:
        write_frame_csv(report.to_frame(), args.csv)
    return EXIT_OK if report.passed else EXIT_CHECKS_FAILED


def _eps_cell(material: Material, k: float) -> str:
    try:
        return f"{float(eps_imag_axis(material, k)):.10g}"
    except CasimirError as exc:
        return f"error: {exc}"


def cmd_material(args: argparse.Namespace, console: Console) -> int:
    section = "gap_material" if args.gap else "material"
    material = load_material(args.config, section).to_material()
    ks = args.k if args.k else list(DEFAULT_MATERIAL_K)

    table = Table(title=f"eps(ik) of {material.name} ({material.model.value})")
    table.add_column("k (1/nm)", justify="right")
    table.add_column("eps", justify="right")
    for k in ks:
        table.add_row(f"{k:g}", _eps_cell(material, k))

    if material.has_unbound_drude:
        table.add_row("0+", "pole (unbound free carriers)")
    else:
        table.add_row("0+", _eps_cell(material, 0.0))
    eps_inf = _eps_cell(material, K_INFINITY)
    try:
        ok = math.isclose(float(eps_inf), 1.0, abs_tol=EPS_INFINITY_TOL)
    except ValueError:
        ok = False
    table.add_row(f"{K_INFINITY:g}", f"{eps_inf} ({'eps(inf) = 1 ok' if ok else 'eps(inf) != 1'})")
    console.print(table)
    return EXIT_OK


# ----- Parser -----


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--threads",
        type=int,
        default=DEFAULT_WORKERS,
        help="worker threads (default: CASIMIR_THREADS or the CPU count)",
    )
    common.add_argument(
        "--log-level",
        default=DEFAULT_LOG_LEVEL,
        type=str.upper,
        choices=LOG_LEVELS,
        help="log level (default: CASIMIR_LOG_LEVEL or WARNING)",
    )

    parser = argparse.ArgumentParser(
        prog="casimir",
        description="Casimir pressure between plates described by oscillator permittivities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", parents=[common], help="pressure for one configuration")
    compute.add_argument("config", help="run file")
    compute.add_argument("--csv", action="store_true", help="print a CSV row instead of text")
    compute.add_argument("--magnitude", action="store_true", help="report |P| instead of the signed pressure")
    compute.add_argument("--dump-config", action="store_true", help="print the parsed run file and exit")
    compute.set_defaults(handler=cmd_compute)

    sweep = sub.add_parser("sweep", parents=[common], help="sweep d, t or T and write CSV")
    sweep.add_argument("config", help="run file with a [sweep] section")
    sweep.add_argument("--csv", metavar="PATH", help="CSV destination (default: [output] path or stdout)")
    sweep.add_argument("--magnitude", action="store_true", help="write |P| instead of the signed pressure")
    sweep.add_argument("--dump-config", action="store_true", help="print the parsed run file and exit")
    sweep.set_defaults(handler=cmd_sweep)

    validate = sub.add_parser("validate", parents=[common], help="run the cross-check suite")
    validate.add_argument("--only", metavar="REGEX", help="run only checks whose name matches")
    validate.add_argument("--csv", metavar="PATH", help="also write the report as CSV")
    validate.set_defaults(handler=cmd_validate)

    material = sub.add_parser("material", parents=[common], help="tabulate eps on the imaginary axis")
    material.add_argument("config", help="run file with a [material] section")
    material.add_argument("--k", type=float, action="append", help="wavenumber in 1/nm (repeatable)")
    material.add_argument("--gap", action="store_true", help="inspect [gap_material] instead")
    material.set_defaults(handler=cmd_material)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    if args.threads < 1:
        parser.error("--threads must be >= 1")

    console = Console(highlight=False, soft_wrap=True)
    errors = Console(stderr=True, highlight=False, soft_wrap=True)
    try:
        return args.handler(args, console)
    except ConfigError as exc:
        errors.print(f"config error: {exc}", markup=False)
        return EXIT_CONFIG
    except CasimirError as exc:
        errors.print(f"error: {exc}", markup=False)
        return EXIT_NUMERIC


def run(argv: Optional[List[str]] = None) -> None:
    sys.exit(main(argv))
