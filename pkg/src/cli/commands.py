"""
Command-line front end: analyze | sweep | verify | plot-data.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, TextIO

from pydantic import ValidationError

from ..config import get_settings
from ..errors import EXIT_CONFIG, ConfigError, TriwellError
from ..models.report_models import ErrorReport, OutputFormat, RunConfig
from ..services.analysis_service import AnalysisService
from ..services.output_service import OutputService
from ..services.verification_service import VerificationService
from .config_loader import resolve_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
DEFAULT_PLOT_DIR = "plot-data"


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triwell",
        description="Instanton analysis of the triple-well potential V(x) = αx²(x²-β²)²",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, help="Energy scale α > 0")
    common.add_argument("--beta", type=float, help="Outer vacuum position β > 0")
    common.add_argument("--alpha-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    common.add_argument("--beta-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    common.add_argument("--T", dest="T", type=float, help="Half-interval; default 12/(β²√(2α))")
    common.add_argument("--x-max", dest="x_max", type=float, help="Oracle grid half-width")
    common.add_argument("--n-points", dest="n_points", type=int, help="Oracle grid points (odd)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat])
    common.add_argument("--out", help="Output path (directory for plot-data)")
    common.add_argument("--workers", type=_positive_int, help="Concurrent sweep points")

    subparsers.add_parser("analyze", parents=[common], help="Full report at one parameter point")
    subparsers.add_parser("sweep", parents=[common], help="One row per swept parameter value")
    verify = subparsers.add_parser("verify", parents=[common], help="Run the invariant suite")
    verify.add_argument("--quick", action="store_true", help="Closed-form identities only")
    verify.add_argument("--inject-kappa-scale", dest="inject_kappa_scale", type=float, help=argparse.SUPPRESS)
    subparsers.add_parser("plot-data", parents=[common], help="Columns for the potential, kink and zero mode")
    return parser


def _normalise_ranges(args):
    # argparse reads COUNT as a float along with START and STOP
    for name in ("alpha_range", "beta_range"):
        value = getattr(args, name, None)
        if value is not None:
            start, stop, count = value
            if count != int(count):
                raise ConfigError(f"{name} COUNT must be an integer", field=name)
            setattr(args, name, (start, stop, int(count)))


def _error_report(error: Exception) -> ErrorReport:
    if isinstance(error, TriwellError):
        return ErrorReport(
            exit_code=error.exit_code,
            error=type(error).__name__,
            message=error.message,
            field=error.field,
            details={k: v for k, v in error.details.items() if isinstance(v, (int, float, str, bool))},
        )
    if isinstance(error, ValidationError):
        first = error.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or None
        message = first["msg"].removeprefix("Value error, ")
        return ErrorReport(exit_code=EXIT_CONFIG, error="InvalidParameters", message=message, field=field)
    return ErrorReport(exit_code=EXIT_FAILURE, error=type(error).__name__, message=str(error))


def _emit_error(report: ErrorReport, stream: TextIO):
    stream.write(json.dumps(report.model_dump(mode="json")) + "\n")
    stream.flush()


def run_command(command: str, config: RunConfig, output: OutputService) -> int:
    analysis = AnalysisService()

    if command == "analyze":
        if config.is_sweep:
            raise ConfigError("analyze needs a single parameter point; use sweep", field="beta_range")
        output.write_document(analysis.analyze(config), config.format, config.out)
        return EXIT_OK

    if command == "sweep":
        if not config.is_sweep:
            raise ConfigError("sweep needs --alpha-range or --beta-range", field="beta_range")
        fmt = config.format if "format" in config.model_fields_set else OutputFormat.CSV
        output.write_sweep(analysis.sweep(config), fmt, config.out)
        return EXIT_OK

    if command == "verify":
        if config.is_sweep:
            raise ConfigError("verify runs at a single parameter point", field="beta_range")
        service = VerificationService(config.point_params(), kappa_scale=config.kappa_scale)
        summary = service.run(quick=config.quick)
        output.write_document(summary, config.format, config.out)
        return EXIT_OK if summary.passed else EXIT_FAILURE

    if command == "plot-data":
        fmt = config.format if "format" in config.model_fields_set else OutputFormat.CSV
        output.write_plot_data(analysis.plot_data(config), config.out or DEFAULT_PLOT_DIR, fmt)
        return EXIT_OK

    raise ValueError(f"Unknown command: {command}")


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Parse, run and map failures to exit codes: 2 config, 3 numerical, 4 regime, 1 otherwise."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    args = build_parser().parse_args(argv)

    try:
        try:
            get_settings()
        except ValueError as e:
            raise ConfigError(str(e), field="environment") from e
        _normalise_ranges(args)
        config = resolve_config(args, args.command)
        logger.debug(f"Resolved configuration: {config.model_dump(exclude_none=True)}")
        return run_command(args.command, config, OutputService(stdout))
    except (TriwellError, ValidationError) as e:
        report = _error_report(e)
        logger.error(f"{args.command} failed: {report.error}: {report.message}")
        _emit_error(report, stderr)
        return report.exit_code
    except Exception as e:
        logger.exception(f"{args.command} failed unexpectedly")
        _emit_error(_error_report(e), stderr)
        return EXIT_FAILURE
