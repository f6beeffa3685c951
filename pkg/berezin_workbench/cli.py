"""
Command-line interface for the quantization workbench.

Runs quantizations, convergence sweeps, KMS checks and resolvent validation from
a config file and writes CSV or JSON reports.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .config import RunConfig, load_config
from .errors import DimensionCapError, FactorizationError, PolynomialSyntaxError, WorkbenchError
from .utils.reports import dumps_json, rows_to_csv, write_text
from .utils.tolerances import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, EXIT_RESOURCE_CAP
from .workbench_service import WorkbenchService

logger = logging.getLogger(__name__)

DEFAULT_FORMATS = {"quantize": "json", "sweep": "csv", "kms": "json", "resolvent": "csv"}


def _emit(content: str, out: Optional[str]) -> None:
    """Write a report to a file, or to stdout when no path is given."""
    if out:
        path = write_text(out, content)
        print(f"Report saved to: {path}")
    else:
        sys.stdout.write(content)


def _output_settings(config: RunConfig, out: Optional[str], fmt: Optional[str]) -> Tuple[Optional[str], str]:
    return out or config.get("out"), fmt or config.get("format") or DEFAULT_FORMATS[config.command]


def cmd_quantize(config: RunConfig, out: Optional[str] = None, fmt: Optional[str] = None,
                 check: bool = False, service: Optional[WorkbenchService] = None) -> int:
    """
    Quantize a polynomial and write the matrix with its spectral norm.

    Returns:
        Exit code (0 on success)
    """
    service = service or WorkbenchService()
    out, fmt = _output_settings(config, out, fmt)
    payload = service.run_quantize(config)
    if fmt == "json":
        content = dumps_json(payload)
    else:
        rows: List[List[Any]] = []
        for i, row in enumerate(payload["matrix"]):
            for j, (re, im) in enumerate(row):
                rows.append([str(i), str(j), re, im])
        content = rows_to_csv(["row", "col", "re", "im"], rows)
    _emit(content, out)
    print(f"Spectral norm: {payload['spectral_norm']!r}", file=sys.stderr if not out else sys.stdout)
    return EXIT_OK


def cmd_sweep(config: RunConfig, out: Optional[str] = None, fmt: Optional[str] = None,
              check: bool = False, service: Optional[WorkbenchService] = None) -> int:
    """
    Run a sweep and write its table; a CSV report gets its fit in a <out>.fit.json sidecar.

    Returns:
        Exit code (0 on success)
    """
    service = service or WorkbenchService()
    out, fmt = _output_settings(config, out, fmt)
    report = service.run_sweep(config)
    if fmt == "json":
        payload: Dict[str, Any] = {"command": "sweep", "config": config.model_dump(), **report.model_dump()}
        _emit(dumps_json(payload), out)
    else:
        _emit(report.to_csv(), out)
        if out and report.fit is not None:
            write_text(f"{out}.fit.json", dumps_json(report.fit_dump()))
    if report.fit is not None:
        print(f"Fitted exponent ({report.fit_column}): {report.fit.exponent!r}", file=sys.stderr if not out else sys.stdout)
    return EXIT_OK


def cmd_kms(config: RunConfig, out: Optional[str] = None, fmt: Optional[str] = None,
            check: bool = False, service: Optional[WorkbenchService] = None) -> int:
    """
    Run a KMS residual check and write the residuals.

    Returns:
        Exit code: 0, or 1 in check mode when the residual exceeds the tolerance
    """
    service = service or WorkbenchService()
    out, fmt = _output_settings(config, out, fmt)
    payload = service.run_kms(config)
    if fmt == "json":
        content = dumps_json(payload)
    else:
        content = rows_to_csv(["mode", "max_residual", "tolerance"],
                              [[config["mode"], payload["residuals"]["max_residual"], payload["tolerance"]]])
    _emit(content, out)
    if check and not payload["passed"]:
        print(f"KMS check failed: residual {payload['residuals']['max_residual']!r} "
              f"exceeds {payload['tolerance']!r}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_resolvent(config: RunConfig, out: Optional[str] = None, fmt: Optional[str] = None,
                  check: bool = False, service: Optional[WorkbenchService] = None) -> int:
    """
    Tabulate the contour-resolvent error against the node count.

    Returns:
        Exit code: 0, or 1 in check mode when the final error exceeds the tolerance
    """
    service = service or WorkbenchService()
    out, fmt = _output_settings(config, out, fmt)
    report, passed = service.run_resolvent(config)
    if fmt == "json":
        payload = {
            "command": "resolvent",
            "config": config.model_dump(),
            "rows": report.model_dump()["rows"],
            "tolerance": config["tolerance"],
            "passed": passed,
        }
        _emit(dumps_json(payload), out)
    else:
        _emit(report.to_csv(), out)
    if check and not passed:
        print(f"Resolvent check failed: final error {report.column('error')[-1]!r} "
              f"exceeds {config['tolerance']!r}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


COMMANDS = {
    "quantize": cmd_quantize,
    "sweep": cmd_sweep,
    "kms": cmd_kms,
    "resolvent": cmd_resolvent,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="berezin-workbench",
        description="Quantize sphere polynomials and check deformation-quantization limits",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s quantize --config quantize.cfg                 # Matrix as JSON on stdout
  %(prog)s sweep --config dgr.cfg --out dgr.csv           # Sweep table plus dgr.csv.fit.json
  %(prog)s kms --config kms.cfg --check                   # Exit 1 if the residual is too large
  %(prog)s resolvent --config res.cfg --format json -o r.json
        """
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    helps = {
        "quantize": "Quantize a polynomial into a matrix",
        "sweep": "Tabulate a defect or limit across spins or site counts",
        "kms": "Check the KMS condition of Gibbs and product states",
        "resolvent": "Validate the contour-integral resolvent composition",
    }
    for name, text in helps.items():
        sub = subparsers.add_parser(name, help=text)
        sub.add_argument("--config", required=True, help="Path to the run config (key = value lines)")
        sub.add_argument("-o", "--out", help="Output file (stdout when omitted)")
        sub.add_argument("--format", choices=["csv", "json"], help="Report format")
        sub.add_argument("--check", action="store_true", help="Exit 1 when the check fails")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and map failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT_ERROR if e.code else EXIT_OK

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s - %(name)s - %(message)s",
    )
    if args.command is None:
        parser.print_help()
        return EXIT_INPUT_ERROR

    try:
        config = load_config(args.command, Path(args.config))
        return COMMANDS[args.command](config, args.out, args.format, args.check)
    except DimensionCapError as e:
        print(f"Resource cap exceeded: {e}", file=sys.stderr)
        return EXIT_RESOURCE_CAP
    except PolynomialSyntaxError as e:
        print(f"Polynomial error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except FactorizationError as e:
        print(f"Check failed: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except WorkbenchError as e:
        print(f"Input error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except RuntimeError as e:
        print(f"Error during {args.command}: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED


def main():
    """Main entry point for the command-line interface."""
    sys.exit(run())


if __name__ == "__main__":
    main()
