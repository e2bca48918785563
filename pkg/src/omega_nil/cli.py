"""Command-line entry point for ``omega-nil``.

Exit status is 0 on success, 1 when an input violates a precondition or an
exact check fails, and 2 on usage errors (bad arguments, unreadable or
malformed input files, unknown group specs).
"""

import argparse
import logging
import sys
import time
from importlib import resources
from pathlib import Path

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from omega_nil.errors import (
    AlgebraError,
    ConfigError,
    GroupSpecError,
    ParseError,
    PreconditionError,
    RayLimitExceeded,
)
from omega_nil.finquot import parse_group_spec
from omega_nil.report import (
    AnalysisReport,
    build_analyze_report,
    build_freeness_report,
    build_invariants_report,
    build_nilquotient_report,
    build_quotient_report,
    build_returns_report,
)
from omega_nil.words import (
    FreeGroupEndo,
    Substitution,
    parse_endomorphism,
    parse_substitution,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from e
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omega-nil",
        description="Pronilpotent quotients and freeness tests for primitive substitutions.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="input file, or the name of a bundled sample")
    common.add_argument("--json", type=Path, metavar="PATH", help="write a JSON report")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument(
        "--free-group",
        action="store_true",
        help="parse the input as a free-group endomorphism",
    )

    connection = argparse.ArgumentParser(add_help=False)
    connection.add_argument("--connection", metavar="U,V", help="connection to use")
    connection.add_argument(
        "--max-len", type=_positive_int, metavar="L", help="longest connection word searched"
    )
    connection.add_argument(
        "--periodicity-bound", type=_positive_int, metavar="B", help="complexity scan bound"
    )

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common, connection], help="full report")
    sub.add_parser("returns", parents=[common, connection], help="return substitution")
    sub.add_parser(
        "nilquotient", parents=[common, connection], help="maximal pronilpotent quotient"
    )
    sub.add_parser("freeness", parents=[common, connection], help="freeness tests")
    sub.add_parser(
        "invariants", parents=[common, connection], help="flow invariants and m_phi"
    )
    quotient = sub.add_parser("quotient", parents=[common], help="finite quotient search")
    quotient.add_argument("--group", required=True, help="e.g. sl2:2 or 'perm:(0 1)'")
    quotient.add_argument("--budget", type=_positive_int, help="search step budget")
    quotient.add_argument(
        "--exhaustive", action="store_true", help="search all of H^A regardless of size"
    )
    return parser


def _configure_logging(verbose: bool) -> None:
    package_logger = logging.getLogger("omega_nil")
    package_logger.handlers.clear()
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    package_logger.addHandler(handler)
    package_logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def read_input(name: str) -> str:
    """Read ``name`` from disk, falling back to the bundled samples."""
    path = Path(name)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    sample = resources.files("omega_nil.samples").joinpath(name)
    if sample.is_file():
        return sample.read_text(encoding="utf-8")
    raise FileNotFoundError(f"No such file or bundled sample: '{name}'")


def _looks_like_endomorphism(text: str) -> bool:
    return any("'" in line.split("#", 1)[0] for line in text.splitlines())


def load_morphism(text: str, free_group: bool) -> Substitution | FreeGroupEndo:
    if free_group or _looks_like_endomorphism(text):
        return parse_endomorphism(text)
    return parse_substitution(text)


def _require_substitution(m: Substitution | FreeGroupEndo, command: str) -> Substitution:
    if not isinstance(m, Substitution):
        raise ParseError(f"'{command}' needs a substitution, not a free-group endomorphism")
    return m


def _dispatch(args: argparse.Namespace) -> AnalysisReport:
    morphism = load_morphism(read_input(args.file), args.free_group)
    if args.command == "quotient":
        endo = (
            morphism
            if isinstance(morphism, FreeGroupEndo)
            else FreeGroupEndo.from_substitution(morphism)
        )
        group = parse_group_spec(args.group)
        return build_quotient_report(endo, group, args.budget, True if args.exhaustive else None)
    if args.command == "nilquotient":
        return build_nilquotient_report(morphism, args.connection, args.periodicity_bound)

    s = _require_substitution(morphism, args.command)
    if args.command == "analyze":
        return build_analyze_report(s, args.connection, args.max_len, args.periodicity_bound)
    if args.command == "returns":
        return build_returns_report(s, args.connection, args.max_len)
    if args.command == "freeness":
        return build_freeness_report(s, args.connection, args.periodicity_bound)
    return build_invariants_report(s, args.connection, args.max_len, args.periodicity_bound)


def run_command(argv: list[str], console: Console | None = None) -> int:
    """Run one command and return its exit status."""
    console = console or Console()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    _configure_logging(args.verbose)
    start = time.perf_counter()
    try:
        report = _dispatch(args)
    except (ParseError, GroupSpecError, ConfigError, OSError) as e:
        console.print(f"[red]Error:[/red] {escape(str(e))}")
        return EXIT_USAGE
    except (PreconditionError, AlgebraError, RayLimitExceeded) as e:
        console.print(f"[red]Error:[/red] {escape(str(e))}")
        return EXIT_FAILURE

    report.fields["timing_seconds"] = round(time.perf_counter() - start, 3)
    logger.debug("%s finished in %.3fs", args.command, report.fields["timing_seconds"])
    report.render(console)
    if args.json:
        try:
            report.write_json(args.json)
        except OSError as e:
            console.print(f"[red]Error:[/red] cannot write {escape(str(args.json))}: {e}")
            return EXIT_USAGE
        console.print(f"[cyan]Wrote {escape(str(args.json))}[/cyan]")
    return EXIT_OK


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
