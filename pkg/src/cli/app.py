"""
fermatseq command line

    python -m src.cli.app gen --p 7 --kind threshold
    python -m src.cli.app lc --p 11 --kind threshold --methods bm,gcd
    python -m src.cli.app verify --p 7 --kind threshold --out trace.txt
    python -m src.cli.app sweep --p-max 13 --kinds threshold,legendre-fermat
    python -m src.cli.app lemmas --p-max 13
    python -m src.cli.app cache show
"""
import argparse
import logging
import sys
from typing import List, Optional

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from src.cli import commands
from src.cli.report import NOT_APPLICABLE, RunReport
from src.sequences.generators import SequenceKind
from src.sequences.sequence_io import format_sequence
from src.utils.config import get_settings
from src.utils.errors import EXIT_MISMATCH, EXIT_OK, FermatSeqError
from src.utils.log import configure_logging

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fermatseq",
                                     description="Binary sequences from Fermat quotients: generation, "
                                                 "linear complexity and trace representations")
    parser.add_argument("--log-level", default=None, help="Logging level (default: FERMATSEQ_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in SequenceKind]

    gen = sub.add_parser("gen", help="Write one period of a sequence")
    gen.add_argument("--p", type=int, required=True)
    gen.add_argument("--kind", choices=kinds, default=SequenceKind.THRESHOLD.value)
    gen.add_argument("--l", type=int, default=None, help="Coset index for the characteristic kind")
    gen.add_argument("--out", default=None, help="Output path (stdout when omitted)")

    lc = sub.add_parser("lc", help="Linear complexity by bm, gcd and/or blahut")
    lc.add_argument("--p", type=int, required=True)
    lc.add_argument("--kind", choices=kinds, default=SequenceKind.THRESHOLD.value)
    lc.add_argument("--l", type=int, default=None)
    lc.add_argument("--methods", default="bm,gcd")

    verify = sub.add_parser("verify", help="Verify linear complexity and the trace representation")
    verify.add_argument("--p", type=int, required=True)
    verify.add_argument("--kind", choices=kinds, default=SequenceKind.THRESHOLD.value)
    verify.add_argument("--l", type=int, default=None)
    verify.add_argument("--out", default=None, help="Trace report path")
    verify.add_argument("--spectrum-out", default=None, help="Spectrum dump path")

    sweep = sub.add_parser("sweep", help="Verify every odd prime up to --p-max")
    sweep.add_argument("--p-max", type=int, required=True)
    sweep.add_argument("--kinds", default="threshold,legendre-fermat")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument("--out", default=None, help="CSV path (stdout when omitted)")

    lemmas = sub.add_parser("lemmas", help="Run the lemma suite for every odd prime up to --p-max")
    lemmas.add_argument("--p-max", type=int, required=True)

    cache = sub.add_parser("cache", help="Inspect or clear the field-parameter cache")
    cache.add_argument("action", choices=["show", "clear"])
    return parser


def _print_report(report: RunReport, title: str) -> None:
    sys.stdout.write(report.to_key_values())
    table = Table(title=title)
    table.add_column("method")
    table.add_column("L", justify="right")
    for method, value in (("bm", report.L_bm), ("gcd", report.L_gcd), ("blahut", report.L_blahut)):
        if value is not None:
            table.add_row(method, str(value))
    expected = NOT_APPLICABLE if report.theorem_expected is None else str(report.theorem_expected)
    table.add_row("expected", expected)
    console.print(table)
    verdict = "[green]match[/green]" if report.matches else "[red]MISMATCH[/red]"
    console.print(f"p={report.p} {report.kind}: {verdict}")


def _run(args: argparse.Namespace) -> int:
    if args.command == "gen":
        seq = commands.cmd_gen(args.p, args.kind, args.l, args.out)
        if args.out is None:
            sys.stdout.write(format_sequence(seq))
        return EXIT_OK

    if args.command == "lc":
        report = commands.cmd_lc(args.p, args.kind, args.methods, args.l)
        _print_report(report, f"Linear complexity p={report.p} {report.kind}")
        report.require_match()
        return EXIT_OK

    if args.command == "verify":
        report, _ = commands.cmd_verify(args.p, args.kind, args.l, args.out, args.spectrum_out)
        _print_report(report, f"Verification p={report.p} {report.kind}")
        report.require_match()
        return EXIT_OK

    if args.command == "sweep":
        df = commands.cmd_sweep(args.p_max, args.kinds, args.workers, args.out)
        if args.out is None:
            sys.stdout.write(df.to_csv(index=False))
        ok = commands.sweep_ok(df)
        console.print(f"{len(df)} rows, {'all match' if ok else 'mismatches present'}")
        return EXIT_OK if ok else EXIT_MISMATCH

    if args.command == "lemmas":
        df = commands.cmd_lemmas(args.p_max)
        table = Table(title=f"Lemma suite p <= {args.p_max}")
        for column in df.columns:
            table.add_column(column)
        for row in df.itertuples(index=False):
            table.add_row(*[str(v) for v in row])
        console.print(table)
        return EXIT_OK if bool(df["passed"].all()) else EXIT_MISMATCH

    result = commands.cmd_cache(args.action)
    if args.action == "show":
        table = Table(title="Cached field parameters")
        for column in ("p", "m", "path"):
            table.add_column(column)
        for row in result:
            table.add_row(row["p"], row["m"], row["path"])
        console.print(table)
    else:
        console.print(f"Removed {result} cache entries")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        configure_logging(args.log_level or get_settings().log_level)
        return _run(args)
    except FermatSeqError as e:
        logger.error(f"{args.command} failed: {e}")
        err_console.print(f"[red]error:[/red] {escape(str(e))}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
