"""
Command implementations behind the fermatseq command line
Each command returns data; printing is left to src.cli.app
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd
from sympy import primerange

from src.analysis.linear_complexity import berlekamp_massey, dft, lc_blahut, lc_gcd, write_spectrum
from src.analysis.trace_representation import (
    TraceRepresentation,
    build_trace_representation,
    defining_pair_for,
    verify_trace_representation,
    write_trace_report,
)
from src.cli.report import NOT_APPLICABLE, RunReport, expected_linear_complexity
from src.number_theory.fermat import FermatContext, build_context, is_wieferich, order_of_two, require_odd_prime
from src.sequences.generators import BinarySequence, SequenceKind, generate
from src.sequences.sequence_io import write_sequence
from src.storage.parameter_cache import get_parameter_cache
from src.utils.config import get_settings
from src.utils.errors import CapacityError, FermatSeqError, InvariantViolation, ParameterError
from src.verification.theorem_checks import TheoremChecker

logger = logging.getLogger(__name__)

LC_METHODS = ("bm", "gcd", "blahut")
SWEEP_COLUMNS = ["p", "kind", "L", "expected", "match", "trace_verified", "seconds"]


@contextmanager
def _timed(timings: Dict[str, float], stage: str):
    start = time.perf_counter()
    yield
    timings[stage] = time.perf_counter() - start


def _context(p: int) -> FermatContext:
    p = require_odd_prime(p)
    cap = get_settings().max_prime
    if p > cap:
        raise CapacityError(f"p={p} exceeds FERMATSEQ_MAX_PRIME={cap} for full-period work", cap=cap)
    return build_context(p)


def _kind(kind: Union[str, SequenceKind]) -> SequenceKind:
    return kind if isinstance(kind, SequenceKind) else SequenceKind.parse(kind)


def parse_methods(methods: Union[str, Iterable[str]]) -> List[str]:
    names = methods.split(",") if isinstance(methods, str) else list(methods)
    names = [m.strip().lower() for m in names if m.strip()]
    unknown = [m for m in names if m not in LC_METHODS]
    if unknown or not names:
        raise ParameterError(f"methods must be drawn from {','.join(LC_METHODS)}, got {methods!r}")
    return list(dict.fromkeys(names))


def _base_report(ctx: FermatContext, seq: BinarySequence) -> RunReport:
    return RunReport(
        p=ctx.p, g=ctx.g, delta=ctx.delta, kind=seq.label, lam=order_of_two(ctx.p),
        wieferich=ctx.wieferich, theorem_expected=expected_linear_complexity(ctx.p, seq.kind),
    )


def cmd_gen(p: int, kind: Union[str, SequenceKind], l: Optional[int] = None,
            out: Optional[Union[str, Path]] = None) -> BinarySequence:
    """Generate one period and write it when a path is given"""
    seq = generate(_context(p), _kind(kind), l)
    if out is not None:
        write_sequence(seq, out)
    return seq


def cmd_lc(p: int, kind: Union[str, SequenceKind], methods: Union[str, Iterable[str]] = "bm,gcd",
           l: Optional[int] = None) -> RunReport:
    """Linear complexity by the selected methods"""
    methods = parse_methods(methods)
    ctx = _context(p)
    seq = generate(ctx, _kind(kind), l)
    report = _base_report(ctx, seq)
    if "bm" in methods:
        with _timed(report.timings, "bm"):
            report.L_bm = berlekamp_massey(seq).linear_complexity
    if "gcd" in methods:
        with _timed(report.timings, "gcd"):
            report.L_gcd = lc_gcd(seq)
    if "blahut" in methods:
        with _timed(report.timings, "blahut"):
            fld, beta = get_parameter_cache().get_or_create(ctx.p, get_settings().max_field_degree)
            report.L_blahut = lc_blahut(dft(seq, fld, beta))
    logger.info(f"lc p={ctx.p} {seq.label}: {report.measured} (expected {report.theorem_expected})")
    return report


def cmd_verify(p: int, kind: Union[str, SequenceKind], l: Optional[int] = None,
               out: Optional[Union[str, Path]] = None,
               spectrum_out: Optional[Union[str, Path]] = None) -> Tuple[RunReport, TraceRepresentation]:
    """Three-way linear complexity, defining pair and full-period trace verification"""
    p = require_odd_prime(p)
    settings = get_settings()
    if is_wieferich(p):
        raise CapacityError(
            f"p={p} is a Wieferich prime; full-period trace verification is unsupported at this scale "
            f"(field degree cap {settings.max_field_degree}, prime cap {settings.max_prime})",
            cap=settings.max_prime,
        )
    ctx = _context(p)
    seq = generate(ctx, _kind(kind), l)
    report = _base_report(ctx, seq)

    with _timed(report.timings, "field"):
        fld, beta = get_parameter_cache().get_or_create(ctx.p, settings.max_field_degree)
    with _timed(report.timings, "bm"):
        report.L_bm = berlekamp_massey(seq).linear_complexity
    with _timed(report.timings, "gcd"):
        report.L_gcd = lc_gcd(seq)
    with _timed(report.timings, "blahut"):
        spectrum = dft(seq, fld, beta)
        report.L_blahut = lc_blahut(spectrum)
    with _timed(report.timings, "defining_pair"):
        pair = defining_pair_for(ctx, fld, beta, seq.kind, seq.coset_index)
        if pair.coeffs != spectrum.rho:
            mismatch = next(i for i, (a, b) in enumerate(zip(pair.coeffs, spectrum.rho)) if a != b)
            raise InvariantViolation(f"defining pair of {seq.label} differs from its spectrum", index=mismatch)
    with _timed(report.timings, "trace"):
        rep = build_trace_representation(ctx, fld, beta, seq.kind, seq.coset_index)
        report.trace_verified = verify_trace_representation(rep, seq)

    if out is not None:
        write_trace_report(rep, report.trace_verified, out)
    if spectrum_out is not None:
        write_spectrum(spectrum, spectrum_out)
    logger.info(f"verify p={ctx.p} {seq.label}: L={report.L}, trace_verified={report.trace_verified}")
    return report, rep


def _expand_kinds(kinds: Union[str, Sequence[str]], p: int) -> List[Tuple[SequenceKind, Optional[int]]]:
    names = kinds.split(",") if isinstance(kinds, str) else list(kinds)
    cases = []
    for name in names:
        if not name.strip():
            continue
        kind = _kind(name)
        if kind is SequenceKind.CHARACTERISTIC:
            cases += [(kind, l) for l in range(p)]
        else:
            cases.append((kind, None))
    if not cases:
        raise ParameterError("at least one kind is required")
    return cases


def _sweep_row(case: Tuple[int, SequenceKind, Optional[int]]) -> Dict[str, object]:
    p, kind, l = case
    start = time.perf_counter()
    label = f"{kind.value}-{l}" if l is not None else kind.value
    expected = expected_linear_complexity(p, kind)
    row = {"p": p, "kind": label, "L": NOT_APPLICABLE,
           "expected": NOT_APPLICABLE if expected is None else expected,
           "match": False, "trace_verified": False}
    try:
        report, _ = cmd_verify(p, kind, l)
        row.update(L=report.L, match=report.matches, trace_verified=bool(report.trace_verified))
    except FermatSeqError as e:
        logger.error(f"sweep row p={p} {label} failed: {e}")
    row["seconds"] = round(time.perf_counter() - start, 3)
    return row


def cmd_sweep(p_max: int, kinds: Union[str, Sequence[str]] = "threshold,legendre-fermat",
              workers: Optional[int] = None, out: Optional[Union[str, Path]] = None) -> pd.DataFrame:
    """Verify every odd prime up to p_max; rows ordered by p then kind"""
    settings = get_settings()
    if p_max < 3:
        raise ParameterError(f"p_max must be at least 3, got {p_max}")
    if p_max > settings.max_prime:
        raise CapacityError(f"p_max={p_max} exceeds FERMATSEQ_MAX_PRIME={settings.max_prime}",
                            cap=settings.max_prime)
    cases = [(p, kind, l) for p in primerange(3, p_max + 1) for kind, l in _expand_kinds(kinds, p)]
    workers = workers or settings.workers
    logger.info(f"Sweeping {len(cases)} rows up to p={p_max} with {workers} worker(s)")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, cases))
    else:
        rows = [_sweep_row(case) for case in cases]

    df = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    df["match"] = df["match"].map(lambda v: "true" if v else "false")
    df["trace_verified"] = df["trace_verified"].map(lambda v: "true" if v else "false")
    if out is not None:
        df.to_csv(out, index=False)
        logger.info(f"Wrote sweep table ({len(df)} rows) to {out}")
    return df


def sweep_ok(df: pd.DataFrame) -> bool:
    return bool((df["match"] == "true").all())


def cmd_lemmas(p_max: int) -> pd.DataFrame:
    """Lemma suite for every odd prime up to p_max, one row per (p, check)"""
    settings = get_settings()
    if p_max < 3:
        raise ParameterError(f"p_max must be at least 3, got {p_max}")
    if p_max > settings.max_prime:
        raise CapacityError(f"p_max={p_max} exceeds FERMATSEQ_MAX_PRIME={settings.max_prime}",
                            cap=settings.max_prime)
    rows = []
    for p in primerange(3, p_max + 1):
        summary = TheoremChecker(build_context(p)).run_all_checks()
        for name, result in summary['individual_results'].items():
            rows.append({
                "p": p,
                "check": name,
                "passed": result['passed'],
                "checked": result['checked'],
                "failures": result['failure_count'],
            })
    return pd.DataFrame(rows, columns=["p", "check", "passed", "checked", "failures"])


def cmd_cache(action: str) -> Union[List[Dict[str, str]], int]:
    """'show' lists cached primes, 'clear' removes every entry"""
    cache = get_parameter_cache()
    if action == "show":
        return cache.list_cached()
    if action == "clear":
        return cache.clear()
    raise ParameterError(f"cache action must be 'show' or 'clear', got {action!r}")
