"""
Sequence file format

    p=<p> kind=<kind> g=<g> delta=<delta>
    <p^2 characters of 0/1>

The characteristic kind is written as characteristic-<l> with 0 <= l < p.
Parsing regenerates the period and rejects any header or bit that disagrees.
"""
import logging
import os
from pathlib import Path
from typing import Union

import numpy as np

from src.number_theory.fermat import build_context
from src.sequences.generators import BinarySequence, SequenceKind, generate
from src.utils.errors import FermatSeqError, ParameterError, SequenceFileError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_sequence(seq: BinarySequence) -> str:
    header = f"p={seq.p} kind={seq.label} g={seq.g} delta={seq.delta}"
    return f"{header}\n{seq.to_string()}\n"


def write_sequence(seq: BinarySequence, path: PathLike) -> None:
    """Write one period with its provenance header"""
    try:
        Path(path).write_text(format_sequence(seq), encoding="ascii")
        logger.info(f"Wrote {seq.label} sequence (period {seq.period}) to {path}")
    except OSError as e:
        logger.error(f"Error writing sequence file {path}: {e}")
        raise SequenceFileError(str(e), path=str(path))


def _parse_kind(label: str, p: int):
    prefix = SequenceKind.CHARACTERISTIC.value + "-"
    if not label.startswith(prefix):
        return SequenceKind.parse(label), None
    coset_index = int(label[len(prefix):])
    if not 0 <= coset_index < p:
        raise ParameterError(f"coset index {coset_index} outside [0, {p})")
    return SequenceKind.CHARACTERISTIC, coset_index


def parse_sequence(text: str, source: str = "<string>") -> BinarySequence:
    """Parse a sequence file and check it against a freshly generated period"""
    lines = text.splitlines()
    if len(lines) < 2:
        raise SequenceFileError("expected a header line and a bit line", path=source)
    try:
        fields = dict(item.split("=", 1) for item in lines[0].split())
        p = int(fields["p"])
        g = int(fields["g"])
        delta = int(fields["delta"])
        kind, coset_index = _parse_kind(fields["kind"], p)
    except (KeyError, ValueError, FermatSeqError) as e:
        raise SequenceFileError(f"malformed header {lines[0]!r}: {e}", path=source)

    body = lines[1].strip()
    if set(body) - {"0", "1"}:
        raise SequenceFileError("bit line may only contain 0 and 1", path=source)
    if len(body) != p * p:
        raise SequenceFileError(f"expected {p * p} bits, found {len(body)}", path=source)
    bits = (np.frombuffer(body.encode("ascii"), dtype=np.uint8) - ord("0")).astype(np.uint8)

    try:
        expected = generate(build_context(p), kind, coset_index)
    except FermatSeqError as e:
        raise SequenceFileError(f"cannot regenerate p={p} {fields['kind']}: {e}", path=source)
    if (g, delta) != (expected.g, expected.delta):
        raise SequenceFileError(f"header g={g} delta={delta} disagrees with g={expected.g} "
                                f"delta={expected.delta} for p={p}", path=source)
    mismatch = np.flatnonzero(bits != expected.bits)
    if mismatch.size:
        raise SequenceFileError(f"bit {int(mismatch[0])} disagrees with {expected.label}", path=source)
    return BinarySequence(p=p, kind=kind, bits=bits, g=g, delta=delta, coset_index=coset_index)


def read_sequence(path: PathLike) -> BinarySequence:
    """Load a sequence file written by write_sequence"""
    if not os.path.exists(path):
        logger.warning(f"Sequence file not found: {path}")
        raise SequenceFileError("file not found", path=str(path))
    try:
        text = Path(path).read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as e:
        logger.error(f"Error loading sequence from {path}: {e}")
        raise SequenceFileError(str(e), path=str(path))
    seq = parse_sequence(text, source=str(path))
    logger.info(f"Loaded {seq.label} sequence for p={seq.p} from {path}")
    return seq
