"""
Binary sequences of period p^2 derived from Fermat quotients

Each generator evaluates both the analytic definition (via q_p(u)) and the
coset form (via the partition D_0..D_{p-1}, P) and refuses to return if they
disagree.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, FrozenSet, Optional, Tuple

import numpy as np

from src.number_theory.fermat import FermatContext, fermat_quotient, legendre_symbol
from src.utils.errors import InvariantViolation, ParameterError

logger = logging.getLogger(__name__)


class SequenceKind(str, Enum):
    THRESHOLD = "threshold"
    LEGENDRE_FERMAT = "legendre-fermat"
    CHARACTERISTIC = "characteristic"
    BALANCED_THRESHOLD = "balanced-threshold"
    BALANCED_LEGENDRE = "balanced-legendre"

    @property
    def balanced(self) -> bool:
        return self in (SequenceKind.BALANCED_THRESHOLD, SequenceKind.BALANCED_LEGENDRE)

    @classmethod
    def parse(cls, name: str) -> "SequenceKind":
        try:
            return cls(name.strip().lower().replace("_", "-"))
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ParameterError(f"unknown sequence kind {name!r}; expected one of: {valid}")


@dataclass(frozen=True, eq=False)
class BinarySequence:
    """One period of a p^2-periodic binary sequence plus its provenance"""
    p: int
    kind: SequenceKind
    bits: np.ndarray = field(repr=False)
    g: int
    delta: int
    coset_index: Optional[int] = None

    def __post_init__(self):
        if len(self.bits) != self.p * self.p:
            raise InvariantViolation(f"sequence length {len(self.bits)} != p^2 = {self.p * self.p}")
        self.bits.setflags(write=False)

    @property
    def period(self) -> int:
        return len(self.bits)

    @property
    def label(self) -> str:
        if self.kind is SequenceKind.CHARACTERISTIC:
            return f"{self.kind.value}-{self.coset_index}"
        return self.kind.value

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.bits))

    def bit(self, u: int) -> int:
        """s_u for any u >= 0"""
        return int(self.bits[u % self.period])

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)


def coset_union(ctx: FermatContext, kind: SequenceKind, l: Optional[int] = None) -> Tuple[FrozenSet[int], bool]:
    """Coset indices whose union (plus P when balanced) the sequence indicates"""
    kind = SequenceKind(kind)
    p = ctx.p
    if kind in (SequenceKind.THRESHOLD, SequenceKind.BALANCED_THRESHOLD):
        indices = frozenset(range((p + 1) // 2, p))
    elif kind in (SequenceKind.LEGENDRE_FERMAT, SequenceKind.BALANCED_LEGENDRE):
        indices = ctx.non_residues
    else:
        if l is None or not 0 <= l < p:
            raise ParameterError(f"coset index must satisfy 0 <= l < {p}, got {l}")
        indices = frozenset({l})
    return indices, kind.balanced


def _from_cosets(ctx: FermatContext, indices: FrozenSet[int], balanced: bool) -> np.ndarray:
    coset_of = ctx.coset_of
    bits = np.isin(coset_of, sorted(indices)).astype(np.uint8)
    if balanced:
        bits[list(ctx.multiples)] = 1
    return bits


def _from_definition(ctx: FermatContext, rule: Callable[[int], int], balanced: bool) -> np.ndarray:
    p = ctx.p
    bits = np.zeros(ctx.p2, dtype=np.uint8)
    for u in range(ctx.p2):
        if u % p == 0:
            bits[u] = 1 if balanced else 0
        else:
            bits[u] = rule(fermat_quotient(p, u))
    return bits


def _cross_checked(ctx: FermatContext, kind: SequenceKind, rule: Callable[[int], int],
                   l: Optional[int] = None) -> BinarySequence:
    indices, balanced = coset_union(ctx, kind, l)
    by_coset = _from_cosets(ctx, indices, balanced)
    by_definition = _from_definition(ctx, rule, balanced)
    mismatch = np.flatnonzero(by_coset != by_definition)
    if mismatch.size:
        raise InvariantViolation(f"{kind.value}: coset form disagrees with the definition",
                                 index=int(mismatch[0]))
    seq = BinarySequence(p=ctx.p, kind=kind, bits=by_coset, g=ctx.g, delta=ctx.delta, coset_index=l)
    logger.debug(f"Generated {seq.label} for p={ctx.p}: weight {seq.weight}")
    return seq


def _threshold_rule(p: int) -> Callable[[int], int]:
    # 1 iff q_p(u)/p >= 1/2
    return lambda q: 1 if 2 * q >= p else 0


def _legendre_rule(p: int) -> Callable[[int], int]:
    return lambda q: 0 if q == 0 or legendre_symbol(q, p) == 1 else 1


def gen_threshold(ctx: FermatContext) -> BinarySequence:
    """e_u = 1 iff u lies in D_(p+1)/2 u ... u D_(p-1)"""
    return _cross_checked(ctx, SequenceKind.THRESHOLD, _threshold_rule(ctx.p))


def gen_legendre_fermat(ctx: FermatContext) -> BinarySequence:
    """f_u = 1 iff q_p(u) is a quadratic non-residue"""
    return _cross_checked(ctx, SequenceKind.LEGENDRE_FERMAT, _legendre_rule(ctx.p))


def gen_characteristic(ctx: FermatContext, l: int) -> BinarySequence:
    """Indicator of the coset D_l"""
    if not isinstance(l, (int, np.integer)) or not 0 <= l < ctx.p:
        raise ParameterError(f"coset index must satisfy 0 <= l < {ctx.p}, got {l}")
    l = int(l)
    return _cross_checked(ctx, SequenceKind.CHARACTERISTIC, lambda q: 1 if q == l else 0, l)


def gen_balanced_threshold(ctx: FermatContext) -> BinarySequence:
    """Threshold sequence with every u in P set to 1"""
    return _cross_checked(ctx, SequenceKind.BALANCED_THRESHOLD, _threshold_rule(ctx.p))


def gen_balanced_legendre(ctx: FermatContext) -> BinarySequence:
    """Legendre-Fermat sequence with every u in P set to 1"""
    return _cross_checked(ctx, SequenceKind.BALANCED_LEGENDRE, _legendre_rule(ctx.p))


def generate(ctx: FermatContext, kind, l: Optional[int] = None) -> BinarySequence:
    """Dispatch on the kind name"""
    if not isinstance(kind, SequenceKind):
        kind = SequenceKind.parse(kind)
    if kind is SequenceKind.THRESHOLD:
        return gen_threshold(ctx)
    if kind is SequenceKind.LEGENDRE_FERMAT:
        return gen_legendre_fermat(ctx)
    if kind is SequenceKind.CHARACTERISTIC:
        return gen_characteristic(ctx, l)
    if kind is SequenceKind.BALANCED_THRESHOLD:
        return gen_balanced_threshold(ctx)
    return gen_balanced_legendre(ctx)
