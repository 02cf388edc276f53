"""
Defining pairs and trace representations of coset-union sequences

Every supported sequence is the indicator of a union of cosets D_l (l in L),
with P added for the balanced variants. With beta a primitive p^2-th root of
unity its defining polynomial is

    b + (|L| + b) sum_(j=1..p-1) x^(jp) + sum_j eta_j D_(j delta)(x),
    eta_j = sum_(l in L) D_(l + j delta)(beta),

where b = 1 for balanced kinds. Grouping D_(j delta) and P - {0} into
Frobenius orbits turns the polynomial into sums of traces.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from src.algebra.field import PROVENANCE_LAMBDA, FieldCtx, FieldElem, element_order_is
from src.algebra.gf2x import Gf2Poly
from src.analysis.linear_complexity import beta_power_table
from src.number_theory.fermat import FermatContext, order_of_two
from src.sequences.generators import BinarySequence, SequenceKind, coset_union, gen_characteristic, generate
from src.utils.errors import InvariantViolation, ParameterError, SequenceFileError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def _powers(fld: FieldCtx, beta_value: int, T: int) -> Tuple[int, ...]:
    return tuple(beta_power_table(fld, FieldElem(beta_value, fld), T))


@lru_cache(maxsize=64)
def _has_order(fld: FieldCtx, beta_value: int, order: int) -> bool:
    return element_order_is(fld, FieldElem(beta_value, fld), order)


def _check_beta(ctx: FermatContext, fld: FieldCtx, beta: FieldElem) -> Tuple[int, ...]:
    if beta.ctx != fld or not _has_order(fld, beta.value, ctx.p2):
        raise ParameterError(f"beta must have order exactly {ctx.p2} in GF(2^{fld.m})")
    return _powers(fld, beta.value, ctx.p2)


def coset_value(ctx: FermatContext, fld: FieldCtx, beta: FieldElem, l: int, n: int) -> FieldElem:
    """D_l(beta^n) = sum of beta^(n u) over u in D_l"""
    if not 0 <= l < ctx.p:
        raise ParameterError(f"coset index must satisfy 0 <= l < {ctx.p}, got {l}")
    table = _check_beta(ctx, fld, beta)
    acc = 0
    for u in ctx.coset(l):
        acc ^= table[(n * u) % ctx.p2]
    return FieldElem(acc, fld)


def coset_vector(ctx: FermatContext, fld: FieldCtx, beta: FieldElem, i: int) -> Tuple[FieldElem, ...]:
    """C_i = (D_(i delta)(beta), D_((i+1) delta)(beta), ..., D_((i+p-1) delta)(beta))"""
    return tuple(coset_value(ctx, fld, beta, ((i + k) * ctx.delta) % ctx.p, 1) for k in range(ctx.p))


def inner_product(a: Tuple[FieldElem, ...], b: Tuple[FieldElem, ...]) -> FieldElem:
    total = a[0] * b[0]
    for x, y in zip(a[1:], b[1:]):
        total = total + x * y
    return total


@dataclass(frozen=True)
class DefiningPair:
    """(g(x), beta) with s_u = g(beta^u); coeffs[i] is the coefficient of x^i"""
    beta: FieldElem
    coeffs: Tuple[FieldElem, ...]
    seq_kind: str

    @property
    def period(self) -> int:
        return len(self.coeffs)

    @property
    def weight(self) -> int:
        return sum(1 for c in self.coeffs if c)

    def _groups(self) -> Dict[int, List[int]]:
        groups = defaultdict(list)
        for i, c in enumerate(self.coeffs):
            if c:
                groups[c.value].append(i)
        return groups

    def evaluate(self, u: int, groups: Optional[Dict[int, List[int]]] = None) -> FieldElem:
        """g(beta^u), summing the powers that share a coefficient before multiplying"""
        fld = self.beta.ctx
        T = self.period
        table = _powers(fld, self.beta.value, T)
        total = 0
        for value, indices in (groups or self._groups()).items():
            acc = 0
            for i in indices:
                acc ^= table[(i * u) % T]
            if acc:
                total ^= fld.mul(value, acc)
        return FieldElem(total, fld)

    def verify(self, seq: BinarySequence) -> None:
        """Raise InvariantViolation at the first u with g(beta^u) != s_u"""
        if seq.period != self.period:
            raise ParameterError(f"period {seq.period} != defining pair length {self.period}")
        groups = self._groups()
        for u in range(self.period):
            if self.evaluate(u, groups).value != seq.bit(u):
                raise InvariantViolation(f"defining pair of {seq.label} fails", index=u)


def _eta(ctx: FermatContext, fld: FieldCtx, beta: FieldElem, indices: FrozenSet[int]) -> Tuple[FieldElem, ...]:
    values = [coset_value(ctx, fld, beta, l, 1) for l in range(ctx.p)]
    eta = []
    for j in range(ctx.p):
        acc = fld.zero
        for l in indices:
            acc = acc + values[(l + j * ctx.delta) % ctx.p]
        eta.append(acc)
    return tuple(eta)


def _union_pair(ctx: FermatContext, fld: FieldCtx, beta: FieldElem,
                indices: FrozenSet[int], balanced: bool, label: str) -> DefiningPair:
    _check_beta(ctx, fld, beta)
    p = ctx.p
    coeffs = [fld.zero] * ctx.p2
    coeffs[0] = fld.element(int(balanced))
    p_block = fld.element((len(indices) + int(balanced)) % 2)
    for j in range(1, p):
        coeffs[j * p] = p_block
    for j, eta_j in enumerate(_eta(ctx, fld, beta, indices)):
        for u in ctx.generator_coset(j):
            coeffs[u] = eta_j
    return DefiningPair(beta=beta, coeffs=tuple(coeffs), seq_kind=label)


def characteristic_defining_pair(ctx: FermatContext, fld: FieldCtx, beta: FieldElem, i: int) -> DefiningPair:
    """Defining pair G_(i delta) of the indicator of D_(i delta)"""
    if not 0 <= i < ctx.p:
        raise ParameterError(f"index must satisfy 0 <= i < {ctx.p}, got {i}")
    l = (i * ctx.delta) % ctx.p
    seq = gen_characteristic(ctx, l)
    pair = _union_pair(ctx, fld, beta, frozenset({l}), False, seq.label)
    pair.verify(seq)
    return pair


def assemble_defining_pair(ctx: FermatContext, fld: FieldCtx, beta: FieldElem, kind) -> DefiningPair:
    """Sum of the G_l over the kind's coset union, plus the P block for balanced kinds"""
    kind = SequenceKind.parse(kind) if not isinstance(kind, SequenceKind) else kind
    if kind is SequenceKind.CHARACTERISTIC:
        raise ParameterError("use characteristic_defining_pair for single cosets")
    indices, balanced = coset_union(ctx, kind)
    seq = generate(ctx, kind)
    pair = _union_pair(ctx, fld, beta, indices, balanced, seq.label)
    pair.verify(seq)
    logger.info(f"Defining pair of {seq.label} for p={ctx.p} verified, weight {pair.weight}")
    return pair


def defining_pair_for(ctx: FermatContext, fld: FieldCtx, beta: FieldElem, kind,
                      l: Optional[int] = None) -> DefiningPair:
    """Dispatch to the characteristic or assembled builder"""
    kind = SequenceKind.parse(kind) if not isinstance(kind, SequenceKind) else kind
    if kind is SequenceKind.CHARACTERISTIC:
        if l is None or not 0 <= l < ctx.p:
            raise ParameterError(f"coset index must satisfy 0 <= l < {ctx.p}, got {l}")
        return characteristic_defining_pair(ctx, fld, beta, (l * pow(ctx.delta, -1, ctx.p)) % ctx.p)
    return assemble_defining_pair(ctx, fld, beta, kind)


def eta_coefficients(ctx: FermatContext, fld: FieldCtx, beta: FieldElem, kind,
                     l: Optional[int] = None) -> Tuple[FieldElem, ...]:
    """eta_j = sum over the kind's coset indices l of D_(l + j delta)(beta)"""
    kind = SequenceKind.parse(kind) if not isinstance(kind, SequenceKind) else kind
    _check_beta(ctx, fld, beta)
    indices, _ = coset_union(ctx, kind, l)
    return _eta(ctx, fld, beta, indices)


def eta_frobenius_exponents(ctx: FermatContext) -> Tuple[int, ...]:
    """r_j with eta_j = eta_0^(2^r_j): r_j = j delta / mu mod p, mu = q_p(2)"""
    if ctx.mu == 0:
        raise ParameterError(f"p={ctx.p} is a Wieferich prime; squaring fixes every eta_j")
    inv_mu = pow(ctx.mu, -1, ctx.p)
    return tuple((j * ctx.delta * inv_mu) % ctx.p for j in range(ctx.p))


def eta_diagnostics(ctx: FermatContext, fld: FieldCtx, eta: Tuple[FieldElem, ...]) -> Dict[str, bool]:
    """Soft checks on the eta table; failures are logged, never raised"""
    if ctx.wieferich:
        in_f2 = all(e.value in (0, 1) for e in eta)
        return {"distinct": len({e.value for e in eta}) == len(eta), "frobenius_orbit": in_f2,
                "explicit_exponents": in_f2}
    orbit = []
    y = eta[0]
    for _ in range(ctx.p):
        orbit.append(y.value)
        y = y.frobenius(1)
    result = {
        "distinct": len({e.value for e in eta}) == len(eta),
        "frobenius_orbit": all(e.value in orbit for e in eta),
        "explicit_exponents": all(eta[j].value == orbit[r] for j, r in enumerate(eta_frobenius_exponents(ctx))),
    }
    for name, ok in result.items():
        if not ok:
            logger.warning(f"eta diagnostic '{name}' failed for p={ctx.p}")
    return result


def eta_minimal_polynomial(fld: FieldCtx, eta0: FieldElem) -> Gf2Poly:
    """Product of (x + c) over the distinct conjugates c of eta0"""
    conjugates = []
    y = eta0.value
    while y not in conjugates:
        conjugates.append(y)
        y = fld.square(y)
    coeffs = [1]
    for c in conjugates:
        nxt = [0] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            nxt[i + 1] ^= a
            nxt[i] ^= fld.mul(a, c)
        coeffs = nxt
    if any(a not in (0, 1) for a in coeffs):
        raise InvariantViolation("minimal polynomial has coefficients outside GF(2)")
    return Gf2Poly.from_coefficients(coeffs)


@dataclass(frozen=True)
class TraceTerm:
    """Tr^n_k(beta^(u * multiplier))"""
    inner_degree: int
    outer_degree: int
    multiplier: int

    def value(self, table: Tuple[int, ...], u: int) -> int:
        T = len(table)
        e = (u * self.multiplier) % T
        acc = 0
        for t in range(self.inner_degree // self.outer_degree):
            acc ^= table[(e * pow(2, self.outer_degree * t, T)) % T]
        return acc


def build_trace_terms(p: int, g: int, lam: int, wieferich: bool) -> Tuple[Tuple[TraceTerm, ...], Tuple[Tuple[TraceTerm, ...], ...]]:
    """Term bookkeeping: the P block and one block per coset D_(j delta)"""
    if (p - 1) % lam:
        raise ParameterError(f"lambda={lam} does not divide p-1={p - 1}")
    p2 = p * p
    blocks = (p - 1) // lam
    p_block = tuple(TraceTerm(lam, 1, (p * pow(g, k, p2)) % p2) for k in range(blocks))
    inner, outer = (lam, 1) if wieferich else (lam * p, p)
    coset_terms = tuple(
        tuple(TraceTerm(inner, outer, pow(g, k * p + j, p2)) for k in range(blocks))
        for j in range(p)
    )
    return p_block, coset_terms


@dataclass(frozen=True)
class TraceRepresentation:
    """s_u = constant + c_P sum Tr^lam_1(beta^(u p g^k)) + sum_j eta_j sum_k Tr(beta^(u g^(kp+j)))"""
    p: int
    kind: str
    lam: int
    wieferich_branch: bool
    g: int
    delta: int
    beta: FieldElem
    constant: int
    p_block_multiplier: int
    eta: Tuple[FieldElem, ...] = field(repr=False)
    p_block_terms: Tuple[TraceTerm, ...] = field(repr=False)
    coset_terms: Tuple[Tuple[TraceTerm, ...], ...] = field(repr=False)

    @property
    def p_block_coefficient(self) -> int:
        return self.p_block_multiplier % 2

    def evaluate(self, u: int) -> int:
        return evaluate_trace_representation(self, u)


def build_trace_representation(ctx: FermatContext, fld: FieldCtx, beta: FieldElem, kind,
                               l: Optional[int] = None) -> TraceRepresentation:
    """Assemble eta, lambda and the trace terms for the kind"""
    kind = SequenceKind.parse(kind) if not isinstance(kind, SequenceKind) else kind
    lam = order_of_two(ctx.p)
    wieferich = ctx.wieferich
    if wieferich != (fld.provenance == PROVENANCE_LAMBDA):
        raise InvariantViolation(f"field provenance {fld.provenance} does not match p={ctx.p}")
    indices, balanced = coset_union(ctx, kind, l)
    eta = eta_coefficients(ctx, fld, beta, kind, l)
    if not wieferich:
        eta_diagnostics(ctx, fld, eta)
    p_block_terms, coset_terms = build_trace_terms(ctx.p, ctx.g, lam, wieferich)
    label = f"{kind.value}-{l}" if kind is SequenceKind.CHARACTERISTIC else kind.value
    rep = TraceRepresentation(
        p=ctx.p, kind=label, lam=lam, wieferich_branch=wieferich, g=ctx.g, delta=ctx.delta,
        beta=beta, constant=int(balanced), p_block_multiplier=len(indices) + int(balanced),
        eta=eta, p_block_terms=p_block_terms, coset_terms=coset_terms,
    )
    logger.info(f"Trace representation of {label} for p={ctx.p}: lambda={lam}, "
                f"{len(p_block_terms)} terms per block, wieferich={wieferich}")
    return rep


def evaluate_trace_representation(rep: TraceRepresentation, u: int) -> int:
    """Evaluate every trace term in GF(2^m); the total must lie in GF(2)"""
    if u < 0:
        raise ParameterError(f"u must be nonnegative, got {u}")
    fld = rep.beta.ctx
    table = _powers(fld, rep.beta.value, rep.p * rep.p)
    total = rep.constant
    if rep.p_block_coefficient:
        for term in rep.p_block_terms:
            total ^= term.value(table, u)
    for eta_j, terms in zip(rep.eta, rep.coset_terms):
        if not eta_j:
            continue
        acc = 0
        for term in terms:
            acc ^= term.value(table, u)
        if acc:
            total ^= fld.mul(eta_j.value, acc)
    if fld.square(total) != total:
        raise InvariantViolation(f"trace representation of {rep.kind} left GF(2)", index=u)
    return total


def verify_trace_representation(rep: TraceRepresentation, seq: BinarySequence) -> bool:
    """True iff the representation reproduces every bit of one period"""
    for u in range(seq.period):
        if evaluate_trace_representation(rep, u) != seq.bit(u):
            logger.error(f"Trace representation of {rep.kind} p={rep.p} fails at u={u}")
            return False
    return True


def format_trace_report(rep: TraceRepresentation, verified: bool) -> str:
    branch = "wieferich" if rep.wieferich_branch else "non-wieferich"
    lines = [
        f"p={rep.p} lambda={rep.lam} branch={branch} g={rep.g} delta={rep.delta} kind={rep.kind}",
        f"constant={rep.constant} p_block_multiplier={rep.p_block_multiplier} "
        f"p_block_coefficient={rep.p_block_coefficient} terms_per_block={len(rep.p_block_terms)}",
        f"beta={rep.beta.to_text()}",
        "eta",
    ]
    lines += [f"{j} {e.to_text()}" for j, e in enumerate(rep.eta)]
    lines.append(f"verified={'true' if verified else 'false'} period={rep.p * rep.p}")
    return "\n".join(lines) + "\n"


def write_trace_report(rep: TraceRepresentation, verified: bool, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(format_trace_report(rep, verified), encoding="ascii")
        logger.info(f"Wrote trace report for {rep.kind} p={rep.p} to {path}")
    except OSError as e:
        logger.error(f"Error writing trace report {path}: {e}")
        raise SequenceFileError(str(e), path=str(path))
