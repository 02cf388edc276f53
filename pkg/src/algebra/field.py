"""
Arithmetic in GF(2^m) = GF(2)[x]/(modulus) for the field that hosts a
primitive p^2-th root of unity

m is the order of 2 modulo p^2: lambda*p for ordinary primes and lambda for
Wieferich primes. Subfields are recognized by the Frobenius fixed-point test
x^(2^n) = x instead of being built separately.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from sympy.ntheory import primefactors

from src.algebra.gf2x import (
    Gf2Poly,
    _mod,
    _mul,
    _spread,
    find_irreducible,
    is_irreducible,
)
from src.number_theory.fermat import is_wieferich, multiplicative_order, order_of_two, require_odd_prime
from src.utils.config import DEFAULT_MAX_FIELD_DEGREE
from src.utils.errors import CapacityError, InvariantViolation, ParameterError

logger = logging.getLogger(__name__)

PROVENANCE_LAMBDA_P = "lambda*p"
PROVENANCE_LAMBDA = "lambda"


@dataclass(frozen=True)
class FieldCtx:
    """GF(2^m) defined by an explicit irreducible modulus"""
    m: int
    modulus: Gf2Poly
    p: int
    provenance: str

    @property
    def order(self) -> int:
        """Size of the multiplicative group, 2^m - 1"""
        return (1 << self.m) - 1

    def element(self, bits: int) -> "FieldElem":
        return FieldElem(_mod(bits, self.modulus.bits), self)

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(0, self)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(1, self)

    # raw residue arithmetic, shared by the element wrapper and the hot loops

    def mul(self, a: int, b: int) -> int:
        return _mod(_mul(a, b), self.modulus.bits)

    def square(self, a: int) -> int:
        return _mod(_spread(a), self.modulus.bits)

    def power(self, a: int, e: int) -> int:
        """a^e with e a nonnegative int read most-significant bit first"""
        result = 1
        for bit in bin(e)[2:]:
            result = self.square(result)
            if bit == "1":
                result = self.mul(result, a)
        return result

    def frobenius(self, a: int, k: int) -> int:
        """a^(2^k)"""
        for _ in range(k):
            a = self.square(a)
        return a

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.power(a, self.order - 1)

    def in_subfield(self, a: int, n: int) -> bool:
        """True iff a lies in GF(2^n), i.e. a^(2^n) = a"""
        if self.m % n:
            return False
        return self.frobenius(a, n) == a


@dataclass(frozen=True)
class FieldElem:
    """Residue polynomial of degree < m"""
    value: int
    ctx: FieldCtx

    @property
    def residue(self) -> Gf2Poly:
        return Gf2Poly(self.value)

    def _other(self, other: "FieldElem") -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ParameterError("elements belong to different fields")
            return other.value
        if isinstance(other, int) and other in (0, 1):
            return other
        return NotImplemented

    def __add__(self, other: "FieldElem") -> "FieldElem":
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElem(self.value ^ b, self.ctx)

    __radd__ = __add__
    __sub__ = __add__

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx.mul(self.value, b), self.ctx)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "FieldElem":
        if e < 0:
            return FieldElem(self.ctx.power(self.ctx.inverse(self.value), -e), self.ctx)
        return FieldElem(self.ctx.power(self.value, e), self.ctx)

    def __bool__(self) -> bool:
        return self.value != 0

    def is_one(self) -> bool:
        return self.value == 1

    def frobenius(self, k: int = 1) -> "FieldElem":
        return FieldElem(self.ctx.frobenius(self.value, k), self.ctx)

    def inverse(self) -> "FieldElem":
        return FieldElem(self.ctx.inverse(self.value), self.ctx)

    def in_subfield(self, n: int) -> bool:
        return self.ctx.in_subfield(self.value, n)

    def to_text(self) -> str:
        return self.residue.to_text()

    def __repr__(self) -> str:
        return f"FieldElem({self.residue.terms('z')})"


def field_from_parameters(p: int, m: int, modulus: Gf2Poly,
                          max_degree: int = DEFAULT_MAX_FIELD_DEGREE) -> FieldCtx:
    """Rebuild a field from stored parameters, checking every invariant"""
    p = require_odd_prime(p)
    if m > max_degree:
        raise CapacityError(f"field degree {m} for p={p} exceeds the cap {max_degree}", cap=max_degree)
    expected = multiplicative_order(2, p * p)
    if m % expected:
        raise ParameterError(f"m={m} is not a multiple of ord_(p^2)(2)={expected}")
    if modulus.degree != m or not is_irreducible(modulus):
        raise ParameterError(f"modulus {modulus.to_text()} is not irreducible of degree {m}")
    provenance = PROVENANCE_LAMBDA if is_wieferich(p) else PROVENANCE_LAMBDA_P
    return FieldCtx(m=m, modulus=modulus, p=p, provenance=provenance)


def make_field(p: int, max_degree: Optional[int] = None) -> FieldCtx:
    """Smallest field GF(2^m) containing a primitive p^2-th root of unity"""
    p = require_odd_prime(p)
    cap = DEFAULT_MAX_FIELD_DEGREE if max_degree is None else max_degree
    lam = order_of_two(p)
    m = multiplicative_order(2, p * p)
    wieferich = is_wieferich(p)
    if m != (lam if wieferich else lam * p):
        raise InvariantViolation(f"ord_(p^2)(2)={m} disagrees with lambda={lam} for p={p}")
    if m > cap:
        raise CapacityError(f"field degree {m} for p={p} exceeds the cap {cap}", cap=cap)
    ctx = FieldCtx(
        m=m,
        modulus=find_irreducible(m),
        p=p,
        provenance=PROVENANCE_LAMBDA if wieferich else PROVENANCE_LAMBDA_P,
    )
    logger.info(f"Field for p={p}: GF(2^{m}) ({ctx.provenance}), modulus {ctx.modulus.to_text()}")
    return ctx


def exact_div_mersenne(m: int, d: int) -> int:
    """(2^m - 1)/d by schoolbook short division of the m-bit all-ones string"""
    if d < 1:
        raise ParameterError(f"divisor must be positive, got {d}")
    quotient = 0
    remainder = 0
    for _ in range(m):
        remainder = 2 * remainder + 1
        bit = 1 if remainder >= d else 0
        remainder -= bit * d
        quotient = (quotient << 1) | bit
    if remainder:
        raise ParameterError(f"{d} does not divide 2^{m} - 1")
    return quotient


def element_order_is(ctx: FieldCtx, x: FieldElem, order: int) -> bool:
    """True iff x has multiplicative order exactly `order`"""
    if not x or not (x ** order).is_one():
        return False
    return all(not (x ** (order // r)).is_one() for r in primefactors(order))


def root_of_unity(ctx: FieldCtx, T: int) -> FieldElem:
    """First primitive T-th root of unity reached from candidates x, x+1, x^2, ..."""
    if T < 1:
        raise ParameterError(f"T must be positive, got {T}")
    if T == 1:
        return ctx.one
    if T % 2 == 0 or ctx.m % multiplicative_order(2, T):
        raise ParameterError(f"T={T} does not divide 2^{ctx.m} - 1")
    exponent = exact_div_mersenne(ctx.m, T)
    cofactors = [T // r for r in primefactors(T)]
    for candidate in range(2, 1 << ctx.m):
        y = ctx.power(candidate, exponent)
        if all(ctx.power(y, c) != 1 for c in cofactors):
            logger.debug(f"Primitive {T}-th root from candidate {candidate}: {Gf2Poly(y).to_text()}")
            return FieldElem(y, ctx)
    raise InvariantViolation(f"no primitive {T}-th root of unity in GF(2^{ctx.m})")


def trace(ctx: FieldCtx, n: int, k: int, x: FieldElem) -> FieldElem:
    """Tr^n_k(x) = x + x^(2^k) + ... + x^(2^((n/k-1)k)) for x in GF(2^n), inside GF(2^m)"""
    if k < 1 or n % k or ctx.m % n:
        raise ParameterError(f"trace needs k | n | m, got k={k}, n={n}, m={ctx.m}")
    if not x.in_subfield(n):
        raise ParameterError(f"argument {x!r} is not in GF(2^{n})")
    total = x.value
    y = x.value
    for _ in range(n // k - 1):
        y = ctx.frobenius(y, k)
        total ^= y
    if not ctx.in_subfield(total, k):
        raise InvariantViolation(f"Tr^{n}_{k} landed outside GF(2^{k})")
    return FieldElem(total, ctx)
