"""
Dense polynomial arithmetic over GF(2)

A polynomial b_n x^n + ... + b_1 x + b_0 is stored as the integer
b_n 2^n + ... + b_1 2 + b_0, so addition is XOR and the zero polynomial is 0.
The zero polynomial has degree -1.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Tuple

import numpy as np
from sympy.ntheory import primefactors

from src.utils.errors import ParameterError

logger = logging.getLogger(__name__)

TEXT_PREFIX = "gf2x:"

# byte -> byte with its bits spread to even positions
_SPREAD = tuple(
    sum(((b >> i) & 1) << (2 * i) for i in range(8)) for b in range(256)
)


def _degree(a: int) -> int:
    return a.bit_length() - 1


def _mul(a: int, b: int) -> int:
    if a < b:
        a, b = b, a
    c = 0
    while b:
        if b & 1:
            c ^= a
        a <<= 1
        b >>= 1
    return c


def _spread(a: int) -> int:
    c = 0
    shift = 0
    while a:
        c |= _SPREAD[a & 0xFF] << shift
        a >>= 8
        shift += 16
    return c


def _mod(a: int, m: int) -> int:
    if m == 0:
        raise ZeroDivisionError("division by zero polynomial")
    dm = _degree(m)
    da = _degree(a)
    while da >= dm:
        a ^= m << (da - dm)
        da = _degree(a)
    return a


def _divmod(a: int, m: int) -> Tuple[int, int]:
    if m == 0:
        raise ZeroDivisionError("division by zero polynomial")
    dm = _degree(m)
    q = 0
    da = _degree(a)
    while da >= dm:
        q |= 1 << (da - dm)
        a ^= m << (da - dm)
        da = _degree(a)
    return q, a


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _mod(a, b)
    return a


def _powmod(a: int, e: int, m: int) -> int:
    if e < 0:
        raise ParameterError("negative exponent")
    result = 1
    a = _mod(a, m)
    for bit in bin(e)[2:]:
        result = _mod(_spread(result), m)
        if bit == "1":
            result = _mod(_mul(result, a), m)
    return _mod(result, m)


@dataclass(frozen=True, order=True)
class Gf2Poly:
    """Polynomial over GF(2); bit i of `bits` is the coefficient of x^i"""
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise ParameterError("polynomial bits must be nonnegative")

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "Gf2Poly":
        """Sum of x^e over the given exponents (repeats cancel)"""
        bits = 0
        for e in exponents:
            bits ^= 1 << int(e)
        return cls(bits)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[int]) -> "Gf2Poly":
        """Build from a low-order-first 0/1 vector"""
        arr = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs)
        if arr.size == 0:
            return cls(0)
        packed = np.packbits(arr.astype(np.uint8) & 1, bitorder="little")
        return cls(int.from_bytes(packed.tobytes(), "little"))

    @property
    def degree(self) -> int:
        return _degree(self.bits)

    def coefficients(self, length: int = None) -> np.ndarray:
        """Low-order-first 0/1 vector, zero padded to `length`"""
        n = max(self.degree + 1, 0) if length is None else length
        return np.array([(self.bits >> i) & 1 for i in range(n)], dtype=np.uint8)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __int__(self) -> int:
        return self.bits

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(self.bits ^ _as_bits(other))

    __sub__ = __add__

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(_mul(self.bits, _as_bits(other)))

    def __mod__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(_mod(self.bits, _as_bits(other)))

    def __floordiv__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(_divmod(self.bits, _as_bits(other))[0])

    def __divmod__(self, other: "Gf2Poly") -> Tuple["Gf2Poly", "Gf2Poly"]:
        q, r = _divmod(self.bits, _as_bits(other))
        return Gf2Poly(q), Gf2Poly(r)

    def evaluate_at_one(self) -> int:
        return self.weight & 1

    def terms(self, x: str = "x") -> str:
        """Human readable form, highest power first"""
        if not self.bits:
            return "0"
        out = []
        for i in range(self.degree, -1, -1):
            if (self.bits >> i) & 1:
                out.append("1" if i == 0 else x if i == 1 else f"{x}^{i}")
        return "+".join(out)

    def to_text(self) -> str:
        """Canonical text form: hex nibbles of the coefficient bits, low-order nibble first"""
        if not self.bits:
            return TEXT_PREFIX + "0"
        return TEXT_PREFIX + format(self.bits, "x")[::-1]

    @classmethod
    def from_text(cls, text: str) -> "Gf2Poly":
        text = text.strip()
        if not text.startswith(TEXT_PREFIX):
            raise ParameterError(f"not a gf2x text form: {text!r}")
        digits = text[len(TEXT_PREFIX):]
        try:
            return cls(int(digits[::-1], 16))
        except ValueError:
            raise ParameterError(f"bad hex digits in {text!r}")

    def __repr__(self) -> str:
        return f"Gf2Poly({self.terms()})"


def _as_bits(a) -> int:
    if isinstance(a, Gf2Poly):
        return a.bits
    if isinstance(a, int):
        return a
    raise TypeError(f"expected Gf2Poly, got {type(a).__name__}")


ZERO = Gf2Poly(0)
ONE = Gf2Poly(1)
X = Gf2Poly(2)


def x_power_minus_one(n: int) -> Gf2Poly:
    """x^n - 1 (= x^n + 1 over GF(2))"""
    return Gf2Poly((1 << n) | 1)


def poly_gcd(a: Gf2Poly, b: Gf2Poly) -> Gf2Poly:
    """Monic gcd by the Euclidean algorithm"""
    if not a and not b:
        raise ParameterError("gcd(0, 0) is undefined")
    return Gf2Poly(_gcd(a.bits, b.bits))


def poly_divmod(a: Gf2Poly, b: Gf2Poly) -> Tuple[Gf2Poly, Gf2Poly]:
    if not b:
        raise ParameterError("division by the zero polynomial")
    return divmod(a, b)


def poly_square(a: Gf2Poly) -> Gf2Poly:
    """a^2 without reduction: over GF(2) squaring spreads the coefficient bits"""
    return Gf2Poly(_spread(a.bits))


def poly_mulmod(a: Gf2Poly, b: Gf2Poly, m: Gf2Poly) -> Gf2Poly:
    """a*b mod m for deg m >= 1"""
    if m.degree < 1:
        raise ParameterError(f"modulus must have degree >= 1, got {m!r}")
    return Gf2Poly(_mod(_mul(_mod(a.bits, m.bits), _mod(b.bits, m.bits)), m.bits))


def poly_powmod(a: Gf2Poly, e: int, m: Gf2Poly) -> Gf2Poly:
    """a^e mod m by most-significant-bit-first square-and-multiply"""
    if m.degree < 1:
        raise ParameterError(f"modulus must have degree >= 1, got {m!r}")
    return Gf2Poly(_powmod(a.bits, e, m.bits))


def _x_to_two_power(k: int, f: int) -> int:
    """x^(2^k) mod f by k squarings"""
    y = _mod(2, f)
    for _ in range(k):
        y = _mod(_spread(y), f)
    return y


def is_irreducible(f: Gf2Poly) -> bool:
    """Rabin's irreducibility test"""
    m = f.degree
    if m < 1:
        return False
    if m == 1:
        return True
    # cheap rejections: divisible by x or by x+1
    if not f.bits & 1 or f.evaluate_at_one() == 0:
        return False
    x = _mod(2, f.bits)
    if _x_to_two_power(m, f.bits) != x:
        return False
    for r in primefactors(m):
        h = _x_to_two_power(m // r, f.bits) ^ x
        if _gcd(f.bits, h) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def find_irreducible(m: int) -> Gf2Poly:
    """Lexicographically smallest irreducible polynomial of degree m"""
    if m < 1:
        raise ParameterError(f"degree must be >= 1, got {m}")
    top = 1 << m
    for low in range(top):
        candidate = Gf2Poly(top | low)
        if is_irreducible(candidate):
            logger.debug(f"Smallest irreducible of degree {m}: {candidate.to_text()}")
            return candidate
    raise ParameterError(f"no irreducible polynomial of degree {m}")
