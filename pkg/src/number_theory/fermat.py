"""
Fermat quotient arithmetic modulo an odd prime p

q_p(u) = (u^(p-1) - 1)/p mod p for gcd(u, p) = 1 and q_p(kp) = 0.
The quotient is a homomorphism from the units modulo p^2 onto Z_p, so its
fibres D_0..D_{p-1} partition the units into p cosets of size p-1.
"""
import logging
from math import gcd
from dataclasses import dataclass, field
from typing import FrozenSet, Tuple

import numpy as np
from sympy.ntheory import isprime, primefactors

from src.utils.errors import CapacityError, InvariantViolation, ParameterError

logger = logging.getLogger(__name__)

# p**4 must fit an unsigned 64-bit word
MAX_NATIVE_PRIME = 65521

# coset_of entry for u in P
MULTIPLE_OF_P = -1


def require_odd_prime(p: int) -> int:
    """Validate p and return it as an int"""
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise ParameterError(f"p must be an integer, got {p!r}")
    p = int(p)
    if p < 3 or p % 2 == 0 or not isprime(p):
        raise ParameterError(f"p must be an odd prime, got {p}")
    if p > MAX_NATIVE_PRIME:
        raise CapacityError(
            f"p={p} exceeds the native word cap {MAX_NATIVE_PRIME} (p^4 must fit 64 bits)",
            cap=MAX_NATIVE_PRIME,
        )
    return p


def fermat_quotient(p: int, u: int) -> int:
    """Return q_p(u) in [0, p); multiples of p map to 0"""
    return _quotient(require_odd_prime(p), u)


def _quotient(p: int, u: int) -> int:
    p2 = p * p
    u %= p2
    if u % p == 0:
        return 0
    r = pow(u, p - 1, p2)
    return ((r - 1) // p) % p


def _totient(n: int) -> int:
    phi = n
    for r in primefactors(n):
        phi = phi // r * (r - 1)
    return phi


def multiplicative_order(a: int, n: int) -> int:
    """Least t >= 1 with a^t = 1 (mod n), descending from phi(n)"""
    if n < 2:
        raise ParameterError(f"modulus must be at least 2, got {n}")
    a %= n
    if gcd(a, n) != 1:
        raise ParameterError(f"{a} is not a unit modulo {n}")
    t = _totient(n)
    for r in primefactors(t):
        while t % r == 0 and pow(a, t // r, n) == 1:
            t //= r
    return t


def order_of_two(p: int) -> int:
    """lambda: the multiplicative order of 2 modulo p"""
    return multiplicative_order(2, require_odd_prime(p))


def find_primitive_root_mod_p2(p: int) -> int:
    """Smallest g >= 2 of order p(p-1) modulo p^2"""
    p = require_odd_prime(p)
    p2 = p * p
    target = p * (p - 1)
    for g in range(2, p2):
        if g % p == 0:
            continue
        if multiplicative_order(g, p2) == target:
            return g
    raise InvariantViolation(f"no primitive root modulo {p2}")


def is_wieferich(p: int) -> bool:
    """True iff 2^(p-1) = 1 (mod p^2)"""
    p = require_odd_prime(p)
    return pow(2, p - 1, p * p) == 1


def legendre_symbol(a: int, p: int) -> int:
    """Euler's criterion mapped to -1, 0, +1"""
    p = require_odd_prime(p)
    r = pow(a % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


@dataclass(frozen=True, eq=False)
class FermatContext:
    """Everything downstream modules need about one prime p"""
    p: int
    g: int
    delta: int
    mu: int
    coset_of: np.ndarray = field(repr=False)
    cosets: Tuple[Tuple[int, ...], ...] = field(repr=False)
    residues: FrozenSet[int] = field(repr=False)
    non_residues: FrozenSet[int] = field(repr=False)

    @property
    def p2(self) -> int:
        return self.p * self.p

    @property
    def multiples(self) -> Tuple[int, ...]:
        """The set P of multiples of p in [0, p^2)"""
        return tuple(range(0, self.p2, self.p))

    @property
    def wieferich(self) -> bool:
        return self.mu == 0

    def coset(self, l: int) -> Tuple[int, ...]:
        """D_l with the subscript reduced modulo p"""
        return self.cosets[l % self.p]

    def generator_coset(self, j: int) -> Tuple[int, ...]:
        """D_{j delta} = g^j D_0"""
        return self.coset(j * self.delta)

    def coset_index(self, u: int) -> int:
        """l with u mod p^2 in D_l, or MULTIPLE_OF_P"""
        return int(self.coset_of[u % self.p2])


def build_context(p: int) -> FermatContext:
    """Evaluate q_p over [0, p^2) and cross-check the coset partition"""
    p = require_odd_prime(p)
    p2 = p * p
    g = find_primitive_root_mod_p2(p)
    delta = fermat_quotient(p, g)
    if delta == 0:
        raise InvariantViolation(f"primitive root {g} mod {p2} has zero Fermat quotient")

    coset_of = np.full(p2, MULTIPLE_OF_P, dtype=np.int32)
    members = [[] for _ in range(p)]
    for u in range(p2):
        if u % p == 0:
            continue
        l = _quotient(p, u)
        coset_of[u] = l
        members[l].append(u)
    coset_of.setflags(write=False)

    for l, coset in enumerate(members):
        if len(coset) != p - 1:
            raise InvariantViolation(f"|D_{l}| = {len(coset)}, expected {p - 1}", index=l)
    multiples = int(np.count_nonzero(coset_of == MULTIPLE_OF_P))
    if multiples != p:
        raise InvariantViolation(f"|P| = {multiples}, expected {p}")

    for j in range(p):
        by_generator = {pow(g, k * p + j, p2) for k in range(p)}
        if by_generator != set(members[(j * delta) % p]):
            raise InvariantViolation(f"D_(j*delta) != g^j D_0 for j={j}", index=j)

    residues = frozenset(a for a in range(1, p) if legendre_symbol(a, p) == 1)
    non_residues = frozenset(range(1, p)) - residues
    if len(residues) != len(non_residues):
        raise InvariantViolation(f"|Q|={len(residues)} and |N|={len(non_residues)} differ")

    ctx = FermatContext(
        p=p,
        g=g,
        delta=delta,
        mu=fermat_quotient(p, 2),
        coset_of=coset_of,
        cosets=tuple(tuple(c) for c in members),
        residues=residues,
        non_residues=non_residues,
    )
    logger.info(f"Built Fermat context for p={p}: g={g}, delta={delta}, mu={ctx.mu}")
    return ctx
