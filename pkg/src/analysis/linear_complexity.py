"""
Linear complexity of periodic binary sequences, three ways

* Berlekamp-Massey over two concatenated periods
* T - deg gcd(x^T - 1, S(x)) with S the generating polynomial of one period
* Hamming weight of the discrete Fourier transform over GF(2^m)
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from src.algebra.field import FieldCtx, FieldElem, element_order_is
from src.algebra.gf2x import Gf2Poly, poly_gcd, x_power_minus_one
from src.sequences.generators import BinarySequence
from src.utils.errors import InvariantViolation, ParameterError, SequenceFileError

logger = logging.getLogger(__name__)

# positions checked by the inverse transform after every dft
_DFT_SAMPLE = 8


@dataclass(frozen=True)
class LfsrProfile:
    """Shortest LFSR: s_n = c_1 s_(n-1) + ... + c_L s_(n-L), C(x) = 1 + c_1 x + ... + c_L x^L"""
    linear_complexity: int
    connection_poly: Gf2Poly

    @property
    def L(self) -> int:
        return self.linear_complexity

    def regenerate(self, seed: Sequence[int], length: int) -> np.ndarray:
        """Extend the first L bits of `seed` to `length` bits"""
        L = self.linear_complexity
        out = np.zeros(length, dtype=np.uint8)
        out[:min(L, length)] = np.asarray(seed[:min(L, length)], dtype=np.uint8)
        taps = [i for i in range(1, L + 1) if (self.connection_poly.bits >> i) & 1]
        for n in range(L, length):
            bit = 0
            for i in taps:
                bit ^= int(out[n - i])
            out[n] = bit
        return out


def berlekamp_massey_bits(bits: Sequence[int]) -> LfsrProfile:
    """Berlekamp-Massey over GF(2) on a finite bit string"""
    c, b = 1, 1
    L, shift = 0, 1
    history = 0  # bit i holds s_(n-i)
    for n, s in enumerate(bits):
        history = (history << 1) | int(s)
        if not (c & history).bit_count() & 1:
            shift += 1
            continue
        if 2 * L <= n:
            previous = c
            c ^= b << shift
            L = n + 1 - L
            b = previous
            shift = 1
        else:
            c ^= b << shift
            shift += 1
    return LfsrProfile(L, Gf2Poly(c))


def berlekamp_massey(seq: BinarySequence) -> LfsrProfile:
    """Minimal LFSR of the periodic sequence, checked by re-synthesis

    Runs over two concatenated periods; a single period can understate L.
    """
    if seq.period == 0:
        raise ParameterError("empty sequence")
    doubled = np.concatenate([seq.bits, seq.bits])
    profile = berlekamp_massey_bits(doubled)
    regenerated = profile.regenerate(doubled, len(doubled))
    mismatch = np.flatnonzero(regenerated != doubled)
    if mismatch.size:
        raise InvariantViolation(f"LFSR of length {profile.L} does not regenerate {seq.label}",
                                 index=int(mismatch[0]))
    return profile


def generating_polynomial(seq: BinarySequence) -> Gf2Poly:
    """S(x) = s_0 + s_1 x + ... + s_(T-1) x^(T-1)"""
    return Gf2Poly.from_coefficients(seq.bits)


def lc_gcd(seq: BinarySequence) -> int:
    """T - deg gcd(x^T - 1, S(x))"""
    s = generating_polynomial(seq)
    if not s:
        return 0
    return seq.period - poly_gcd(x_power_minus_one(seq.period), s).degree


def beta_power_table(ctx: FieldCtx, beta: FieldElem, T: int) -> List[int]:
    """Residues of beta^0, ..., beta^(T-1)"""
    table = [1] * T
    for i in range(1, T):
        table[i] = ctx.mul(table[i - 1], beta.value)
    return table


@dataclass(frozen=True)
class DftSpectrum:
    """rho_i = sum_u s_u beta^(-iu); s_u = sum_i rho_i beta^(iu)"""
    beta: FieldElem
    rho: Tuple[FieldElem, ...]

    @property
    def period(self) -> int:
        return len(self.rho)

    @property
    def weight(self) -> int:
        return sum(1 for r in self.rho if r)

    def nonzero(self) -> List[Tuple[int, FieldElem]]:
        return [(i, r) for i, r in enumerate(self.rho) if r]

    def evaluate(self, u: int, table: List[int] = None) -> FieldElem:
        """sum_i rho_i beta^(iu)"""
        ctx = self.beta.ctx
        T = self.period
        table = table or beta_power_table(ctx, self.beta, T)
        total = 0
        for i, r in enumerate(self.rho):
            if r:
                total ^= ctx.mul(r.value, table[(i * u) % T])
        return FieldElem(total, ctx)

    def inverse(self) -> np.ndarray:
        """Full inverse transform; entries must lie in GF(2)"""
        table = beta_power_table(self.beta.ctx, self.beta, self.period)
        out = np.zeros(self.period, dtype=np.uint8)
        for u in range(self.period):
            value = self.evaluate(u, table).value
            if value not in (0, 1):
                raise InvariantViolation("inverse transform left GF(2)", index=u)
            out[u] = value
        return out


def dft(seq: BinarySequence, ctx: FieldCtx, beta: FieldElem) -> DftSpectrum:
    """Discrete Fourier transform of one period with respect to beta"""
    T = seq.period
    if beta.ctx != ctx or not element_order_is(ctx, beta, T):
        raise ParameterError(f"beta does not have order exactly {T} in GF(2^{ctx.m})")
    table = beta_power_table(ctx, beta, T)
    support = np.flatnonzero(seq.bits).tolist()
    rho = []
    for i in range(T):
        acc = 0
        for u in support:
            acc ^= table[(-i * u) % T]
        rho.append(FieldElem(acc, ctx))
    spectrum = DftSpectrum(beta=beta, rho=tuple(rho))

    step = max(1, T // _DFT_SAMPLE)
    for u in range(0, T, step):
        if spectrum.evaluate(u, table).value != seq.bit(u):
            raise InvariantViolation(f"inverse transform of {seq.label} disagrees", index=u)
    logger.debug(f"DFT of {seq.label} p={seq.p}: weight {spectrum.weight}")
    return spectrum


def lc_blahut(spectrum: DftSpectrum) -> int:
    """Number of nonzero spectral coefficients"""
    return spectrum.weight


def format_spectrum(spectrum: DftSpectrum) -> str:
    """Sparse dump: header T=<T> nonzero=<count>, then one 'i <hex>' line per nonzero rho_i"""
    nonzero = spectrum.nonzero()
    lines = [f"T={spectrum.period} nonzero={len(nonzero)}"]
    lines += [f"{i} {r.residue.to_text()}" for i, r in nonzero]
    return "\n".join(lines) + "\n"


def write_spectrum(spectrum: DftSpectrum, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(format_spectrum(spectrum), encoding="ascii")
        logger.info(f"Wrote spectrum (T={spectrum.period}) to {path}")
    except OSError as e:
        logger.error(f"Error writing spectrum file {path}: {e}")
        raise SequenceFileError(str(e), path=str(path))
