"""Exact evaluation of the Takagi function on rationals."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Union

import numpy as np
from sympy.ntheory import n_order

from .core_numbers import (
    BinExp,
    check_unit,
    make_rat,
    word_excess,
)

def _byte_tables():
    pop = np.zeros(256, dtype=np.int64)
    inner = np.zeros(256, dtype=np.int64)
    for v in range(256):
        ones = 0
        for t in range(1, 9):
            if v >> (8 - t) & 1:
                ones += 1
                inner[v] += (t - 2 * ones) << (8 - t)
        pop[v] = ones
    return pop, inner


# popcount of a byte, and sum over its ones of (t - 2 n_t) 2^(8-t), where t is
# the bit position (1 = most significant) and n_t the ones among bits 1..t
_POP, _INNER = _byte_tables()


def base256_sum(coeffs: np.ndarray) -> int:
    """sum(coeffs[i] * 256^(n-1-i)) as an exact big int.

    Words four apart do not overlap as long as the coefficients span less
    than 2^32, so each residue class mod 4 is packed straight into a big
    integer by ``int.from_bytes``.
    """
    n = len(coeffs)
    if n == 0:
        return 0
    lo = int(coeffs.min())
    v = coeffs - lo
    if int(v.max()) >= 1 << 32:
        raise OverflowError("coefficients span too wide for word packing")
    padded = -(-n // 4) * 4
    if padded != n:
        v = np.concatenate((v, np.zeros(padded - n, dtype=v.dtype)))
    words = v.astype(">u4")
    total = 0
    for t in range(4):
        total += int.from_bytes(words[t::4].tobytes(), "big") << (24 - 8 * t)
    total >>= 8 * (padded - n)
    return total + lo * (((1 << (8 * n)) - 1) // 255)


def weighted_pow2(coeffs: np.ndarray) -> int:
    """sum(coeffs[i] * 2^(n-1-i)) for an integer array, as an exact big int."""
    n = len(coeffs)
    if n == 0:
        return 0
    padded = -(-n // 8) * 8
    v = np.zeros(padded, dtype=np.int64)
    v[:n] = coeffs
    folded = v.reshape(-1, 8) @ (2 ** np.arange(7, -1, -1, dtype=np.int64))
    return base256_sum(folded) >> (padded - n)


def dyadic_tau_numerator(word, n: int = None) -> tuple:
    """(2^n * tau(0.b_1..b_n), D_n) for a finite digit word.

    ``word`` is a 0/1 string, or an integer holding the n digits.  Setting
    digit j to 1 on top of the prefix 0.b_1..b_{j-1} raises tau by
    (1 + D_{j-1}) / 2^j = (D_j + 2) / 2^j.  The sum over the ones is
    taken a byte at a time: a byte at offset 8B with N ones before it adds
    (8B - 2N + 2) * byte + inner(byte) in units of 2^(n-8B-8).
    """
    if isinstance(word, str):
        n = len(word)
        word = int(word, 2) if n else 0
    if n == 0:
        return 0, 0
    nbytes = -(-n // 8)
    pad = 8 * nbytes - n
    vals = np.frombuffer((word << pad).to_bytes(nbytes, "big"), dtype=np.uint8)
    pop = _POP[vals]
    ones_before = np.cumsum(pop) - pop
    coeffs = (8 * np.arange(nbytes, dtype=np.int64) - 2 * ones_before + 2) * vals + _INNER[vals]
    return base256_sum(coeffs) >> pad, n - 2 * word.bit_count()


@lru_cache(maxsize=4096)
def period_length(u: int) -> int:
    """Multiplicative order of 2 modulo the odd number u > 1."""
    return n_order(2, u)


def takagi_ratio(x: Fraction) -> tuple:
    """tau(x) as an unreduced pair (num, den) with a canonical denominator.

    For x = p/q, q = 2^s u with u odd and r the order of 2 mod u, the
    denominator is 2^s u (2^r - 1) (just 2^s for dyadic x).  Values that share
    q share the denominator, so identities between them can be checked on
    integers without normalizing.
    """
    x = check_unit(x)
    p, q = x.numerator, x.denominator
    s = (q & -q).bit_length() - 1
    u = q >> s
    if u == 1:
        if x == 1:
            return 0, 1
        t_pre, _ = dyadic_tau_numerator(p, s)
        return t_pre, 1 << s
    whole, a = divmod(p, u)
    r = period_length(u)
    m = (1 << r) - 1
    t_pre, d_s = dyadic_tau_numerator(whole, s)
    t_per, drift = dyadic_tau_numerator(a * (m // u), r)
    # tau(0.P(Q)) = tau(0.P) + 2^-s (tau(w) + D_s w) with w = a/u = 0.(Q), and the
    # period fixed point tau(w) (1 - 2^-r) = tau(0.Q) + drift w 2^-r.
    num = u * (t_pre * m + t_per) + a * (d_s * m + drift)
    return num, (u * m) << s


def _tau_of_binexp(b: BinExp) -> Fraction:
    s, r = b.s, b.r
    t_pre, d_s = dyadic_tau_numerator(b.preperiod)
    if b.terminates:
        return Fraction(t_pre, 1 << s)
    if b.ends_in_ones:
        # w = 1 and tau(1) = 0
        return Fraction(t_pre + d_s, 1 << s)
    m = (1 << r) - 1
    c = int(b.period, 2)
    t_per, drift = dyadic_tau_numerator(b.period)
    num = t_pre * m * m + t_per * m + drift * c + d_s * c * m
    return make_rat(num, (m * m) << s)


def takagi_exact(x: Union[Fraction, BinExp]) -> Fraction:
    """tau(x) as an exact rational.

    Accepts a rational in [0, 1] or a binary expansion; both expansions of a
    dyadic rational give the same value.
    """
    if isinstance(x, BinExp):
        return _tau_of_binexp(x)
    return make_rat(*takagi_ratio(x))


def _dist_to_int(x: Fraction) -> Fraction:
    f = x - (x.numerator // x.denominator)
    return min(f, 1 - f)


def takagi_partial(x: Fraction, n: int) -> Fraction:
    """tau_n(x) = sum_{j<n} <<2^j x>> / 2^j, summed term by term."""
    x = check_unit(x)
    if n < 0:
        raise ValueError("n must be a natural number")
    return sum((_dist_to_int(x * (1 << j)) / (1 << j) for j in range(n)), Fraction(0))


def takagi_series(x: BinExp, terms: int, *, digit_counts: bool = False) -> Fraction:
    """Partial sum of a digit series for tau.

    Default: 1/2 - 1/4 * sum_{m<terms} (-1)^{b_{m+1}} D_m / 2^m.
    With ``digit_counts``: sum_{m<=terms} l_m / 2^m, where l_m counts the
    earlier digits that differ from b_m.
    Either partial sum is within 4 (terms + 2) / 2^terms of tau(x).
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if digit_counts:
        total, ones = Fraction(0), 0
        for m, b in enumerate(_digits(x, terms), 1):
            ell = (m - 1 - ones) if b else ones
            total += Fraction(ell, 1 << m)
            ones += b
        return total
    acc, d = Fraction(0), 0
    for m, b in enumerate(_digits(x, terms)):
        acc += Fraction(-d if b else d, 1 << m)
        d += -1 if b else 1
    return Fraction(1, 2) - acc / 4


def _digits(x: BinExp, n: int):
    return (int(c) for c in x.digits(n))


def series_tail_bound(terms: int) -> Fraction:
    return Fraction(4 * (terms + 2), 1 << terms)


@dataclass(frozen=True)
class SelfAffineFrame:
    """Dyadic window [x0, x0 + 2^-n] on which tau is a scaled tilted copy of itself."""

    x0: Fraction
    n: int
    slope: int
    tau_x0: Fraction

    @classmethod
    def at(cls, x0: Fraction, n: int) -> "SelfAffineFrame":
        x0 = check_unit(x0, "x0")
        k = x0 * (1 << n)
        if k.denominator != 1 or x0 == 1:
            raise ValueError(f"x0 = {x0} is not k/2^{n} with 0 <= k < 2^{n}")
        slope = word_excess(format(int(k), f"0{n}b") if n else "")
        return cls(x0, n, slope, takagi_exact(x0))


def self_affine_eval(frame: SelfAffineFrame, w: Fraction) -> Fraction:
    """tau(x0) + 2^-n (tau(w) + slope * w) = tau(x0 + w / 2^n)."""
    w = check_unit(w, "w")
    return frame.tau_x0 + (takagi_exact(w) + frame.slope * w) / (1 << frame.n)
