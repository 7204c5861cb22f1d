"""Exact rationals, eventually periodic binary expansions and digit statistics.

A binary expansion is stored as two bit strings, ``preperiod`` and ``period``,
read as ``0.<preperiod>(<period>)``.  Strings keep the textual form, slicing
and complementing cheap; long words are moved into numpy arrays only when a
cumulative statistic is needed.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import gmpy2
import numpy as np
from sympy.ntheory import n_order

Rat = Fraction

_FLIP = str.maketrans("01", "10")


class DomainError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class ResourceError(RuntimeError):
    """A configured size or depth cap would be exceeded."""


class Variant(enum.Enum):
    LOW_TAIL = "low"    # dyadics end in 0^inf
    HIGH_TAIL = "high"  # dyadics end in 1^inf


def make_rat(num: int, den: int) -> Fraction:
    """Build a reduced Fraction, using GMP for the gcd of large operands."""
    if den < 0:
        num, den = -num, -den
    if den.bit_length() > 4096:
        n, d = gmpy2.mpz(num), gmpy2.mpz(den)
        g = gmpy2.gcd(n, d)
        if g != 1:
            n, d = gmpy2.divexact(n, g), gmpy2.divexact(d, g)
        return _coprime(int(n), int(d))
    return Fraction(num, den)


def _coprime(num: int, den: int) -> Fraction:
    if hasattr(Fraction, "_from_coprime_ints"):  # python >= 3.12
        return Fraction._from_coprime_ints(num, den)
    try:
        return Fraction(num, den, _normalize=False)
    except TypeError:
        return Fraction(num, den)


def check_unit(x: Fraction, what: str = "x") -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"{what} = {x} lies outside [0, 1]")
    return x


def complement_word(word: str) -> str:
    return word.translate(_FLIP)


def bit_array(word: str) -> np.ndarray:
    """Bits of ``word`` as an int64 array."""
    return np.frombuffer(word.encode("ascii"), dtype=np.uint8).astype(np.int64) - 48


def excess(word: str, start: int = 0) -> np.ndarray:
    """Running deficient-digit values D_1..D_n of ``word`` (D_0 = ``start``)."""
    if not word:
        return np.zeros(0, dtype=np.int64)
    return start + np.cumsum(1 - 2 * bit_array(word))


def word_excess(word: str) -> int:
    """D_n for the whole word: zeros minus ones."""
    return len(word) - 2 * word.count("1")


def _primitive_root(word: str) -> str:
    d = (word + word).find(word, 1)
    return word[:d]


@dataclass(frozen=True)
class BinExp:
    """Eventually periodic binary expansion ``0.<preperiod>(<period>)``.

    The constructor canonicalizes: the period is reduced to a primitive word
    and the preperiod is made as short as possible.  Terminating expansions
    carry period ``"0"``.  Two instances compare equal exactly when they
    describe the same digit sequence.
    """

    preperiod: str
    period: str = "0"

    def __post_init__(self):
        pre, per = self.preperiod, self.period or "0"
        if pre.strip("01") or per.strip("01"):
            raise ValueError(f"bit words may contain only 0 and 1: {pre!r}, {per!r}")
        per = _primitive_root(per)
        r = len(per)
        while len(pre) >= r and pre.endswith(per):
            pre = pre[: len(pre) - r]
        k = 0
        while k < len(pre) and k < r and pre[-1 - k] == per[-1 - k]:
            k += 1
        if k:
            pre = pre[: len(pre) - k]
            per = per[r - k:] + per[: r - k]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def __str__(self):
        return f"0.{self.preperiod}({self.period})"

    def __repr__(self):
        return f"BinExp({str(self)!r})"

    @property
    def s(self) -> int:
        return len(self.preperiod)

    @property
    def r(self) -> int:
        return len(self.period)

    @property
    def terminates(self) -> bool:
        return self.period == "0"

    @property
    def ends_in_ones(self) -> bool:
        return self.period == "1"

    @property
    def value(self) -> Fraction:
        return rational_of_binexp(self)

    def digit(self, j: int) -> int:
        """The j-th digit b_j, j >= 1."""
        if j < 1:
            raise IndexError("digits are indexed from 1")
        if j <= self.s:
            return int(self.preperiod[j - 1])
        return int(self.period[(j - self.s - 1) % self.r])

    def digits(self, n: int) -> str:
        """The first ``n`` digits as a string."""
        if n <= self.s:
            return self.preperiod[:n]
        reps, rest = divmod(n - self.s, self.r)
        return self.preperiod + self.period * reps + self.period[:rest]

    def iter_digits(self) -> Iterator[int]:
        yield from (int(c) for c in self.preperiod)
        while True:
            yield from (int(c) for c in self.period)

    def complement(self) -> "BinExp":
        """Flip every digit; the value becomes 1 - x."""
        return BinExp(complement_word(self.preperiod), complement_word(self.period))

    def other_variant(self) -> "BinExp | None":
        """The second expansion of a dyadic rational, or None."""
        if self.terminates:
            one = self.preperiod.rfind("1")
            if one < 0:
                return None
            return BinExp(self.preperiod[:one] + "0", "1")
        if self.ends_in_ones:
            zero = self.preperiod.rfind("0")
            if zero < 0:
                return None
            return BinExp(self.preperiod[:zero] + "1", "0")
        return None

    @classmethod
    def parse(cls, text: str) -> "BinExp":
        return parse_binexp(text)


_BINEXP_RE = re.compile(r"^\s*0?\.([01]*)(?:\(([01]+)\))?\s*$")


def parse_binexp(text: str) -> BinExp:
    """Parse ``0.0011(01)``; a literal without parentheses terminates."""
    m = _BINEXP_RE.match(text)
    if not m:
        raise ValueError(f"not a binary expansion literal: {text!r}")
    return BinExp(m.group(1), m.group(2) or "0")


def parse_rat(text: str) -> Fraction:
    """Parse ``p/q`` or an integer into an exact Fraction."""
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def format_rat(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_value(x: Fraction, digits: "int | None" = None) -> str:
    """``p/q``, or a decimal rounded to ``digits`` places when digits is given."""
    if digits is None:
        return format_rat(x)
    scaled = round(x * 10**digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def parse_point(text: str) -> Union[Fraction, BinExp]:
    """Either form: expansion literals contain a dot."""
    if "." in text:
        return parse_binexp(text)
    return parse_rat(text)


def binexp_of_rational(x: Fraction, variant: Variant = Variant.LOW_TAIL) -> BinExp:
    """Binary expansion of a rational in [0, 1].

    The preperiod length is the 2-adic valuation of the denominator and the
    period length is the multiplicative order of 2 modulo its odd part.  The
    number 1 only has the all-ones expansion and is returned as ``0.(1)``
    for either variant; 0 only has ``0.(0)``.
    """
    x = check_unit(x)
    p, q = x.numerator, x.denominator
    s = (q & -q).bit_length() - 1
    u = q >> s
    if u == 1:
        if x == 1:
            return BinExp("", "1")
        if variant is Variant.HIGH_TAIL:
            if p == 0:
                raise DomainError("0 has no expansion ending in 1^inf inside [0, 1]")
            return BinExp(format(p - 1, f"0{s}b"), "1")
        return BinExp(format(p, f"0{s}b") if s else "", "0")
    if variant is Variant.HIGH_TAIL:
        raise DomainError(f"no terminating expansion: {x} is not dyadic")
    whole, frac = divmod(p, u)
    r = n_order(2, u)
    word = frac * ((1 << r) - 1) // u
    return BinExp(format(whole, f"0{s}b") if s else "", format(word, f"0{r}b"))


def rational_of_binexp(b: BinExp) -> Fraction:
    """Exact value sum b_j 2^-j of an expansion."""
    s, r = b.s, b.r
    head = int(b.preperiod, 2) if s else 0
    if b.terminates:
        return Fraction(head, 1 << s)
    if b.ends_in_ones:
        return Fraction(head + 1, 1 << s)
    m = (1 << r) - 1
    return make_rat(head * m + int(b.period, 2), m << s)


def deficient_digit(b: BinExp, j: int) -> int:
    """D_j = j - 2 N^1_j: zeros minus ones among the first j digits."""
    if j < 1:
        raise ValueError("j must be a positive integer")
    s, r = b.s, b.r
    if j <= s:
        return word_excess(b.preperiod[:j])
    t, i = divmod(j - s, r)
    return word_excess(b.preperiod) + t * word_excess(b.period) + word_excess(b.period[:i])


def digit_sum(b: BinExp, j: int) -> int:
    """N^1_j, the number of ones among the first j digits."""
    return b.digits(j).count("1")


@dataclass(frozen=True)
class DigitProfile:
    """D over the preperiod and one period, plus the tail drift.

    For t >= 0 and 1 <= i <= r:  D_{s+tr+i} = D_s + t*drift + W(i), where
    W(i) = prefix_D[s+i-1] - D_s.
    """

    s: int
    r: int
    prefix_D: tuple
    drift: int
    window_min: int
    window_zero_positions: tuple

    @property
    def D_s(self) -> int:
        return self.prefix_D[self.s - 1] if self.s else 0

    def D(self, j: int) -> int:
        if j == 0:
            return 0
        if j <= self.s:
            return self.prefix_D[j - 1]
        t, i = divmod(j - self.s - 1, self.r)
        return self.prefix_D[self.s + i] + t * self.drift


def digit_profile(b: BinExp) -> DigitProfile:
    d = excess(b.preperiod + b.period)
    window = d[b.s:]
    zeros = np.flatnonzero(window == 0) + b.s + 1
    return DigitProfile(
        s=b.s,
        r=b.r,
        prefix_D=tuple(d.tolist()),
        drift=word_excess(b.period),
        window_min=int(window.min()),
        window_zero_positions=tuple(zeros.tolist()),
    )


@dataclass(frozen=True)
class BalanceSet:
    """Balance points {0} + {j : D_j = 0}.

    ``points`` is sorted and starts with 0.  For an infinite set, ``anchor``
    is the first point from which the set repeats with (minimal) ``period``,
    and ``points`` lists every point up to ``anchor + period``.
    """

    points: tuple
    anchor: "int | None" = None
    period: "int | None" = None

    @property
    def finite(self) -> bool:
        return self.period is None

    @property
    def kind(self) -> str:
        return "finite" if self.finite else "periodic"

    def __contains__(self, j: int) -> bool:
        if self.finite or j <= self.anchor + self.period:
            return j in self._lookup
        return self.anchor + (j - self.anchor) % self.period in self._lookup

    @property
    def _lookup(self) -> frozenset:
        cached = self.__dict__.get("_lookup_cache")
        if cached is None:
            cached = frozenset(self.points)
            object.__setattr__(self, "_lookup_cache", cached)
        return cached

    @property
    def per_period(self) -> int:
        """Balance points in one period of the repeating part."""
        if self.finite:
            return 0
        return sum(1 for c in self.points if c > self.anchor)

    def iter_points(self) -> Iterator[int]:
        if self.finite:
            yield from self.points
            return
        yield from (c for c in self.points if c <= self.anchor)
        cycle = [c - self.anchor for c in self.points if c > self.anchor]
        base = self.anchor
        while True:
            for off in cycle:
                yield base + off
            base += self.period

    def points_upto(self, n: int) -> list:
        out = []
        for c in self.iter_points():
            if c > n:
                break
            out.append(c)
        return out


def _balance_set(points, anchor=None, period=None) -> BalanceSet:
    if period is None:
        return BalanceSet(tuple(sorted(points)))
    pts = sorted(points)
    members = set(pts)
    # pull the anchor back while the set is already periodic from an earlier point
    while True:
        earlier = [c for c in pts if c < anchor]
        if not earlier:
            break
        p = earlier[-1]
        if all(((j in members) == ((j + period) in members)) for j in range(p, anchor)):
            anchor = p
        else:
            break
    pts = [c for c in pts if c <= anchor + period]
    return BalanceSet(tuple(pts), anchor, period)


def balance_set(b: BinExp) -> BalanceSet:
    """Balance set of ``b``, decided from one preperiod and one period."""
    s, r = b.s, b.r
    d = excess(b.preperiod + b.period)
    head = [0] + (np.flatnonzero(d[:s] == 0) + 1).tolist()
    tail = d[s:]
    drift = word_excess(b.period)
    if drift != 0:
        # D_{s+tr+i} = tail[i-1] + t*drift vanishes iff -tail[i-1]/drift is a whole t >= 0
        ok = (tail % drift == 0) & (-tail // drift >= 0)
        extra = []
        for i in np.flatnonzero(ok).tolist():
            t = -int(tail[i]) // drift
            extra.append(s + t * r + i + 1)
        return _balance_set(set(head) | set(extra))
    zero_idx = np.flatnonzero(tail == 0)
    d_s = int(d[s - 1]) if s else 0
    if len(zero_idx) == 0:
        return _balance_set(head)
    if d_s == 0:
        anchor = s
    else:
        anchor = s + int(zero_idx[0]) + 1
    pattern = "".join("1" if v == 0 else "0" for v in tail.tolist())
    # rotate the one-period zero pattern so it starts just after the anchor
    off = anchor - s
    pattern = pattern[off:] + pattern[:off]
    period = len(_primitive_root(pattern))
    window = [anchor + i + 1 for i, c in enumerate(pattern[:period]) if c == "1"]
    return _balance_set(set(head) | {anchor} | set(window), anchor, period)


def random_rational(rng, max_den: int) -> Fraction:
    """Uniform denominator in [1, max_den], then a uniform numerator in [0, q]."""
    q = rng.randint(1, max_den)
    return Fraction(rng.randint(0, q), q)


def dyadics(n: int) -> Iterator[Fraction]:
    """k / 2^n for k = 0..2^n."""
    return (Fraction(k, 1 << n) for k in range((1 << n) + 1))


def expansions(x: Fraction) -> list:
    """Every binary expansion of ``x`` (two for interior dyadic rationals)."""
    low = binexp_of_rational(x)
    other = low.other_variant()
    return [low] if other is None else [low, other]


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)
