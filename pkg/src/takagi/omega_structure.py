"""The deficient digit set Omega^L = {x : D_j(x) >= 0 for all j}.

Omega^L is the set of left endpoints of local level sets.  It is a
measure-zero subset of [0, 1/3] whose complement in [0, 1) is a union of
open gap intervals, one for each small balanced breakpoint.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Union

from .core_numbers import (
    BinExp,
    DomainError,
    ResourceError,
    Variant,
    binexp_of_rational,
    check_unit,
    digit_profile,
    excess,
    format_rat,
)
from .takagi_eval import takagi_exact

BREAKPOINT_CAP = 12
GAP_CAP = 24


def in_omega_L(b: BinExp) -> bool:
    """D_j >= 0 for every j >= 1.

    Past the preperiod, D over each window of r digits is the previous
    window's values plus the drift, so one window decides the tail.
    """
    p = digit_profile(b)
    return p.drift >= 0 and min(p.prefix_D) >= 0


def in_half_omega_L(b: BinExp) -> bool:
    """D_j > 0 for every j >= 1, i.e. b is x/2 for some x in Omega^L."""
    p = digit_profile(b)
    return p.drift >= 0 and min(p.prefix_D) > 0


def omega_variant(x: Fraction) -> Optional[Variant]:
    """Which expansion of x, if any, lies in Omega^L (at most one does)."""
    x = check_unit(x)
    for variant in Variant:
        try:
            b = binexp_of_rational(x, variant)
        except DomainError:
            continue
        if in_omega_L(b):
            return variant
    return None


def in_omega_L_rat(x: Fraction) -> bool:
    return omega_variant(x) is not None


def first_negative(b: BinExp) -> Optional[int]:
    """The least j with D_j < 0, or None if b is in Omega^L."""
    p = digit_profile(b)
    for j, d in enumerate(p.prefix_D, 1):
        if d < 0:
            return j
    if p.drift >= 0:
        return None
    # window position i first goes negative after t = floor(W_i / -drift) + 1 rounds
    best = None
    for i in range(p.r):
        d = p.prefix_D[p.s + i]
        j = p.s + (d // -p.drift + 1) * p.r + i + 1
        if best is None or j < best:
            best = j
    return best


def project_omega_L(x: Union[BinExp, Fraction]) -> Union[BinExp, Fraction]:
    """P^L(x): the largest point of Omega^L that is <= x.

    With n + 1 the first index where D goes negative the answer is
    0.b_1..b_n(01).  A rational argument gives a rational result.
    """
    if not isinstance(x, BinExp):
        return project_omega_L(binexp_of_rational(check_unit(x))).value
    j = first_negative(x)
    if j is None:
        return x
    return BinExp(x.digits(j - 1), "01")


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


@dataclass(frozen=True)
class Breakpoint:
    """A balanced dyadic rational 0.b_1..b_2m in Omega^L with D_2m = 0."""

    value: Fraction
    bits: str
    half_m: int

    @property
    def two_m(self) -> int:
        return 2 * self.half_m

    @property
    def small(self) -> bool:
        """Ends in two ones; these label the gap intervals."""
        return self.bits.endswith("11")

    @classmethod
    def of_bits(cls, bits: str) -> "Breakpoint":
        if len(bits) % 2 or (bits and (excess(bits).min() < 0 or excess(bits)[-1] != 0)):
            raise DomainError(f"{bits!r} is not a balanced nonnegative word")
        value = Fraction(int(bits, 2), 1 << len(bits)) if bits else Fraction(0)
        return cls(value, bits, len(bits) // 2)


EMPTY_BREAKPOINT = Breakpoint(Fraction(0), "", 0)


def _dyck_words(m: int):
    """Balanced words of length 2m with nonnegative excess, in increasing order."""
    n = 2 * m
    out = []

    def grow(prefix, zeros, ones):
        if zeros + ones == n:
            out.append(prefix)
            return
        if zeros < m:
            grow(prefix + "0", zeros + 1, ones)
        if ones < zeros:
            grow(prefix + "1", zeros, ones + 1)

    grow("", 0, 0)
    return out


def enumerate_breakpoints(m: int, cap: int = BREAKPOINT_CAP) -> list:
    """All C_m breakpoints with 2m digits, in increasing numeric order."""
    if m < 0:
        raise DomainError("m must be a natural number")
    if m > cap:
        raise ResourceError(f"m = {m} exceeds the enumeration cap {cap}")
    return [
        Breakpoint(Fraction(int(w, 2), 1 << (2 * m)) if w else Fraction(0), w, m)
        for w in _dyck_words(m)
    ]


@dataclass(frozen=True)
class GapInterval:
    """The open interval (x_minus, x_plus) removed from [0, 1) for breakpoint B."""

    B: Breakpoint
    x_minus: Fraction
    x_plus: Fraction

    @property
    def two_m(self) -> int:
        return self.B.two_m

    @property
    def length(self) -> Fraction:
        return self.x_plus - self.x_minus

    def __contains__(self, x) -> bool:
        return self.x_minus < x < self.x_plus


def gap_interval(B: Breakpoint) -> GapInterval:
    """I_B for B = 0.w 0 1^k with k >= 2, or the empty breakpoint."""
    if B.half_m == 0:
        return GapInterval(B, Fraction(1, 3), Fraction(1))
    if not B.small:
        raise DomainError(f"{B.bits} does not end in two ones")
    k = len(B.bits) - len(B.bits.rstrip("1"))
    w = B.bits[: -k - 1]
    x_minus = BinExp(B.bits, "01").value
    x_plus = BinExp(w + "1" + "0" * k).value
    return GapInterval(B, x_minus, x_plus)


def enumerate_gap_intervals(max_2m: int, cap: int = GAP_CAP) -> list:
    """Gap intervals with 2m <= max_2m: B_empty first, then by 2m and position."""
    if max_2m < 0 or max_2m % 2:
        raise DomainError("max_2m must be an even natural number")
    if max_2m > cap:
        raise ResourceError(f"2m = {max_2m} exceeds the enumeration cap {cap}")
    out = [gap_interval(EMPTY_BREAKPOINT)]
    for m in range(2, max_2m // 2 + 1):
        out.extend(gap_interval(B) for B in enumerate_breakpoints(m, cap // 2) if B.small)
    return out


GAP_CSV_HEADER = ("two_m", "B", "x_minus", "x_plus", "tau_x_minus", "tau_x_plus")


def gap_row(g: GapInterval) -> tuple:
    return (
        str(g.two_m),
        format_rat(g.B.value),
        format_rat(g.x_minus),
        format_rat(g.x_plus),
        format_rat(takagi_exact(g.x_minus)),
        format_rat(takagi_exact(g.x_plus)),
    )


def gaps_csv(gaps) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(GAP_CSV_HEADER)
    w.writerows(gap_row(g) for g in gaps)
    return buf.getvalue()


def cover_measure_bound(m: int) -> Fraction:
    """C_m / 4^m: Omega^L is covered by the C_m dyadic boxes of its 2m-digit prefixes."""
    if m < 1:
        raise DomainError("m must be >= 1")
    return Fraction(catalan(m), 1 << (2 * m))


class Direction(enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


def monotone_approximants(b: BinExp, direction: Direction, count: int) -> list:
    """Points of Omega^L converging monotonically to b.

    Increasing: truncations 0.b_1..b_m (0) at indices with D_m > 0, all with
    tau below tau(b).  Decreasing: 0.b_1..b_m (01) at indices m where D never
    again drops below D_m, all with tau above tau(b).  Repeated values are
    dropped, and so is the trivial truncation 0.
    """
    if not in_omega_L(b):
        raise DomainError("no such sequence exists: b is not in Omega^L")
    inc = direction is Direction.INCREASING
    if inc and b.terminates:
        raise DomainError("no such sequence exists: expansion ends in 0^inf")
    if not inc and b.period in ("01", "10"):
        raise DomainError("no such sequence exists: expansion ends in (01)^inf")
    p = digit_profile(b)
    target = takagi_exact(b)
    out, last = [], None
    j = 0
    while len(out) < count:
        j += 1
        if j > p.s + (count + 2) * p.r * (count + 2) + 64:
            raise AssertionError("approximant search did not terminate")
        d = p.D(j)
        if inc:
            if d <= 0:
                continue
            cand = BinExp(b.digits(j))
        else:
            # D past j is minimal within one window, since drift >= 0
            if any(p.D(i) < d for i in range(j + 1, max(j, p.s) + p.r + 1)):
                continue
            cand = BinExp(b.digits(j), "01")
        value = cand.value
        if value == last or (inc and value == 0):
            continue
        tau = takagi_exact(cand)
        if (tau >= target) if inc else (tau <= target):
            raise AssertionError(f"approximant {cand} breaks the tau inequality")
        out.append(cand)
        last = value
    return out
