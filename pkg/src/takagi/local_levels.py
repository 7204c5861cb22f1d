"""Blocks, block flips and local level sets.

Two expansions are equivalent when they have the same balance points and,
between each pair of consecutive balance points, the same digits or the
complementary digits.  Every equivalence class (a local level set) lies in a
single level set of tau and has a unique member with all D_j >= 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .core_numbers import (
    BalanceSet,
    BinExp,
    DomainError,
    ResourceError,
    balance_set,
    binexp_of_rational,
    check_unit,
    complement_word,
    excess,
    lcm,
)
from .takagi_eval import takagi_exact

INF = math.inf

# largest digit horizon the finite-time equivalence check will scan
MAX_HORIZON = 1 << 22


def _tail_period(b: BinExp, n: int) -> str:
    """The period word as it reads from digit n + 1 on, for n >= s."""
    rot = (n - b.s) % b.r
    return b.period[rot:] + b.period[:rot]


@dataclass(frozen=True)
class Block:
    """Digits start+1 .. end of an expansion.

    The last block of a finite balance set is unbounded: ``end`` is None and
    its digits are ``word`` followed by ``tail_period`` repeated forever.
    """

    start: int
    end: Optional[int]
    word: str
    tail_period: Optional[str] = None

    @property
    def unbounded(self) -> bool:
        return self.end is None

    def __str__(self):
        if self.unbounded:
            return f"{self.word}({self.tail_period})"
        return self.word


@dataclass(frozen=True)
class BlockDecomposition:
    """The blocks of an expansion.

    ``head`` lists the leading blocks.  For an infinite balance set the
    blocks in ``cycle`` then repeat forever, shifted ``shift`` digits per
    round; otherwise ``cycle`` is empty and the last head block is unbounded.
    """

    head: tuple
    cycle: tuple = ()
    shift: int = 0

    @property
    def finite(self) -> bool:
        return not self.cycle

    def __len__(self):
        if not self.finite:
            raise TypeError("infinitely many blocks")
        return len(self.head)

    def __getitem__(self, k: int) -> Block:
        if k < 0:
            raise IndexError("block index must be >= 0")
        if k < len(self.head):
            return self.head[k]
        if self.finite:
            raise IndexError(f"block {k} out of range ({len(self.head)} blocks)")
        rnd, i = divmod(k - len(self.head), len(self.cycle))
        blk = self.cycle[i]
        off = rnd * self.shift
        return Block(blk.start + off, blk.end + off, blk.word)

    def __iter__(self) -> Iterator[Block]:
        if self.finite:
            return iter(self.head)
        return (self[k] for k in itertools.count())


def _cycle_start(b: BinExp, z: BalanceSet) -> int:
    """First balance point at or after the preperiod (infinite sets only)."""
    for c in z.iter_points():
        if c >= b.s:
            return c
    raise AssertionError("unreachable: infinite balance set")


def blocks(b: BinExp) -> BlockDecomposition:
    z = balance_set(b)
    if z.finite:
        pts = z.points
        head = [Block(c, d, b.digits(d)[c:]) for c, d in zip(pts, pts[1:])]
        last = pts[-1]
        n = max(last, b.s)
        head.append(Block(last, None, b.digits(n)[last:], _tail_period(b, n)))
        return BlockDecomposition(tuple(head))
    # past the preperiod the balance set repeats with a period dividing r,
    # so the blocks repeat every r digits
    a = _cycle_start(b, z)
    upto = z.points_upto(a + b.r)
    digits = b.digits(a + b.r)
    pairs = list(zip(upto, upto[1:]))
    head = tuple(Block(c, d, digits[c:d]) for c, d in pairs if d <= a)
    cycle = tuple(Block(c, d, digits[c:d]) for c, d in pairs if c >= a)
    return BlockDecomposition(head, cycle, b.r)


def _flip_range(b: BinExp, start: int, end: Optional[int]) -> BinExp:
    if end is None:
        n = max(start, b.s)
        digits = b.digits(n)
        return BinExp(
            digits[:start] + complement_word(digits[start:]),
            complement_word(_tail_period(b, n)),
        )
    n = max(end, b.s)
    digits = b.digits(n)
    word = digits[:start] + complement_word(digits[start:end]) + digits[end:]
    return BinExp(word, _tail_period(b, n))


def flip_block(b: BinExp, k: int) -> BinExp:
    """Complement the digits of block k; tau and the balance set are unchanged."""
    blk = blocks(b)[k]
    return _flip_range(b, blk.start, blk.end)


def complement(b: BinExp) -> BinExp:
    """Flip every block at once: x -> 1 - x."""
    return b.complement()


def equivalent(b1: BinExp, b2: BinExp) -> bool:
    """True iff b1 and b2 differ by flipping some (possibly infinite) set of blocks."""
    z = balance_set(b1)
    if z != balance_set(b2):
        return False
    # beyond this horizon the digits of both and the block pattern are periodic
    # with period lcm(r1, r2), so any disagreement shows up before it
    base = max(b1.s, b2.s, z.points[-1])
    n = base + 2 * lcm(b1.r, b2.r)
    if n > MAX_HORIZON:
        raise ResourceError(f"equivalence check needs {n} digits")
    d1, d2 = b1.digits(n), b2.digits(n)
    pts = z.points_upto(n)
    for c, d in zip(pts, pts[1:] + [n]):
        w1, w2 = d1[c:d], d2[c:d]
        if w1 != w2 and w1 != complement_word(w2):
            return False
    return True


@dataclass(frozen=True)
class LocalLevelSetDesc:
    """A local level set: its Omega^L member, balance set, size and level.

    ``cardinality`` is 2^K for K balance points, or None when the set is
    uncountable; ``hausdorff_dim`` is then (balance points per period) /
    (period length), and 0 for finite sets.
    """

    left_endpoint: BinExp
    balance: BalanceSet
    cardinality: Optional[int]
    level: Fraction
    hausdorff_dim: Optional[Fraction]

    @property
    def finite(self) -> bool:
        return self.cardinality is not None

    @property
    def block_count(self) -> Optional[int]:
        return len(self.balance.points) if self.finite else None


def _left_endpoint(b: BinExp) -> BinExp:
    dec = blocks(b)
    if dec.finite:
        out = b
        for blk in dec.head:
            first = blk.word[:1] or blk.tail_period[:1]
            if first == "1":
                out = _flip_range(out, blk.start, blk.end)
        return out
    a = dec.cycle[0].start
    digits = b.digits(a + b.r)
    parts = []
    for blk in dec.head + dec.cycle:
        w = digits[blk.start:blk.end]
        parts.append(complement_word(w) if w[0] == "1" else w)
    word = "".join(parts)
    return BinExp(word[:a], word[a:])


def local_level_set(b: Union[BinExp, Fraction]) -> LocalLevelSetDesc:
    if not isinstance(b, BinExp):
        b = binexp_of_rational(check_unit(b))
    z = balance_set(b)
    left = _left_endpoint(b)
    level = takagi_exact(b)
    if z.finite:
        return LocalLevelSetDesc(left, z, 1 << len(z.points), level, Fraction(0))
    dim = Fraction(z.per_period, z.period)
    return LocalLevelSetDesc(left, z, None, level, dim)


def enumerate_members(desc: LocalLevelSetDesc, depth: int = 0, cap: int = 1 << 20) -> list:
    """Members of a local level set, sorted by value.

    A finite set is listed in full.  For an uncountable set, each of the
    first ``depth`` blocks takes both orientations and later blocks keep
    the left-endpoint orientation, giving 2^depth representatives.
    """
    dec = blocks(desc.left_endpoint)
    if desc.finite:
        chosen = list(dec.head)
    else:
        chosen = [dec[k] for k in range(depth)]
    if 1 << len(chosen) > cap:
        raise ResourceError(f"2^{len(chosen)} members exceed the cap {cap}")
    left = desc.left_endpoint
    members = []
    for mask in range(1 << len(chosen)):
        out = left
        for k, blk in enumerate(chosen):
            if mask >> k & 1:
                out = _flip_range(out, blk.start, blk.end)
        members.append(out)
    members.sort(key=lambda m: (m.value, not m.ends_in_ones))
    return members


def level_half_family(k: Union[int, float]) -> Fraction:
    """x_k = 1/2 - sum_{j=1..k} 4^-j, with tau(x_k) = 1/2; k = INF gives 1/6."""
    if k == INF:
        return Fraction(1, 6)
    if k < 0 or int(k) != k:
        raise DomainError("k must be a natural number or INF")
    return Fraction(1, 6) + Fraction(1, 3 << (2 * int(k)))


def balanced_word(bp: Fraction) -> str:
    """The 2m-digit balanced Omega^L word of a breakpoint value.

    Raises DomainError unless bp = 0.w for a word w with D_j >= 0 throughout
    and D = 0 at its end (trailing zeros allowed).
    """
    bp = check_unit(bp, "breakpoint")
    q = bp.denominator
    if q & (q - 1):
        raise DomainError(f"{bp} is not a dyadic rational")
    e = q.bit_length() - 1
    word = format(bp.numerator, f"0{e}b") if e else ""
    ones = word.count("1")
    if bp == 1 or 2 * ones < len(word):
        raise DomainError(f"{bp} is not a balanced breakpoint")
    word = word.ljust(2 * ones, "0")
    if word and excess(word).min() < 0:
        raise DomainError(f"{bp} is not in the deficient digit set")
    return word


def infinite_level_family(bp, k: Union[int, float]) -> tuple:
    """(x_k(B'), y) with x_k(B') = B' + x_k / 4^m and y = tau(B') + 2^-(2m+1).

    ``bp`` is a breakpoint (anything with a ``value``) or its rational value.
    """
    value = getattr(bp, "value", bp)
    word = balanced_word(Fraction(value))
    m = len(word) // 2
    x = Fraction(value) + level_half_family(k) / (1 << (2 * m))
    y = takagi_exact(Fraction(value)) + Fraction(1, 1 << (2 * m + 1))
    return x, y
