"""The flattened Takagi function, the Takagi singular function, and exact
variation / coarea computations on piecewise-linear samples.

tau^L agrees with tau on Omega^L and falls with slope -1 across every gap
interval; tau^S = tau^L + x is continuous, nondecreasing and singular.  The
total variation of tau^L is 2, and by the coarea formula the mean number of
local level sets on a random level in [0, 2/3] is (3/4) * 2 = 3/2.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .core_numbers import (
    DomainError,
    ResourceError,
    binexp_of_rational,
    check_unit,
    format_value,
)
from .omega_structure import project_omega_L
from .takagi_eval import takagi_exact

SAMPLE_CAP = 20
_INT64_SAFE = 1 << 62


class DegenerateLevelError(DomainError):
    """The level t equals a sampled value; perturb t and retry."""


def _flatten(x: Fraction):
    b = binexp_of_rational(check_unit(x))
    xb = project_omega_L(b)
    return xb.value, takagi_exact(xb)


def flattened_takagi(x: Fraction) -> Fraction:
    """tau^L(x) = tau(x_b) - (x - x_b) with x_b = P^L(x)."""
    xb, tau_b = _flatten(x)
    return tau_b - (x - xb)


def takagi_singular(x: Fraction) -> Fraction:
    """tau^S(x) = tau^L(x) + x = tau(x_b) + x_b."""
    xb, tau_b = _flatten(x)
    return tau_b + xb


@dataclass(frozen=True)
class FunctionTag:
    kind: str
    n: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("tauL", "tauS", "partial"):
            raise ValueError(f"unknown function {self.kind!r}")
        if (self.kind == "partial") != (self.n is not None):
            raise ValueError("only the partial sums take an order n")
        if self.n is not None and self.n < 0:
            raise ValueError("n must be a natural number")

    def __str__(self):
        return f"partial:{self.n}" if self.kind == "partial" else self.kind

    @classmethod
    def parse(cls, text: str) -> "FunctionTag":
        if text.startswith("partial:"):
            return cls("partial", int(text.split(":", 1)[1]))
        return cls(text)


TAU_L = FunctionTag("tauL")
TAU_S = FunctionTag("tauS")


def tau_partial(n: int) -> FunctionTag:
    return FunctionTag("partial", n)


class PLFunction:
    """Linear interpolation through (grid[i], values[i]); grid runs from 0 to 1."""

    __slots__ = ("grid", "values", "_scaled")

    def __init__(self, grid, values):
        grid, values = tuple(grid), tuple(values)
        if len(grid) != len(values) or len(grid) < 2:
            raise ValueError("grid and values must have the same length >= 2")
        if grid[0] != 0 or grid[-1] != 1:
            raise ValueError("grid must start at 0 and end at 1")
        if any(a >= b for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        self.grid, self.values = grid, values
        self._scaled = None

    @classmethod
    def _from_scaled(cls, depth: int, nums: np.ndarray) -> "PLFunction":
        den = 1 << depth
        f = cls.__new__(cls)
        f.grid = tuple(Fraction(k, den) for k in range(den + 1))
        f.values = tuple(Fraction(int(v), den) for v in nums)
        f._scaled = (nums, den)
        return f

    def __len__(self):
        return len(self.grid)

    def __eq__(self, other):
        return isinstance(other, PLFunction) and (self.grid, self.values) == (other.grid, other.values)

    def __hash__(self):
        return hash((self.grid, self.values))

    def __call__(self, x: Fraction) -> Fraction:
        x = check_unit(x)
        lo, hi = 0, len(self.grid) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.grid[mid] <= x:
                lo = mid
            else:
                hi = mid
        if x == self.grid[lo]:
            return self.values[lo]
        x0, x1 = self.grid[lo], self.grid[hi]
        y0, y1 = self.values[lo], self.values[hi]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def scaled(self):
        """(nums, den) with values[i] = nums[i] / den, nums an integer array."""
        if self._scaled is None:
            den = math.lcm(*(v.denominator for v in self.values))
            nums = [v.numerator * (den // v.denominator) for v in self.values]
            big = max(abs(n) for n in nums) * len(nums) >= _INT64_SAFE
            self._scaled = (np.array(nums, dtype=object if big else np.int64), den)
        return self._scaled


def _grid_slopes(depth: int, n: int) -> np.ndarray:
    """2^depth * (tau_n at k+1 minus tau_n at k) / 2^-depth: the slope of tau_n on
    [k/2^depth, (k+1)/2^depth], which is D_m of the first m = min(n, depth) digits."""
    k = np.arange(1 << depth, dtype=np.int64)
    m = min(n, depth)
    return m - 2 * np.bitwise_count(k >> (depth - m)).astype(np.int64)


def _tau_grid(depth: int, n: Optional[int] = None) -> np.ndarray:
    """2^depth * tau_n(k / 2^depth) for k = 0..2^depth (n = None: tau itself)."""
    slopes = _grid_slopes(depth, depth if n is None else n)
    out = np.zeros((1 << depth) + 1, dtype=np.int64)
    np.cumsum(slopes, out=out[1:])
    return out


def _flattened_grid(depth: int) -> np.ndarray:
    """2^depth * tau^L(k / 2^depth) for k = 0..2^depth.

    If D first goes negative at digit n + 1 of k / 2^depth, then with p the
    n-digit truncation, x_b = p + 2^-n / 3 and tau(x_b) = tau(p) + 2^-n * 2/3,
    so tau^L = tau(p) + p - x + 2^-n, a multiple of 2^-depth.
    """
    size = 1 << depth
    tau = _tau_grid(depth)
    k = np.arange(size, dtype=np.int64)
    d = np.zeros(size, dtype=np.int64)
    first = np.zeros(size, dtype=np.int64)
    for j in range(1, depth + 1):
        d += 1 - 2 * ((k >> (depth - j)) & 1)
        first[(d < 0) & (first == 0)] = j
    out = np.empty(size + 1, dtype=np.int64)
    inside = first == 0
    out[:size][inside] = tau[:size][inside]
    kk, n = k[~inside], first[~inside] - 1
    shift = depth - n
    p = (kk >> shift) << shift
    out[:size][~inside] = tau[p] + p - kk + (np.int64(1) << shift)
    out[size] = 0
    return out


@lru_cache(maxsize=8)
def sample_pl(f: FunctionTag, depth: int, cap: int = SAMPLE_CAP) -> PLFunction:
    """Exact values of f on the grid k / 2^depth, as a PL function."""
    if depth < 0:
        raise ValueError("depth must be a natural number")
    if depth > cap:
        raise ResourceError(f"depth {depth} exceeds the sampling cap {cap}")
    if f.kind == "partial":
        nums = _tau_grid(depth, f.n)
    else:
        nums = _flattened_grid(depth)
        if f.kind == "tauS":
            nums = nums + np.arange((1 << depth) + 1, dtype=np.int64)
    return PLFunction._from_scaled(depth, nums)


def total_variation(f: PLFunction) -> Fraction:
    """Sum of |f(x_{i+1}) - f(x_i)|, the exact variation of a PL function."""
    nums, den = f.scaled()
    return Fraction(int(np.abs(np.diff(nums)).sum()), den)


def upper_set_perimeter(f: PLFunction, t: Fraction) -> int:
    """Number of boundary points in (0, 1) of {x : f(x) > t}."""
    nums, den = f.scaled()
    t = Fraction(t)
    lhs_big = nums.dtype == object or int(np.abs(nums).max()) * t.denominator >= _INT64_SAFE
    if lhs_big or abs(t.numerator) * den >= _INT64_SAFE:
        lhs = np.array([int(v) * t.denominator for v in nums], dtype=object)
        rhs = t.numerator * den
    else:
        lhs = nums * np.int64(t.denominator)
        rhs = np.int64(t.numerator * den)
    if np.any(lhs == rhs):
        raise DegenerateLevelError(f"level {t} equals a sampled value; perturb it")
    above = lhs > rhs
    return int(np.count_nonzero(above[1:] != above[:-1]))


def coarea_integral(f: PLFunction) -> Fraction:
    """The integral over t of upper_set_perimeter(f, t), by sweeping levels.

    Between consecutive distinct sample values u_a < u_{a+1} the perimeter
    is the number of segments whose value span covers (u_a, u_{a+1}).
    """
    nums, den = f.scaled()
    a, b = nums[:-1], nums[1:]
    lo = np.sort(np.minimum(a, b))
    hi = np.sort(np.maximum(a, b))
    levels = np.unique(nums)
    if len(levels) < 2:
        return Fraction(0)
    below = levels[:-1]
    counts = np.searchsorted(lo, below, side="right") - np.searchsorted(hi, below, side="right")
    gaps = np.diff(levels)
    total = sum(int(c) * int(g) for c, g in zip(counts.tolist(), gaps.tolist()) if c)
    return Fraction(total, den)


def local_level_count_estimate(t: Fraction, depth: int) -> int:
    """Grid estimate of the number of local level sets on level t.

    Half the perimeter of {tau^L > t} for the depth-``depth`` sample.  This
    is an estimate: the exact count needs the gap structure at every scale.
    """
    return upper_set_perimeter(sample_pl(TAU_L, depth), t) // 2


def random_levels(seed: int, count: int, depth: int) -> list:
    """``count`` levels in (0, 2/3) avoiding every value of a depth-``depth`` sample.

    Each is an odd multiple of 2^-(depth+6), while sampled values are
    multiples of 2^-depth.
    """
    rng = random.Random(seed)
    scale = 1 << (depth + 6)
    top = (2 * scale) // 3  # odd multiples below this stay under 2/3
    return [Fraction(2 * rng.randrange(top // 2) + 1, scale) for _ in range(count)]


def mean_count_estimate(depth: int, samples: int, seed: int) -> Fraction:
    levels = random_levels(seed, samples, depth)
    return Fraction(sum(local_level_count_estimate(t, depth) for t in levels), samples)


def mean_count_exact(depth: int) -> Fraction:
    """(3/2) * integral of the estimate over (0, 2/3) = (3/4) * variation."""
    return Fraction(3, 4) * coarea_integral(sample_pl(TAU_L, depth))


def sweep_rows(depth: int, digits: Optional[int] = None) -> Iterable[tuple]:
    """(x, tau, tauL, tauS) on the grid k / 2^depth."""
    den = 1 << depth
    tau = _tau_grid(depth)
    flat = _flattened_grid(depth)
    for k in range(den + 1):
        x = Fraction(k, den)
        yl = Fraction(int(flat[k]), den)
        yield tuple(
            format_value(v, digits)
            for v in (x, Fraction(int(tau[k]), den), yl, yl + x)
        )


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def sweep_csv(depth: int, digits: Optional[int] = None) -> str:
    return _csv(("x", "tau", "tauL", "tauS"), sweep_rows(depth, digits))


def level_count_csv(levels, depth: int, digits: Optional[int] = None) -> str:
    rows = ((format_value(t, digits), local_level_count_estimate(t, depth)) for t in levels)
    return _csv(("t", "N_estimate"), rows)

