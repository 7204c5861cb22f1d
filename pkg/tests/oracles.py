"""Slow reference implementations used only by the tests.

None of these share code with the package: digits come from long division,
tau from the orbit of x under doubling.
"""

from fractions import Fraction


def digits(x: Fraction, n: int) -> list:
    """First n binary digits of x in [0, 1) by long division (x = 1 gives all ones)."""
    if x == 1:
        return [1] * n
    p, q = x.numerator, x.denominator
    out = []
    for _ in range(n):
        p *= 2
        out.append(p // q)
        p %= q
    return out


def deficient(ds: list) -> list:
    """[D_1, ..., D_n] for a digit list."""
    out, d = [], 0
    for b in ds:
        d += 1 - 2 * b
        out.append(d)
    return out


def dist_to_int(x: Fraction) -> Fraction:
    f = x - (x.numerator // x.denominator)
    return min(f, 1 - f)


def tau_orbit(x: Fraction) -> Fraction:
    """tau(x) = sum_j <<2^j x>> / 2^j summed in closed form over the eventually
    periodic orbit of frac(2^j x)."""
    seen = {}
    orbit = []
    y = x - (x.numerator // x.denominator) if x != 1 else Fraction(0)
    while y not in seen:
        seen[y] = len(orbit)
        orbit.append(y)
        y = 2 * y
        y -= y.numerator // y.denominator
    start = seen[y]
    head = sum((dist_to_int(v) / 2**j for j, v in enumerate(orbit[:start])), Fraction(0))
    cyc = orbit[start:]
    r = len(cyc)
    body = sum((dist_to_int(v) / 2**j for j, v in enumerate(cyc)), Fraction(0))
    return head + body / 2**start / (1 - Fraction(1, 2**r))


def tau_dyadic_grid(n: int) -> list:
    """tau(k / 2^n) for every k by the finite sum (later terms vanish)."""
    out = []
    for k in range(2**n + 1):
        x = Fraction(k, 2**n)
        out.append(sum((dist_to_int(x * 2**j) / 2**j for j in range(n)), Fraction(0)))
    return out


def expansion_digits(b, n: int) -> list:
    """First n digits of a BinExp read straight off its words."""
    word = b.preperiod
    while len(word) < n:
        word += b.period
    return [int(c) for c in word[:n]]


def balance_points(ds: list) -> list:
    return [0] + [j for j, d in enumerate(deficient(ds), 1) if d == 0]
