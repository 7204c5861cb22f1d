import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import expansions, unit_rationals
from oracles import balance_points, deficient, digits, expansion_digits
from takagi.core_numbers import (
    BinExp,
    DomainError,
    Variant,
    balance_set,
    binexp_of_rational,
    deficient_digit,
    digit_profile,
    digit_sum,
    format_rat,
    format_value,
    parse_binexp,
    parse_point,
    parse_rat,
    rational_of_binexp,
)


def test_canonical_form():
    assert BinExp("0101", "01") == BinExp("", "01")
    assert BinExp("0011", "0101") == BinExp("001", "10")
    assert BinExp("01", "000") == BinExp("01", "0")
    assert BinExp("0", "1") != BinExp("1", "0")
    assert str(BinExp("", "0011")) == "0.(0011)"


def test_invalid_words():
    with pytest.raises(ValueError):
        BinExp("012")


@given(expansions())
def test_canonical_preserves_digits(b):
    raw = expansion_digits(b, 40)
    c = BinExp(b.preperiod + b.period * 3, b.period * 2)
    assert c == b
    assert expansion_digits(c, 40) == raw


@pytest.mark.parametrize(
    "x, text",
    [
        (Fraction(1, 3), "0.(01)"),
        (Fraction(1, 5), "0.(0011)"),
        (Fraction(1, 4), "0.01(0)"),
        (Fraction(0), "0.(0)"),
        (Fraction(1), "0.(1)"),
        (Fraction(1, 6), "0.0(01)"),
    ],
)
def test_binexp_of_rational(x, text):
    assert str(binexp_of_rational(x)) == text


def test_high_tail():
    assert str(binexp_of_rational(Fraction(1, 2), Variant.HIGH_TAIL)) == "0.0(1)"
    assert str(binexp_of_rational(Fraction(3, 4), Variant.HIGH_TAIL)) == "0.10(1)"
    with pytest.raises(DomainError):
        binexp_of_rational(Fraction(1, 3), Variant.HIGH_TAIL)
    with pytest.raises(DomainError):
        binexp_of_rational(Fraction(0), Variant.HIGH_TAIL)


def test_out_of_range():
    with pytest.raises(DomainError):
        binexp_of_rational(Fraction(3, 2))
    with pytest.raises(DomainError):
        binexp_of_rational(Fraction(-1, 2))


@given(unit_rationals())
def test_round_trip(x):
    b = binexp_of_rational(x)
    assert rational_of_binexp(b) == x
    assert parse_binexp(str(b)) == b


@given(unit_rationals())
def test_digits_match_long_division(x):
    if x == 1:
        return
    b = binexp_of_rational(x)
    assert expansion_digits(b, 60) == digits(x, 60)


@given(unit_rationals(max_den=2**12))
def test_other_variant_same_value(x):
    b = binexp_of_rational(x)
    other = b.other_variant()
    if other is not None:
        assert other.value == x
        assert other != b


@given(expansions(), st.integers(1, 80))
def test_deficient_digit(b, j):
    ds = expansion_digits(b, j)
    assert deficient_digit(b, j) == deficient(ds)[-1]
    assert digit_sum(b, j) == sum(ds)
    assert digit_profile(b).D(j) == deficient(ds)[-1]


@given(expansions())
def test_balance_set_matches_scan(b):
    z = balance_set(b)
    n = b.s + 6 * b.r + 40
    scan = balance_points(expansion_digits(b, n))
    assert z.points_upto(n) == scan
    for j in range(n + 1):
        assert (j in z) == (j in scan)


@pytest.mark.parametrize(
    "text, points, anchor, period",
    [
        ("0.(01)", (0, 2), 0, 2),
        ("0.0011", (0, 4), None, None),
        ("0.(0011)", (0, 4), 0, 4),
        ("0.01(10)", (0, 2), 0, 2),
        ("0.1", (0, 2), None, None),
        ("0.0(01)", (0,), None, None),
    ],
)
def test_balance_set_examples(text, points, anchor, period):
    z = balance_set(parse_binexp(text))
    assert (z.points, z.anchor, z.period) == (points, anchor, period)


def test_parsers():
    assert parse_rat("3/16") == Fraction(3, 16)
    assert parse_rat("1") == 1
    assert isinstance(parse_point("0.01"), BinExp)
    assert parse_point("1/3") == Fraction(1, 3)
    with pytest.raises(ValueError):
        parse_rat("0.5")
    with pytest.raises(ValueError):
        parse_binexp("0.2")


def test_format():
    assert format_rat(Fraction(2, 3)) == "2/3"
    assert format_value(Fraction(2, 3), 4) == "0.6667"
    assert format_value(Fraction(-1, 8), 2) == "-0.12"
    assert format_value(Fraction(5, 2), 0) == "2"


def test_random_rationals_in_range():
    from takagi.core_numbers import random_rational

    rng = random.Random(1)
    for _ in range(200):
        x = random_rational(rng, 1000)
        assert 0 <= x <= 1 and x.denominator <= 1000


def test_spec_expansions():
    assert binexp_of_rational(Fraction(5, 24)) == BinExp("0011", "01")
    assert binexp_of_rational(Fraction(1, 4), Variant.HIGH_TAIL) == BinExp("00", "1")
    assert rational_of_binexp(BinExp("0011", "01")) == Fraction(5, 24)
    assert rational_of_binexp(BinExp("0", "01")) == Fraction(1, 6)


def test_deficient_digit_examples():
    b = parse_binexp("0.0011")
    assert [deficient_digit(b, j) for j in range(1, 5)] == [1, 2, 1, 0]
    third = parse_binexp("0.(01)")
    assert all(deficient_digit(third, 2 * k) == 0 for k in range(1, 20))
    assert all(deficient_digit(third, 2 * k + 1) == 1 for k in range(20))
    assert deficient_digit(parse_binexp("0.10"), 1) == -1


def test_digit_profile_examples():
    p = digit_profile(parse_binexp("0.(01)"))
    assert (p.drift, p.window_min) == (0, 0)
    p = digit_profile(parse_binexp("0.(0011)"))
    assert (p.drift, p.window_min, p.window_zero_positions) == (0, 0, (4,))
    p = digit_profile(parse_binexp("0.1"))
    assert p.prefix_D[0] == -1 and p.drift == 1
