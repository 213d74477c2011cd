from sturmlab.arithmetic import (
    CFExpansion,
    LegendreVerdict,
    RationalInterval,
    certified_cf,
    convergent_quality,
    convergents,
    digits_from_rational,
    format_fraction,
    legendre_check,
    parse_fraction,
    rational_cf,
    real_from_digits,
    rebase_digits,
)
from sturmlab.sturmian import fibonacci_word

from fractions import Fraction
import numpy as np
import pytest


GOLDEN = RationalInterval(Fraction(987, 610), Fraction(1597, 987))


def random_rationals(count=100, seed=10):
    rng = np.random.default_rng(seed)
    values = []
    for _ in range(count):
        q = int(rng.integers(2, 10**6))
        values.append(Fraction(int(rng.integers(0, q)), q))
    return values


@pytest.mark.parametrize(
    "x, b, count, expected",
    [
        (Fraction(1, 2), 2, 5, [1, 0, 0, 0, 0]),
        (Fraction(1, 3), 2, 6, [0, 1, 0, 1, 0, 1]),
        (Fraction(1, 3), 3, 4, [1, 0, 0, 0]),
        (Fraction(1, 4), 10, 4, [2, 5, 0, 0]),
        (Fraction(0), 7, 3, [0, 0, 0]),
        (Fraction(255, 256), 16, 3, [15, 15, 0]),
    ]
)
def test_digits_from_rational(x, b, count, expected):
    assert digits_from_rational(x, b, count) == expected


def test_digits_from_rational_errors():
    with pytest.raises(ValueError):
        digits_from_rational(Fraction(1), 2, 3)
    with pytest.raises(ValueError):
        digits_from_rational(Fraction(1, 2), 1, 3)
    with pytest.raises(TypeError):
        digits_from_rational(Fraction(1, 2), 2.0, 3)


@pytest.mark.parametrize("b", [2, 3, 4, 10])
def test_digit_round_trips(b):
    for x in random_rationals():
        digits = digits_from_rational(x, b, 40)
        cell = real_from_digits(digits, b)
        assert cell.lo <= x < cell.hi
        assert digits_from_rational(cell.lo, b, 40) == digits
        for s in (2, 3, 4, 10):
            rebased = rebase_digits(cell, s, 30)
            assert rebased == digits_from_rational(x, s, len(rebased))


@pytest.mark.parametrize("b", [2, 3, 4, 10])
def test_no_trailing_max_digits(b):
    """terminating expansions end in zeros, never in an infinite run of b - 1"""
    rng = np.random.default_rng(b)
    for _ in range(100):
        j = int(rng.integers(1, 6))
        k = int(rng.integers(0, b ** j))
        digits = digits_from_rational(Fraction(k, b ** j), b, j + 10)
        assert digits[j:] == [0] * 10
        assert real_from_digits(digits[:j], b).lo == Fraction(k, b ** j)


def test_real_from_digits():
    assert real_from_digits([1, 0], 2) == RationalInterval(Fraction(1, 2), Fraction(3, 4))
    assert real_from_digits([], 10) == RationalInterval(0, 1)
    with pytest.raises(ValueError):
        real_from_digits([0, 2], 2)


def test_rebase_digits():
    x = RationalInterval(Fraction(9, 32), Fraction(10, 32))
    assert rebase_digits(x, 2, 10) == [0, 1, 0, 0, 1]
    assert rebase_digits(x, 2, 3) == [0, 1, 0]
    assert rebase_digits(RationalInterval(0, 1), 3, 5) == []
    assert rebase_digits(RationalInterval(Fraction(1, 3)), 3, 3) == [1, 0, 0]
    with pytest.raises(ValueError):
        rebase_digits(RationalInterval(Fraction(1, 2), Fraction(3, 2)), 3, 5)


def test_rebase_to_power_base_is_exact():
    """binary digits convert to base 4 without loss"""
    binary = fibonacci_word().prefix(200)
    quaternary = rebase_digits(real_from_digits(binary, 2), 4, 100)
    assert quaternary == [2 * binary[2 * i] + binary[2 * i + 1] for i in range(100)]


@pytest.mark.parametrize(
    "x, expected",
    [
        (Fraction(13, 8), [1, 1, 1, 1, 2]),
        (Fraction(1, 3), [0, 3]),
        (Fraction(-1, 3), [-1, 1, 2]),
        (Fraction(5), [5]),
        (Fraction(355, 113), [3, 7, 16]),
    ]
)
def test_rational_cf(x, expected):
    assert rational_cf(x) == expected
    assert convergents(expected)[-1] == x


def test_cf_expansion():
    cf = CFExpansion([0, 3, 2, 4, 8])
    assert cf.convergents == [Fraction(0), Fraction(1, 3), Fraction(2, 7), Fraction(9, 31), Fraction(74, 255)]
    assert cf.max_partial_quotient == 8
    assert len(cf) == 5
    assert repr(cf) == "CFExpansion([0; 3, 2, 4, 8])"
    assert cf.to_dict()["convergents"][-1] == ["74", "255"]
    assert CFExpansion([]).max_partial_quotient == 0
    with pytest.raises(ValueError):
        CFExpansion([1, 0])


def test_certified_cf_examples():
    assert certified_cf(RationalInterval(Fraction(13, 8))) == CFExpansion([1, 1, 1, 1, 2])
    assert certified_cf(RationalInterval(0, Fraction(1, 1024))) == CFExpansion([0])
    assert certified_cf(RationalInterval(0, 1)) == CFExpansion([])


@pytest.mark.parametrize("L", [10, 50, 200, 400])
def test_certified_cf_is_shared(L):
    """every real in the enclosure has the certified quotients as a prefix of its expansion"""
    x = real_from_digits(fibonacci_word().prefix(L), 2)
    cf = certified_cf(x)
    assert len(cf) >= 2
    for k in range(1, 100):
        y = x.lo + x.width * Fraction(k, 100)
        assert rational_cf(y)[:len(cf)] == cf.partial_quotients


def test_certified_cf_grows_with_precision():
    lengths = [len(certified_cf(real_from_digits(fibonacci_word().prefix(L), 2))) for L in (50, 100, 200, 400)]
    assert lengths == sorted(lengths)
    assert certified_cf(real_from_digits(fibonacci_word().prefix(400), 2)).partial_quotients[:5] == [0, 3, 2, 4, 8]


def test_legendre_check():
    assert legendre_check(GOLDEN, Fraction(13, 8)) is LegendreVerdict.FORCED_CONVERGENT
    assert legendre_check(GOLDEN, Fraction(13, 9)) is LegendreVerdict.INCONCLUSIVE
    assert legendre_check(RationalInterval(Fraction(1, 3)), "1/3") is LegendreVerdict.FORCED_CONVERGENT


def test_convergent_quality():
    x = real_from_digits(fibonacci_word().prefix(400), 2)
    df = convergent_quality(x, certified_cf(x))
    assert list(df.columns) == ["j", "p", "q", "verified", "refuted"]
    assert not df["refuted"].any()
    # small denominators sit far from the interval edges
    assert df["verified"][:3].all()


def test_interval():
    x = RationalInterval(Fraction(1, 2), Fraction(3, 4))
    assert x.width == Fraction(1, 4)
    assert x.contains(Fraction(2, 3))
    assert not x.contains(1)
    assert x.max_distance(0) == Fraction(3, 4)
    assert x.min_distance(0) == Fraction(1, 2)
    assert x.min_distance(Fraction(5, 8)) == 0
    assert x.to_dict() == {"lo": "1/2", "hi": "3/4"}
    with pytest.raises(ValueError):
        RationalInterval(1, 0)


def test_fraction_strings():
    assert format_fraction(Fraction(6, 4)) == "3/2"
    assert parse_fraction("3/2") == Fraction(3, 2)
    assert parse_fraction(" 7 ") == Fraction(7)
    with pytest.raises(ValueError):
        parse_fraction("1/0")
    with pytest.raises(ValueError):
        parse_fraction("one half")
