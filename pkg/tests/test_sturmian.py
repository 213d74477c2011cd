from sturmlab.complexity import compute_profile
from sturmlab.sturmian import (
    Morphism,
    Slope,
    apply_morphism,
    fibonacci_word,
    fixed_point,
    mechanical_word,
    periodic_word,
    random_word,
    validate_morphism_nondegenerate,
)

from fractions import Fraction
import pytest


@pytest.mark.parametrize(
    "slope",
    [
        Slope([2, 1]),                    # 1/phi^2
        Slope([1]),                       # 1/phi
        Slope([2]),                       # sqrt(2) - 1
        Slope([1, 2], rule="periodic"),   # sqrt(3) - 1
        Slope([3, 1, 2], rule="periodic"),
    ]
)
def test_mechanical_words_are_sturmian(slope):
    profile = compute_profile(mechanical_word(slope), 300, 10**4)
    assert all(profile.p[n] == n + 1 for n in range(1, 301)), repr(slope)


def test_golden_slope_gives_fibonacci_word():
    assert mechanical_word(Slope([2, 1])).prefix(2000) == fibonacci_word().prefix(2000)


@pytest.mark.parametrize("intercept", [Fraction(0), Fraction(1, 3), Fraction(7, 10)])
def test_upper_and_lower_variants_coincide(intercept):
    lower = mechanical_word(Slope([1, 3], rule="periodic"), intercept, "lower")
    upper = mechanical_word(Slope([1, 3], rule="periodic"), intercept, "upper")
    assert lower.prefix(500) == upper.prefix(500)


def test_mechanical_frequency():
    """the frequency of 1 is the slope"""
    slope = Slope([2])
    ones = sum(mechanical_word(slope).prefix(5000))
    assert abs(ones / 5000 - float(slope.convergent(12))) < 1e-3


def test_mechanical_word_errors():
    with pytest.raises(ValueError):
        mechanical_word(Slope([1]), Fraction(1))
    with pytest.raises(ValueError):
        mechanical_word(Slope([1]), variant="middle")


@pytest.mark.parametrize(
    "quotients, rule, i, expected",
    [
        ([2, 1], "explicit", 1, 2),
        ([2, 1], "explicit", 7, 1),
        ([1, 2], "periodic", 4, 2),
        ([3, 1, 2], "periodic", 7, 3),
        ([5], "explicit", 3, 5),
    ]
)
def test_slope_quotients(quotients, rule, i, expected):
    assert Slope(quotients, rule=rule).quotient(i) == expected


def test_slope_enclosure():
    slope = Slope([1])
    for j in range(1, 15):
        lo, hi = slope.enclosure(j)
        assert lo < slope.convergent(30) < hi
        assert hi - lo == Fraction(1, slope.convergent(j).denominator * slope.convergent(j + 1).denominator)


@pytest.mark.parametrize(
    "quotients, rule",
    [
        ([], "explicit"),
        ([1, 0], "explicit"),
        ([2, 1], "eventually"),
    ]
)
def test_bad_slopes(quotients, rule):
    with pytest.raises(ValueError):
        Slope(quotients, rule=rule)
    with pytest.raises(ValueError):
        Slope([1]).quotient(0)


def test_fixed_points():
    thue_morse = fixed_point(Morphism.from_strings({"0": "01", "1": "10"}))
    assert thue_morse.to_digit_string(16) == "0110100110010110"
    with pytest.raises(ValueError):
        fixed_point(Morphism.from_strings({"0": "10", "1": "1"}))
    with pytest.raises(ValueError):
        fixed_point(Morphism.from_strings({"0": "0", "1": "10"}))


def test_morphism_images():
    phi = Morphism.from_strings({"0": "02", "1": "1"})
    image = apply_morphism(phi, fibonacci_word(), "21")
    assert image.alphabet_size == 3
    # 21 then the images of 0 1 0 0 1
    assert image.to_digit_string(10) == "2102102021"
    with pytest.raises(ValueError):
        phi.image(2)
    with pytest.raises(ValueError):
        Morphism({0: "", 1: "1"})


def test_morphism_domain_must_cover_word():
    phi = Morphism.from_strings({"0": "01"})
    with pytest.raises(ValueError):
        apply_morphism(phi, fibonacci_word())


@pytest.mark.parametrize(
    "images, expected",
    [
        ({"0": "01", "1": "0"}, True),
        ({"0": "02", "1": "1"}, True),
        ({"0": "00", "1": "0"}, False),
        ({"0": "0101", "1": "01"}, False),
    ]
)
def test_nondegenerate_morphisms(images, expected):
    assert validate_morphism_nondegenerate(Morphism.from_strings(images)) is expected


def test_morphism_round_trip():
    phi = Morphism.from_strings({"0": "0a", "1": "1"})
    assert phi.to_dict() == {"0": "0a", "1": "1"}
    assert Morphism.from_strings(phi.to_dict()) == phi


def test_periodic_word():
    assert periodic_word("01", "2").to_digit_string(7) == "2010101"
    assert periodic_word("1").alphabet_size == 2
    with pytest.raises(ValueError):
        periodic_word("")


def test_random_words_are_reproducible():
    assert random_word(3, seed=5).prefix(10000) == random_word(3, seed=5).prefix(10000)
    assert random_word(3, seed=5).prefix(100) != random_word(3, seed=6).prefix(100)
    assert max(random_word(7, seed=1).prefix(1000)) == 6
