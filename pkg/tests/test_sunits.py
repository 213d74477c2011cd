from sturmlab.approximation import ApproximantRecord
from sturmlab.sunits import (
    SUnitEquation,
    cross_base_match,
    multiplicative_independence,
    nondegenerate_counts,
    sunit_enumerate,
    sunit_enumerate_naive,
)

from fractions import Fraction
import pytest


KNOWN_SOLUTIONS = [(1, 2, 1, 0), (1, 3, 1, 1), (3, 4, 2, 0), (3, 5, 2, 1), (4, 8, 4, 1)]


@pytest.mark.parametrize(
    "r, s, independent, m, l",
    [
        (2, 3, True, None, None),
        (2, 4, False, 2, 1),
        (2, 8, False, 3, 1),
        (4, 8, False, 3, 2),
        (6, 36, False, 2, 1),
        (10, 1000, False, 3, 1),
        (12, 18, True, None, None),
        (6, 10, True, None, None),
    ]
)
def test_multiplicative_independence(r, s, independent, m, l):
    witness = multiplicative_independence(r, s)
    assert witness.independent is independent
    assert (witness.m, witness.l) == (m, l)
    if not independent:
        assert r ** m == s ** l


def brute_force_dependence(r, s, limit=20):
    for a in range(1, limit + 1):
        for b in range(1, limit + 1):
            if r ** a == s ** b:
                return a, b
    return None


def test_independence_agrees_with_brute_force():
    for r in range(2, 37):
        for s in range(2, 37):
            witness = multiplicative_independence(r, s)
            expected = brute_force_dependence(r, s)
            if expected is None:
                assert witness.independent, (r, s)
            else:
                assert not witness.independent, (r, s)
                assert (witness.m, witness.l) == expected, (r, s)


def test_dependent_bound():
    witness = multiplicative_independence(2, 8)
    assert witness.m + witness.l == 4


def test_independence_errors():
    with pytest.raises(ValueError):
        multiplicative_independence(1, 3)
    with pytest.raises(TypeError):
        multiplicative_independence(2.0, 3)


@pytest.mark.parametrize("z", KNOWN_SOLUTIONS)
def test_known_solutions(z):
    equation = SUnitEquation(1, 1, 2, 3)
    assert equation.is_solution(z)
    t1, t2, t3 = equation.terms(z)
    assert t1 - t2 + t3 == 1
    assert not equation.classify(z).degenerate


def test_non_solutions():
    equation = SUnitEquation(1, 1, 2, 3)
    assert not equation.is_solution((0, 1, 1, 0))
    assert not equation.is_solution((1, 2, 0, 0))


def test_enumeration_finds_exactly_the_known_solutions():
    solutions = sunit_enumerate(1, 1, 2, 3, 25)
    assert [sol.z for sol in solutions] == KNOWN_SOLUTIONS
    assert not any(sol.degenerate for sol in solutions)


def test_enumeration_matches_exhaustive_scan():
    assert sunit_enumerate(1, 1, 2, 3, 14) == sunit_enumerate_naive(1, 1, 2, 3, 14)
    assert sunit_enumerate(3, 2, 2, 5, 10) == sunit_enumerate_naive(3, 2, 2, 5, 10, seed=1)


def test_enumeration_is_stable():
    assert sunit_enumerate(1, 1, 2, 3, 20) == sunit_enumerate(1, 1, 2, 3, 25)
    counts = nondegenerate_counts(1, 1, 6, 10, [15, 20])
    assert counts[15] == counts[20]


def test_empty_box():
    assert sunit_enumerate(1, 1, 2, 3, 0) == []


def test_partitioned_search():
    full = sunit_enumerate(1, 1, 2, 3, 25)
    parts = sunit_enumerate(1, 1, 2, 3, 25, z1_range=range(0, 10)) + \
        sunit_enumerate(1, 1, 2, 3, 25, z1_range=range(10, 26))
    assert sorted(parts, key=lambda sol: sol.z) == full


def test_special_family():
    equation = SUnitEquation(1, 1, 2, 2)
    z = (1, 2, 1, 1)
    assert equation.is_solution(z)
    solution = equation.classify(z)
    assert solution.special_family
    assert solution.degenerate
    assert solution.to_dict() == {"z": [1, 2, 1, 1], "degenerate": True, "special_family": True}


def test_equation_errors():
    with pytest.raises(ValueError):
        SUnitEquation(0, 1, 2, 3)
    with pytest.raises(ValueError):
        SUnitEquation(1, 1, 1, 3)


def test_cross_base_match():
    """1/3 is 0.(01) in base 2 and 0.(1) in base 4"""
    in_base_2 = ApproximantRecord(numerator=1, b=2, w=0, period=2, n=2, alpha=Fraction(3, 2))
    in_base_4 = ApproximantRecord(numerator=1, b=4, w=0, period=1, n=1, alpha=Fraction(2))
    unrelated = ApproximantRecord(numerator=1, b=4, w=0, period=2, n=2, alpha=Fraction(3, 2))
    matches = cross_base_match([in_base_2], [in_base_4, unrelated], m_max=1)
    assert len(matches) == 1
    match = matches[0]
    assert match.q == 3
    assert match.sunit_z == (0, 2, 1, 0)
    assert SUnitEquation(match.m1, match.m2, 2, 4).is_solution(match.sunit_z)
    assert cross_base_match([in_base_2], [in_base_4], m_max=0) == []
