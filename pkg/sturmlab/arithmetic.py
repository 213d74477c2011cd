import enum
import logging
import math
from fractions import Fraction
from typing import List, Sequence, Union

import pandas as pd

from sturmlab.exceptions import InvariantViolation


logger = logging.getLogger("sturmlab.arithmetic")

RationalLike = Union[Fraction, int, str]


def format_fraction(x: Fraction) -> str:
    """
    Serialize an exact rational as a "p/q" string.

    >>> format_fraction(Fraction(6, 4))
    '3/2'
    >>> format_fraction(Fraction(2))
    '2/1'
    """
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: RationalLike) -> Fraction:
    """Parse "p/q", an integer string or a number into a Fraction."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ValueError(f"cannot parse {text!r} as an exact rational")


class RationalInterval:
    """
    Exact rational enclosure [lo, hi] of a real number. A point interval (lo = hi) stands
    for a rational number known exactly.

    >>> x = RationalInterval(Fraction(1, 2), Fraction(3, 4))
    >>> x.width, x.midpoint
    (Fraction(1, 4), Fraction(5, 8))
    """

    def __init__(self, lo: RationalLike, hi: RationalLike = None):
        self.lo = parse_fraction(lo)
        self.hi = self.lo if hi is None else parse_fraction(hi)
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints are out of order: {self.lo} > {self.hi}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: RationalLike) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def max_distance(self, x: RationalLike) -> Fraction:
        """Largest |y - x| over all y in the interval."""
        x = Fraction(x)
        return max(abs(self.lo - x), abs(self.hi - x))

    def min_distance(self, x: RationalLike) -> Fraction:
        """Smallest |y - x| over all y in the interval (0 if x is inside)."""
        x = Fraction(x)
        if self.contains(x):
            return Fraction(0)
        return min(abs(self.lo - x), abs(self.hi - x))

    def to_dict(self) -> dict:
        return {"lo": format_fraction(self.lo), "hi": format_fraction(self.hi)}

    def __repr__(self):
        if self.is_point:
            return f"RationalInterval({self.lo})"
        return f"RationalInterval([{self.lo}, {self.hi}])"

    def __eq__(self, other):
        return isinstance(other, RationalInterval) and self.lo == other.lo and self.hi == other.hi


def digits_from_rational(x: RationalLike, b: int, count: int) -> List[int]:
    """
    The first `count` base-b digits of a rational in [0, 1). Exact arithmetic never yields
    an infinite tail of b-1; terminating expansions are padded with zeros.

    >>> digits_from_rational(Fraction(1, 2), 2, 5)
    [1, 0, 0, 0, 0]
    >>> digits_from_rational(Fraction(1, 3), 2, 6)
    [0, 1, 0, 1, 0, 1]
    >>> digits_from_rational(Fraction(1, 3), 3, 4)
    [1, 0, 0, 0]
    """
    x = Fraction(x)
    _validate_base(b)
    if not 0 <= x < 1:
        raise ValueError(f"x must be in [0, 1) (received {x})")
    numerator, denominator = x.numerator, x.denominator
    digits = []
    for _ in range(count):
        digit, numerator = divmod(numerator * b, denominator)
        digits.append(digit)
    return digits


def real_from_digits(prefix: Sequence[int], b: int) -> RationalInterval:
    """
    Enclosure [S, S + b^-L] of every real whose base-b expansion starts with the given
    L digits, where S is the value of the prefix.

    >>> real_from_digits([1, 0], 2)
    RationalInterval([1/2, 3/4])
    >>> real_from_digits([], 10)
    RationalInterval([0, 1])
    """
    _validate_base(b)
    value = 0
    for digit in prefix:
        if not 0 <= digit < b:
            raise ValueError(f"digit {digit} is invalid in base {b}")
        value = value * b + int(digit)
    scale = b ** len(prefix)
    return RationalInterval(Fraction(value, scale), Fraction(value + 1, scale))


def rebase_digits(x: RationalInterval, s: int, max_count: int) -> List[int]:
    """
    Longest base-s digit prefix shared by every real of x, up to max_count digits.

    A non-point interval is read as the half-open digit cell [lo, hi): the right endpoint
    itself is excluded, since under the no-(b-1)-tail convention no real with a given
    digit prefix reaches the top of its cell. A digit is certified when the whole
    remaining cell fits inside one base-s cell. A point interval is expanded exactly.

    >>> rebase_digits(RationalInterval(Fraction(9, 32), Fraction(10, 32)), 2, 10)
    [0, 1, 0, 0, 1]
    >>> rebase_digits(RationalInterval(0, 1), 3, 5)
    []
    """
    _validate_base(s)
    if x.lo < 0 or x.hi > 1:
        raise ValueError(f"rebase_digits needs an interval inside [0, 1] (received {x})")
    if x.is_point:
        return digits_from_rational(x.lo, s, max_count) if x.lo < 1 else []

    # integer numerators over a common denominator: the cell is [low/Q, high/Q)
    denominator = x.lo.denominator * x.hi.denominator // math.gcd(x.lo.denominator, x.hi.denominator)
    low = x.lo.numerator * (denominator // x.lo.denominator)
    high = x.hi.numerator * (denominator // x.hi.denominator)
    digits = []
    while len(digits) < max_count:
        digit = (low * s) // denominator
        if high * s > (digit + 1) * denominator:
            break
        digits.append(digit)
        low = low * s - digit * denominator
        high = high * s - digit * denominator
    logger.debug(f"certified {len(digits)} base-{s} digits from an interval of width {float(x.width):.3e}")
    return digits


def rational_cf(x: RationalLike) -> List[int]:
    """
    Canonical continued fraction of a rational (final quotient >= 2 when there are at least
    two quotients).

    >>> rational_cf(Fraction(13, 8))
    [1, 1, 1, 1, 2]
    >>> rational_cf(Fraction(-1, 3))
    [-1, 1, 2]
    """
    x = Fraction(x)
    numerator, denominator = x.numerator, x.denominator
    quotients = []
    while denominator:
        a, remainder = divmod(numerator, denominator)
        quotients.append(a)
        numerator, denominator = denominator, remainder
    return quotients


def convergents(quotients: Sequence[int]) -> List[Fraction]:
    """
    Convergents p_j/q_j of [a_0; a_1, ...] by the standard recurrence.

    >>> convergents([1, 1, 1, 1, 2])
    [Fraction(1, 1), Fraction(2, 1), Fraction(3, 2), Fraction(5, 3), Fraction(13, 8)]
    """
    return CFExpansion(quotients).convergents


class CFExpansion:
    """
    Partial quotients a_0; a_1, ..., a_J with their convergents p_j/q_j.
    """

    def __init__(self, partial_quotients: Sequence[int]):
        self.partial_quotients = [int(a) for a in partial_quotients]
        if any(a < 1 for a in self.partial_quotients[1:]):
            raise ValueError("partial quotients after a_0 must be >= 1")
        self.numerators = []
        self.denominators = []
        p_prev, p = 0, 1
        q_prev, q = 1, 0
        for a in self.partial_quotients:
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            self.numerators.append(p)
            self.denominators.append(q)

    @property
    def convergents(self) -> List[Fraction]:
        return [Fraction(p, q) for p, q in zip(self.numerators, self.denominators)]

    @property
    def max_partial_quotient(self) -> int:
        """Largest a_j with j >= 1 (0 when there is none)."""
        return max(self.partial_quotients[1:], default=0)

    def to_dict(self) -> dict:
        return {
            "a": list(self.partial_quotients),
            "convergents": [[str(p), str(q)] for p, q in zip(self.numerators, self.denominators)],
        }

    def __len__(self):
        return len(self.partial_quotients)

    def __repr__(self):
        if not self.partial_quotients:
            return "CFExpansion([])"
        head, tail = self.partial_quotients[0], self.partial_quotients[1:]
        if not tail:
            return f"CFExpansion([{head}])"
        return f"CFExpansion([{head}; {', '.join(str(a) for a in tail)}])"

    def __eq__(self, other):
        return isinstance(other, CFExpansion) and self.partial_quotients == other.partial_quotients


def certified_cf(x: RationalInterval) -> CFExpansion:
    """
    Partial quotients shared by every real in x.

    For a point interval this is the canonical expansion of the rational. Otherwise it is
    the common prefix of the canonical expansions of lo and hi, except that the last
    agreeing quotient a_J is dropped when an endpoint's expansion stops at J on the side
    where a_J changes: for the lower endpoint when J is odd, for the upper one when J is
    even. Reals next to such an endpoint have a smaller a_J.

    Example usage:
    >>> certified_cf(RationalInterval(Fraction(13, 8)))
    CFExpansion([1; 1, 1, 1, 2])
    >>> certified_cf(RationalInterval(0, Fraction(1, 1024)))
    CFExpansion([0])
    """
    if x.is_point:
        return CFExpansion(rational_cf(x.lo))
    lower, upper = rational_cf(x.lo), rational_cf(x.hi)
    agree = 0
    while agree < min(len(lower), len(upper)) and lower[agree] == upper[agree]:
        agree += 1
    if agree:
        last = agree - 1
        if (len(lower) == agree and last % 2 == 1) or (len(upper) == agree and last % 2 == 0):
            logger.debug(f"dropping boundary quotient a_{last} = {lower[last]}")
            agree -= 1
    logger.debug(f"certified {agree} partial quotients from an interval of width {float(x.width):.3e}")
    return CFExpansion(lower[:agree])


class LegendreVerdict(enum.Enum):
    FORCED_CONVERGENT = "forced_convergent"
    INCONCLUSIVE = "inconclusive"


def legendre_check(x: RationalInterval, p_over_q: RationalLike) -> LegendreVerdict:
    """
    Legendre test: if |xi - p/q| <= 1/(2q^2) for every xi in x, p/q is a convergent of
    every such xi.

    When the inequality is strict and the certified expansion of x reaches denominator q,
    the verdict is checked against that expansion.

    >>> phi = RationalInterval(Fraction(987, 610), Fraction(1597, 987))
    >>> legendre_check(phi, Fraction(13, 8))
    <LegendreVerdict.FORCED_CONVERGENT: 'forced_convergent'>
    >>> legendre_check(phi, Fraction(13, 9))
    <LegendreVerdict.INCONCLUSIVE: 'inconclusive'>

    :param x: enclosure of the real
    :param p_over_q: candidate rational (taken in lowest terms)
    :return: the verdict
    """
    candidate = Fraction(p_over_q)
    q = candidate.denominator
    excess = x.max_distance(candidate) * 2 * q * q
    if excess > 1:
        return LegendreVerdict.INCONCLUSIVE
    if excess < 1:
        cf = certified_cf(x)
        if len(cf) >= 2 and cf.denominators[-1] >= q and candidate not in cf.convergents:
            raise InvariantViolation(f"{candidate} passes the Legendre test on {x} but is not among "
                                     f"its certified convergents")
    return LegendreVerdict.FORCED_CONVERGENT


def convergent_quality(x: RationalInterval, cf: CFExpansion) -> pd.DataFrame:
    """
    Check 1/(2 q_j q_{j+1}) < |xi - p_j/q_j| < 1/(q_j q_{j+1}) for every certified
    convergent that has a successor, over all xi in x.

    :return: dataframe with columns j, p, q, verified (the bounds hold for every xi in x) and
    refuted (they fail for every xi in x); both are False when x is too wide to decide
    """
    rows = []
    for j in range(len(cf) - 1):
        p, q, q_next = cf.numerators[j], cf.denominators[j], cf.denominators[j + 1]
        c = Fraction(p, q)
        lower, upper = Fraction(1, 2 * q * q_next), Fraction(1, q * q_next)
        near, far = x.min_distance(c), x.max_distance(c)
        rows.append({
            "j": j,
            "p": p,
            "q": q,
            "verified": near > lower and far < upper,
            "refuted": far <= lower or near >= upper,
        })
    return pd.DataFrame(rows, columns=["j", "p", "q", "verified", "refuted"])


def _validate_base(b: int):
    if not isinstance(b, int):
        raise TypeError(f"base should be an int (found a type of {type(b)})")
    if b < 2:
        raise ValueError(f"base must be >= 2 (received {b})")
