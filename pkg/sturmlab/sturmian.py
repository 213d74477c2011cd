import itertools
import logging
import math
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from sturmlab.words import DIGIT_CHARS, WordLike, WordStream, as_bytes


SLOPE_RULES = ("periodic", "explicit")
DEFAULT_SLOPE_RULE = "explicit"
VARIANTS = ("lower", "upper")
DEFAULT_RANDOM_CHUNK = 4096

logger = logging.getLogger("sturmlab.sturmian")


class Slope:
    """
    Irrational slope alpha = [0; a_1, a_2, ...] in (0, 1) given by its partial quotients.

    The finite list of quotients is extended to an infinite stream by a rule: "periodic"
    repeats the whole list forever and "explicit" repeats the final quotient forever
    (so [2, 1] is [0; 2, 1, 1, 1, ...] = 1/phi^2).

    >>> Slope([2, 1]).convergent(4)
    Fraction(3, 8)
    >>> Slope([1, 2], rule="periodic").quotient(5)
    1
    """

    def __init__(self, partial_quotients: Sequence[int], rule: str = DEFAULT_SLOPE_RULE):
        self.partial_quotients = [int(a) for a in partial_quotients]
        self.rule = rule
        self._validate()
        self._numerators = [1, 0]    # p_{-1}, p_0
        self._denominators = [0, 1]  # q_{-1}, q_0

    def quotient(self, i: int) -> int:
        """Partial quotient a_i for i >= 1."""
        if i < 1:
            raise ValueError(f"partial quotients of a slope are indexed from 1 (received {i})")
        count = len(self.partial_quotients)
        if i <= count:
            return self.partial_quotients[i - 1]
        if self.rule == "periodic":
            return self.partial_quotients[(i - 1) % count]
        return self.partial_quotients[-1]

    def convergent(self, j: int) -> Fraction:
        """The j-th convergent p_j/q_j (j >= 0; p_0/q_0 = 0)."""
        while len(self._numerators) < j + 2:
            i = len(self._numerators) - 1
            a = self.quotient(i)
            self._numerators.append(a * self._numerators[-1] + self._numerators[-2])
            self._denominators.append(a * self._denominators[-1] + self._denominators[-2])
        return Fraction(self._numerators[j + 1], self._denominators[j + 1])

    def enclosure(self, j: int) -> Tuple[Fraction, Fraction]:
        """
        Interval (lo, hi) with lo < alpha < hi strictly, bounded by the convergents j and j+1.
        Its width is 1/(q_j q_{j+1}), which shrinks strictly with j.
        """
        a, b = self.convergent(j), self.convergent(j + 1)
        return (a, b) if a < b else (b, a)

    def to_dict(self) -> dict:
        return {"slope_cf": list(self.partial_quotients), "slope_cf_rule": self.rule}

    def _validate(self):
        if self.rule not in SLOPE_RULES:
            raise ValueError(f"unknown slope rule {self.rule!r} (choose from {SLOPE_RULES})")
        if not self.partial_quotients:
            raise ValueError("a slope needs at least one partial quotient")
        if min(self.partial_quotients) < 1:
            raise ValueError("all partial quotients of a slope must be >= 1")

    def __repr__(self):
        tail = "..." if self.rule == "explicit" else " (periodic)"
        return f"Slope([0; {', '.join(str(a) for a in self.partial_quotients)}{tail}])"

    def __eq__(self, other):
        return (isinstance(other, Slope) and self.partial_quotients == other.partial_quotients
                and self.rule == other.rule)


def _certified_floor(alpha: Slope, n: int, intercept: Fraction, level: int) -> Tuple[int, int]:
    """
    Floor of n*alpha + intercept, certified on a convergent enclosure of alpha.

    :return: (floor, level of the enclosure that certified it)
    """
    while True:
        lo, hi = alpha.enclosure(level)
        floor = math.floor(n * lo + intercept)
        # lo < alpha < hi, so floor <= n*lo + c < n*alpha + c < n*hi + c <= floor + 1
        if n * hi + intercept <= floor + 1:
            return floor, level
        level += 1


def _mechanical_symbols(alpha: Slope, intercept: Fraction, variant: str) -> Iterator[int]:
    level = 1
    n = 1
    previous, level = _certified_floor(alpha, n, intercept, level)
    while True:
        following, level = _certified_floor(alpha, n + 1, intercept, level)
        # n*alpha + intercept is never an integer for n >= 1, so the ceiling is floor + 1
        # and both variants give the same difference
        if variant == "upper":
            yield (following + 1) - (previous + 1)
        else:
            yield following - previous
        previous = following
        n += 1


def mechanical_word(alpha: Slope, intercept: Fraction = Fraction(0), variant: str = "lower") -> WordStream:
    """
    Mechanical (Sturmian) word s_n = floor((n+1) alpha + rho) - floor(n alpha + rho) for n >= 1,
    or the same with ceilings for the upper variant. Every floor is computed exactly by
    narrowing the convergent enclosure of alpha until n alpha + rho is separated from the
    nearest integer.

    Example usage:
    >>> mechanical_word(Slope([2, 1])).to_digit_string(13)
    '0100101001001'
    >>> mechanical_word(Slope([1])).to_digit_string(13)
    '1011010110110'

    :param alpha: the slope
    :param intercept: rational intercept rho in [0, 1)
    :param variant: "lower" (floors) or "upper" (ceilings)
    :return: a lazily extended binary word
    """
    intercept = Fraction(intercept)
    if not 0 <= intercept < 1:
        raise ValueError(f"intercept must be in [0, 1) (received {intercept})")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r} (choose from {VARIANTS})")
    name = f"mechanical({alpha!r}, rho={intercept}, {variant})"
    return WordStream(2, generator=_mechanical_symbols(alpha, intercept, variant), name=name)


class Morphism:
    """
    A morphism sending each source letter to a non-empty word over {0, ..., b-1}.

    >>> phi = Morphism.from_strings({"0": "02", "1": "1"})
    >>> phi.image(0), phi.target_alphabet_size
    (b'\\x00\\x02', 3)
    """

    def __init__(self, images: Dict[int, WordLike]):
        self.images = {int(k): as_bytes(v) for k, v in images.items()}
        for letter, image in self.images.items():
            if not image:
                raise ValueError(f"image of letter {letter} must be non-empty")

    @classmethod
    def from_strings(cls, images: Dict[str, str]) -> "Morphism":
        """Build a morphism from a JSON-style map such as {"0": "02", "1": "1"}."""
        return cls({DIGIT_CHARS.index(str(k).lower()): v for k, v in images.items()})

    def image(self, letter: int) -> bytes:
        try:
            return self.images[letter]
        except KeyError:
            raise ValueError(f"letter {letter} is outside the domain {sorted(self.images)} of the morphism")

    @property
    def domain(self) -> List[int]:
        return sorted(self.images)

    @property
    def target_alphabet_size(self) -> int:
        return max(2, max(max(image) for image in self.images.values()) + 1)

    def to_dict(self) -> Dict[str, str]:
        return {DIGIT_CHARS[k]: "".join(DIGIT_CHARS[x] for x in v) for k, v in sorted(self.images.items())}

    def __repr__(self):
        return "Morphism(" + ", ".join(f"{k}->{v}" for k, v in self.to_dict().items()) + ")"

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.images == other.images


def validate_morphism_nondegenerate(phi: Morphism) -> bool:
    """
    True iff phi(0) phi(1) != phi(1) phi(0), the condition under which the image of a
    Sturmian word is quasi-Sturmian.

    >>> validate_morphism_nondegenerate(Morphism.from_strings({"0": "01", "1": "0"}))
    True
    >>> validate_morphism_nondegenerate(Morphism.from_strings({"0": "00", "1": "0"}))
    False
    """
    return phi.image(0) + phi.image(1) != phi.image(1) + phi.image(0)


def fixed_point(morphism: Morphism, start: int = 0, name: str = None) -> WordStream:
    """
    Fixed point of a morphism beginning with `start`, produced by iterated substitution.
    The image of `start` must begin with `start` and have length >= 2.
    """
    head = morphism.image(start)
    if head[0] != start or len(head) < 2:
        raise ValueError(f"the image of {start} must start with {start} and have length >= 2 "
                         f"to define a fixed point")

    def symbols():
        produced = bytearray(head)
        expanded = 1
        position = 0
        while True:
            while position >= len(produced):
                produced += morphism.image(produced[expanded])
                expanded += 1
            yield produced[position]
            position += 1

    return WordStream(morphism.target_alphabet_size, generator=symbols(), name=name or f"fix({morphism!r})")


def fibonacci_word() -> WordStream:
    """
    The Fibonacci word 0100101001001..., fixed point of 0 -> 01, 1 -> 0.

    >>> fibonacci_word().to_digit_string(13)
    '0100101001001'
    """
    return fixed_point(Morphism({0: (0, 1), 1: (0,)}), 0, name="fibonacci")


def apply_morphism(phi: Morphism, s: WordStream, W: WordLike = ()) -> WordStream:
    """
    The word W phi(s_1) phi(s_2) ..., extended lazily.

    :param phi: morphism whose domain contains the alphabet of s
    :param s: source word
    :param W: finite prefix word
    :return: the image word over the target alphabet of phi (enlarged to fit W)
    """
    W = as_bytes(W)
    missing = [letter for letter in range(s.alphabet_size) if letter not in phi.images]
    if missing:
        raise ValueError(f"letters {missing} of {s.name} are outside the domain of {phi!r}")
    alphabet_size = max(phi.target_alphabet_size, max(W, default=0) + 1)

    def symbols():
        yield from W
        for letter in s:
            yield from phi.image(letter)

    prefix_label = "".join(DIGIT_CHARS[x] for x in W)
    name = f"{prefix_label}{phi!r}({s.name})"
    logger.info(f"applying {phi!r} to {s.name} with a prefix of length {len(W)}")
    return WordStream(alphabet_size, generator=symbols(), name=name)


def periodic_word(period: WordLike, preperiod: WordLike = (), alphabet_size: int = None) -> WordStream:
    """
    Ultimately periodic word preperiod period period ...

    >>> periodic_word("012").to_digit_string(7)
    '0120120'
    """
    period, preperiod = as_bytes(period), as_bytes(preperiod)
    if not period:
        raise ValueError("the period must be non-empty")
    if alphabet_size is None:
        alphabet_size = max(2, max(period + preperiod) + 1)
    symbols = itertools.chain(preperiod, itertools.cycle(period))
    label = "".join(DIGIT_CHARS[x] for x in preperiod) + "(" + "".join(DIGIT_CHARS[x] for x in period) + ")^inf"
    return WordStream(alphabet_size, generator=symbols, name=label)


def random_word(alphabet_size: int, seed: int = None, chunk_size: int = DEFAULT_RANDOM_CHUNK) -> WordStream:
    """
    Uniformly random word from numpy's default generator. The symbols depend only on the
    seed and the chunk size, not on how the word is extended.
    """
    rng = np.random.default_rng(seed)

    def symbols():
        while True:
            for x in rng.integers(0, alphabet_size, size=chunk_size):
                yield int(x)

    return WordStream(alphabet_size, generator=symbols(), name=f"random(b={alphabet_size}, seed={seed})")
