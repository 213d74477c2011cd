import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, isprime

from sturmlab.approximation import ApproximantRecord


DEFAULT_TRIAL_DIVISION_LIMIT = 10**6

logger = logging.getLogger("sturmlab.sunits")

Exponents = Tuple[int, int, int, int]


@dataclass
class DependencyWitness:
    """
    Either independent, or the smallest positive (m, l) with r^m = s^l.
    """
    r: int
    s: int
    independent: bool
    m: Optional[int] = None
    l: Optional[int] = None

    def to_dict(self) -> dict:
        return {"r": self.r, "s": self.s, "independent": self.independent, "m": self.m, "l": self.l}


def _prime_exponents(n: int, limit: int) -> Dict[int, int]:
    factors = factorint(n, limit=limit)
    leftover = [p for p in factors if not isprime(p)]
    if leftover:
        raise ValueError(f"could not factor {n} by trial division up to {limit} (cofactor {leftover[0]})")
    return {int(p): int(e) for p, e in factors.items()}


def multiplicative_independence(r: int, s: int, limit: int = DEFAULT_TRIAL_DIVISION_LIMIT) -> DependencyWitness:
    """
    Decide whether r and s are multiplicatively independent by comparing their prime
    exponent vectors; they are dependent iff the vectors are parallel.

    Example usage:
    >>> multiplicative_independence(2, 3).independent
    True
    >>> witness = multiplicative_independence(2, 8)
    >>> witness.m, witness.l
    (3, 1)
    >>> multiplicative_independence(12, 18).independent
    True

    :param r: integer >= 2
    :param s: integer >= 2
    :param limit: trial division limit for the factorization
    :return: the witness (r^m = s^l with m, l minimal when dependent)
    """
    for base in (r, s):
        if not isinstance(base, (int, np.integer)):
            raise TypeError(f"bases should be ints (found a type of {type(base)})")
        if base < 2:
            raise ValueError(f"bases must be >= 2 (received {base})")
    r, s = int(r), int(s)
    exponents_r, exponents_s = _prime_exponents(r, limit), _prime_exponents(s, limit)
    if set(exponents_r) != set(exponents_s):
        return DependencyWitness(r=r, s=s, independent=True)
    p = min(exponents_r)
    g = math.gcd(exponents_r[p], exponents_s[p])
    m, l = exponents_s[p] // g, exponents_r[p] // g
    if any(m * exponents_r[q] != l * exponents_s[q] for q in exponents_r):
        return DependencyWitness(r=r, s=s, independent=True)
    logger.debug(f"{r}^{m} = {s}^{l}")
    return DependencyWitness(r=r, s=s, independent=False, m=m, l=l)


@dataclass(frozen=True)
class SUnitSolution:
    z: Exponents
    degenerate: bool
    special_family: bool

    def to_dict(self) -> dict:
        return {"z": list(self.z), "degenerate": self.degenerate, "special_family": self.special_family}


class SUnitEquation:
    """
    The equation (m2/m1) r^z1 s^-z4 - (m2/m1) r^z2 s^-z4 + s^z3 = 1 in non-negative
    integers z1, ..., z4 with z3 >= 1.
    """

    def __init__(self, m1: int, m2: int, r: int, s: int):
        if m1 < 1 or m2 < 1:
            raise ValueError(f"m1 and m2 must be >= 1 (received {m1}, {m2})")
        if r < 2 or s < 2:
            raise ValueError(f"r and s must be >= 2 (received {r}, {s})")
        self.m1, self.m2, self.r, self.s = m1, m2, r, s

    def terms(self, z: Exponents) -> Tuple[Fraction, Fraction, Fraction]:
        """The three left-hand terms T1, T2, T3 (the equation is T1 - T2 + T3 = 1)."""
        z1, z2, z3, z4 = z
        c = Fraction(self.m2, self.m1) / Fraction(self.s) ** z4
        return c * self.r ** z1, c * self.r ** z2, Fraction(self.s) ** z3

    def is_solution(self, z: Exponents) -> bool:
        if z[2] < 1 or min(z) < 0:
            return False
        t1, t2, t3 = self.terms(z)
        return t1 - t2 + t3 == 1

    def classify(self, z: Exponents) -> SUnitSolution:
        """
        Flag a solution as degenerate when a proper non-empty subsum of T1 - T2 + T3 - 1
        vanishes, and as a member of the special family when T2 = T3.
        """
        t1, t2, t3 = self.terms(z)
        summands = (t1, -t2, t3, Fraction(-1))
        degenerate = any(
            sum(subset) == 0
            for size in (1, 2, 3)
            for subset in itertools.combinations(summands, size)
        )
        return SUnitSolution(z=tuple(z), degenerate=degenerate, special_family=t2 == t3)

    def to_dict(self) -> dict:
        return {"m1": self.m1, "m2": self.m2, "r": self.r, "s": self.s}

    def __repr__(self):
        return f"SUnitEquation(m1 = {self.m1}, m2 = {self.m2}, r = {self.r}, s = {self.s})"


def sunit_enumerate(
    m1: int,
    m2: int,
    r: int,
    s: int,
    zmax: int,
    z1_range: Iterable[int] = None,
) -> List[SUnitSolution]:
    """
    All solutions with 0 <= z_i <= zmax and z3 >= 1, sorted by z.

    Clearing denominators turns the equation into m2 (r^z1 - r^z2) = m1 s^z4 (1 - s^z3),
    so the left sides are tabulated once and every (z3, z4) is looked up. Restricting
    z1_range splits the box into parts that can be searched separately and merged.

    >>> [sol.z for sol in sunit_enumerate(1, 1, 2, 3, 3)]
    [(1, 2, 1, 0), (1, 3, 1, 1)]
    """
    equation = SUnitEquation(m1, m2, r, s)
    z1_values = range(zmax + 1) if z1_range is None else [z for z in z1_range if 0 <= z <= zmax]
    left: Dict[int, List[Tuple[int, int]]] = {}
    for z1 in z1_values:
        for z2 in range(zmax + 1):
            left.setdefault(m2 * (r ** z1 - r ** z2), []).append((z1, z2))

    solutions = []
    for z3 in range(1, zmax + 1):
        for z4 in range(zmax + 1):
            for z1, z2 in left.get(m1 * s ** z4 * (1 - s ** z3), ()):
                z = (z1, z2, z3, z4)
                if not equation.is_solution(z):
                    raise ValueError(f"{z} matched the integer identity but fails {equation}")
                solutions.append(equation.classify(z))
    solutions.sort(key=lambda sol: sol.z)
    logger.info(f"{equation}: {len(solutions)} solutions with zmax={zmax}")
    return solutions


def sunit_enumerate_naive(
    m1: int,
    m2: int,
    r: int,
    s: int,
    zmax: int,
    seed: int = None,
) -> List[SUnitSolution]:
    """
    Exhaustive scan of the box with exact rational evaluation of every tuple. With a seed,
    each loop runs in a shuffled order.
    """
    equation = SUnitEquation(m1, m2, r, s)
    rng = np.random.default_rng(seed) if seed is not None else None

    def order(values):
        values = list(values)
        if rng is None:
            return values
        return [values[i] for i in rng.permutation(len(values))]

    solutions = []
    for z4 in order(range(zmax + 1)):
        for z3 in order(range(1, zmax + 1)):
            for z1 in order(range(zmax + 1)):
                for z2 in order(range(zmax + 1)):
                    z = (z1, z2, z3, z4)
                    if equation.is_solution(z):
                        solutions.append(equation.classify(z))
    solutions.sort(key=lambda sol: sol.z)
    return solutions


def nondegenerate_counts(m1: int, m2: int, r: int, s: int, zmax_values: Sequence[int]) -> Dict[int, int]:
    """Number of non-degenerate solutions for each box size, for stabilization reports."""
    counts = {}
    for zmax in zmax_values:
        counts[zmax] = sum(1 for sol in sunit_enumerate(m1, m2, r, s, zmax) if not sol.degenerate)
    return counts


@dataclass
class MatchedQuadruple:
    """
    r^u1 (r^v1 - 1) / m1 = s^u2 (s^v2 - 1) / m2 = q, a common reduced denominator of
    approximants in two bases.
    """
    u1: int
    v1: int
    u2: int
    v2: int
    m1: int
    m2: int
    q: int

    @property
    def sunit_z(self) -> Exponents:
        """The corresponding solution (z1, z2, z3, z4) = (u1, u1 + v1, v2, u2) of the S-unit equation."""
        return self.u1, self.u1 + self.v1, self.v2, self.u2

    def to_dict(self) -> dict:
        return {
            "u1": self.u1, "v1": self.v1, "u2": self.u2, "v2": self.v2,
            "m1": self.m1, "m2": self.m2, "q": str(self.q), "z": list(self.sunit_z),
        }


def cross_base_match(
    records_r: List[ApproximantRecord],
    records_s: List[ApproximantRecord],
    m_max: int,
) -> List[MatchedQuadruple]:
    """
    Pairs of approximants of the same real in two bases whose reduced denominators agree,
    with m_i = gcd(numerator, denominator) <= m_max.
    """
    by_denominator: Dict[int, List[ApproximantRecord]] = {}
    for record in records_s:
        if record.gcd <= m_max:
            by_denominator.setdefault(record.value.denominator, []).append(record)

    matches = []
    for record in records_r:
        if record.gcd > m_max:
            continue
        q = record.value.denominator
        for other in by_denominator.get(q, ()):
            matches.append(MatchedQuadruple(
                u1=record.w, v1=record.period, u2=other.w, v2=other.period,
                m1=record.gcd, m2=other.gcd, q=q,
            ))
    logger.info(f"{len(matches)} cross-base matches among {len(records_r)} x {len(records_s)} approximants")
    return matches
