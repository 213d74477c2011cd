import enum
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Set, Tuple

import numpy as np
import pandas as pd

from sturmlab.automaton import SuffixAutomaton
from sturmlab.exceptions import InvariantViolation, NotUniqueError
from sturmlab.words import Factor, WordLike, WordStream, as_bytes


DEFAULT_ENGINE = "automaton"
ENGINES = ("automaton", "naive")
DEFAULT_FIT_MARGIN_FRACTION = 0.5
DEFAULT_EVIDENCE_PREFIX_FACTOR = 4

logger = logging.getLogger("sturmlab.complexity")


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


def count_factors_naive(prefix: bytes, n: int) -> int:
    """
    Count the distinct length-n factors of a finite word with a set of windows.

    >>> count_factors_naive(bytes([0, 1, 0, 0, 1, 0, 1, 0]), 3)
    4
    """
    return len({prefix[i:i + n] for i in range(len(prefix) - n + 1)})


def return_time_naive(prefix: bytes, n: int) -> Optional[int]:
    """
    Smallest m such that prefix[:m] contains two occurrences of some length-n word,
    found by scanning the windows in order, or None if there is none.

    >>> return_time_naive(bytes([0, 1, 0, 0, 1]), 2)
    5
    """
    seen = set()
    for m in range(n, len(prefix) + 1):
        window = prefix[m - n:m]
        if window in seen:
            return m
        seen.add(window)
    return None


@lru_cache(maxsize=16)
def _automaton_statistics(prefix: bytes, max_n: int) -> Tuple[Tuple[int, ...], Tuple[Optional[int], ...]]:
    sam = SuffixAutomaton(prefix)
    return tuple(sam.factor_counts(max_n)), tuple(sam.return_times(max_n))


def _statistics(prefix: bytes, max_n: int, engine: str) -> Tuple[List[int], List[Optional[int]]]:
    """Factor counts (for n <= min(max_n, len(prefix))) and return times for 1 <= n <= max_n."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r} (choose from {ENGINES})")
    if engine == "automaton":
        counts, returns = _automaton_statistics(prefix, max_n)
        return list(counts), list(returns)
    counts = [1] + [count_factors_naive(prefix, n) for n in range(1, max_n + 1)]
    returns = [None] + [return_time_naive(prefix, n) for n in range(1, max_n + 1)]
    return counts, returns


def factor_complexity(w: WordStream, n: int, L: int, engine: str = DEFAULT_ENGINE) -> int:
    """
    Number of distinct length-n factors of the length-L prefix of w. This is a lower
    bound for the complexity p(n) of the infinite word.

    :param w: the word
    :param n: factor length (1 <= n <= L)
    :param L: prefix length to inspect
    :param engine: "automaton" (suffix automaton) or "naive" (set of windows)
    :return: the number of distinct factors
    """
    _validate_range(n, L)
    counts, _ = _statistics(w.prefix(L), n, engine)
    return counts[n]


def return_time(w: WordStream, n: int, L: int, engine: str = DEFAULT_ENGINE) -> Optional[int]:
    """
    Return time r(n): length of the shortest prefix of w containing two (possibly
    overlapping) occurrences of some length-n word. The value is exact when it is
    found within the first L symbols; otherwise None (unknown).
    """
    _validate_range(n, L)
    _, returns = _statistics(w.prefix(L), n, engine)
    return returns[n]


class ComplexityProfile:
    """
    Table of p(n) and r(n) computed from one prefix of a word. p(n) is known for
    1 <= n <= n_max; r(n) is known (or None) for 1 <= n <= n_max + 1 so that every
    n <= n_max can be tested for branching.
    """

    def __init__(
        self,
        prefix_length_used: int,
        p: Dict[int, int],
        r: Dict[int, Optional[int]],
        word_name: str = None,
    ):
        """
        :param prefix_length_used: length L of the prefix the values were computed from
        :param p: map n -> number of distinct length-n factors
        :param r: map n -> return time or None when unknown
        :param word_name: label of the word the profile was computed for
        """
        self.prefix_length_used = prefix_length_used
        self.p = dict(p)
        self.r = dict(r)
        self.word_name = word_name or "word"
        self._validate()
        logger.debug(f"created complexity profile for {self.word_name} with n_max={self.n_max}, "
                     f"L={prefix_length_used}")

    @property
    def n_max(self) -> int:
        return max(self.p) if self.p else 0

    def return_time(self, n: int) -> Optional[int]:
        return self.r.get(n)

    def is_branching(self, n: int) -> bool:
        """True when r(n+1) >= r(n) + 2 (both values known)."""
        current, following = self.r.get(n), self.r.get(n + 1)
        return current is not None and following is not None and following >= current + 2

    @property
    def branching_indices(self) -> List[int]:
        return [n for n in sorted(self.p) if self.is_branching(n)]

    @property
    def rho_k(self) -> Dict[int, int]:
        """
        Map k -> rho_k for the k-th branching index n_k (k starts at 1), where
        r(n_k + 1) = 2 n_k + rho_k + 1.
        """
        return {k: self.r[n + 1] - 2 * n - 1 for k, n in enumerate(self.branching_indices, start=1)}

    @property
    def certified_r_range(self) -> int:
        """Largest n such that r is known on all of [1, n]."""
        n = 0
        while self.r.get(n + 1) is not None:
            n += 1
        return n

    def to_frame(self) -> pd.DataFrame:
        """
        Profile as a dataframe with columns n, p, r, is_branching, rho (r and rho use
        pandas' nullable integer type for unknown values).
        """
        ns = sorted(self.p)
        df = pd.DataFrame({"n": ns, "p": [self.p[n] for n in ns]})
        df["r"] = pd.array([self.r.get(n) for n in ns], dtype="Int64")
        df["is_branching"] = [self.is_branching(n) for n in ns]
        df["rho"] = pd.array([self.r[n + 1] - 2 * n - 1 if self.is_branching(n) else None for n in ns],
                             dtype="Int64")
        return df

    def to_csv(self, file: str):
        self.to_frame().to_csv(file, index=False)

    @classmethod
    def from_csv(cls, file: str, prefix_length_used: int, word_name: str = None) -> "ComplexityProfile":
        """
        Load a profile written by to_csv. r(n_max + 1) is restored from rho when the
        last row is a branching index.
        """
        df = pd.read_csv(file, dtype={"r": "Int64", "rho": "Int64"})
        p = {int(n): int(x) for n, x in zip(df["n"], df["p"])}
        r = {int(n): (None if pd.isna(x) else int(x)) for n, x in zip(df["n"], df["r"])}
        last = df.iloc[-1]
        if bool(last["is_branching"]):
            n = int(last["n"])
            r[n + 1] = 2 * n + int(last["rho"]) + 1
        return cls(prefix_length_used, p, r, word_name=word_name)

    @property
    def window_capped_from(self) -> Optional[int]:
        """
        Smallest n at which every length-n window of the prefix is distinct, so that
        p(n) = L - n + 1 is a count of windows rather than of factors (None if no such n).
        From there on p(n) may decrease; below it the table is non-decreasing.

        >>> ComplexityProfile(4, {1: 2, 2: 3, 3: 2, 4: 1}, {}).window_capped_from
        2
        """
        for n in sorted(self.p):
            if self.p[n] >= self.prefix_length_used - n + 1:
                return n
        return None

    def _validate(self):
        ns = sorted(self.p)
        capped = self.window_capped_from
        for a, b in zip(ns, ns[1:]):
            if capped is not None and a >= capped:
                break
            if self.p[a] > self.p[b]:
                raise ValueError(f"p(n) must be non-decreasing below the window cap (p({a}) = {self.p[a]} > "
                                 f"p({b}) = {self.p[b]})")
        if capped is not None:
            logger.debug(f"p(n) of {self.word_name} is capped by the prefix length from n={capped}")

    def __repr__(self):
        return (f"ComplexityProfile(word = {self.word_name}, n_max = {self.n_max}, "
                f"L = {self.prefix_length_used}, branching = {len(self.branching_indices)})")

    def __eq__(self, other):
        return (isinstance(other, ComplexityProfile) and self.p == other.p
                and self.to_frame().equals(other.to_frame()))


def compute_profile(w: WordStream, n_max: int, L: int, engine: str = DEFAULT_ENGINE) -> ComplexityProfile:
    """
    Compute p(n) for 1 <= n <= n_max and r(n) for 1 <= n <= n_max + 1 from the
    length-L prefix of w in a single pass.

    Example usage:
    >>> from sturmlab.sturmian import fibonacci_word
    >>> profile = compute_profile(fibonacci_word(), 5, 100)
    >>> [profile.p[n] for n in range(1, 6)]
    [2, 3, 4, 5, 6]
    >>> profile.r[1], profile.r[2]
    (3, 5)
    """
    _validate_range(n_max, L)
    prefix = w.prefix(L)
    counts, returns = _statistics(prefix, n_max + 1, engine)
    p = {n: counts[n] for n in range(1, n_max + 1)}
    r = {n: (returns[n] if n <= L else None) for n in range(1, n_max + 2)}
    logger.info(f"computed complexity profile of {w.name}: n_max={n_max}, L={L}, engine={engine}")
    return ComplexityProfile(L, p, r, word_name=w.name)


@dataclass
class BranchingIndices:
    """
    Branching indices n (r(n+1) >= r(n) + 2) found on [1, certified_up_to], with rho
    for each. When return times run out inside the requested range, truncated is True
    and certified_up_to says where the list stops being complete.
    """
    indices: List[int]
    rho: Dict[int, int]
    certified_up_to: int
    truncated: bool = False


def branching_indices(w: WordStream, n_max: int, L: int, engine: str = DEFAULT_ENGINE) -> BranchingIndices:
    """
    All n <= n_max with r(n+1) >= r(n) + 2, each paired with rho = r(n+1) - 2n - 1.
    Every branching index is checked against r(n+1) >= 2n + 3.

    :param w: the word
    :param n_max: largest candidate index
    :param L: prefix length
    :param engine: factor engine
    :return: a BranchingIndices record (truncated if r is unknown inside [1, n_max + 1])
    """
    profile = compute_profile(w, n_max, L, engine=engine)
    certified = min(n_max, profile.certified_r_range - 1)
    truncated = certified < n_max
    if truncated:
        logger.warning(f"return times of {w.name} are only known up to n={certified + 1} with L={L}; "
                       f"branching indices are certified on [1, {certified}]")
    indices = [n for n in profile.branching_indices if n <= certified]
    for n in indices:
        if profile.r[n + 1] < 2 * n + 3:
            raise InvariantViolation(f"branch jump at n={n} gives r(n+1)={profile.r[n + 1]} < 2n+3")
    rho = {n: profile.r[n + 1] - 2 * n - 1 for n in indices}
    return BranchingIndices(indices=indices, rho=rho, certified_up_to=certified, truncated=truncated)


def special_factors(w: WordStream, n: int, L: int, side: Side = Side.RIGHT) -> Set[Factor]:
    """
    Length-n factors of the length-L prefix that extend by at least two distinct letters
    on the given side (inside the prefix).

    >>> from sturmlab.sturmian import fibonacci_word
    >>> special_factors(fibonacci_word(), 1, 100, "right")
    {(0,)}
    """
    side = Side(side)
    if n + 1 > L:
        raise ValueError(f"special factors of length {n} need a prefix of length > {n} (received {L})")
    prefix = w.prefix(L)
    extensions = defaultdict(set)
    for i in range(L - n):
        window = prefix[i:i + n + 1]
        if side is Side.RIGHT:
            extensions[window[:n]].add(window[n])
        else:
            extensions[window[1:]].add(window[0])
    return {tuple(factor) for factor, letters in extensions.items() if len(letters) >= 2}


@dataclass
class RightSpecialFactor:
    """
    The unique right special factor Z_n, its minimal period, and whether it sits where
    the return time says it should (x_{r(n)-n+1} ... x_{r(n)}) when n is a branching
    index (None otherwise).
    """
    n: int
    factor: Factor
    period: int
    location_agrees: Optional[bool] = None


def unique_right_special(w: WordStream, n: int, L: int) -> RightSpecialFactor:
    """
    Return the unique right special factor Z_n of the length-L prefix.

    :raises NotUniqueError: when there are zero or several right special factors
    """
    candidates = special_factors(w, n, L, Side.RIGHT)
    if len(candidates) != 1:
        raise NotUniqueError(f"{w.name} has {len(candidates)} right special factors of length {n} "
                             f"in its prefix of length {L}", candidates)
    (factor,) = candidates
    location_agrees = None
    r_n, r_next = return_time(w, n, L), return_time(w, n + 1, L)
    if r_n is not None and r_next is not None and r_next >= r_n + 2:
        location_agrees = w.symbols(r_n)[r_n - n:] == factor
        logger.debug(f"Z_{n} location check at r(n)={r_n}: {location_agrees}")
    return RightSpecialFactor(n=n, factor=factor, period=minimal_period(factor), location_agrees=location_agrees)


def minimal_period(word: WordLike) -> int:
    """
    Smallest p >= 1 with word[i] = word[i + p] for all valid i (length minus the
    longest proper border).

    >>> minimal_period("010010")
    3
    >>> minimal_period("0")
    1
    """
    word = as_bytes(word)
    if not word:
        return 0
    border = [0] * len(word)
    k = 0
    for i in range(1, len(word)):
        while k > 0 and word[i] != word[k]:
            k = border[k - 1]
        if word[i] == word[k]:
            k += 1
        border[i] = k
    return len(word) - border[-1]


@dataclass
class QuasiSturmianFit:
    """p(n) = n + k for every n in [n0, verified_up_to]."""
    k: int
    n0: int
    verified_up_to: int


def fit_quasi_sturmian(profile: ComplexityProfile, margin: int = None) -> Optional[QuasiSturmianFit]:
    """
    Fit p(n) = n + k on a tail of the profile.

    :param profile: complexity profile with p known on [1, n_max]
    :param margin: the fit must hold on at least this many values past n0
    (default: half of the computed range)
    :return: the fit with the smallest n0, or None (no fit)
    """
    n_max = profile.n_max
    if n_max < 1:
        return None
    if margin is None:
        margin = int(n_max * DEFAULT_FIT_MARGIN_FRACTION)
    k = profile.p[n_max] - n_max
    if k < 1:
        logger.debug(f"no quasi-Sturmian fit: p({n_max}) = {profile.p[n_max]} <= n")
        return None
    n0 = n_max
    while n0 > 1 and profile.p[n0 - 1] == n0 - 1 + k:
        n0 -= 1
    if n_max - n0 < margin:
        logger.debug(f"no quasi-Sturmian fit: p(n) = n + {k} only holds on [{n0}, {n_max}]")
        return None
    return QuasiSturmianFit(k=k, n0=n0, verified_up_to=n_max)


def entropy_estimate(profile: ComplexityProfile) -> float:
    """
    log p(n_max) / n_max, an estimate of the entropy lim log p(n) / n from a finite
    range (it overestimates the limit for slowly growing complexity).
    """
    n_max = profile.n_max
    return float(np.log(profile.p[n_max]) / n_max)


def bounded_power_exponent(w: WordStream, W: WordLike, t_cutoff: int, L: int) -> Optional[int]:
    """
    Least t <= t_cutoff such that W^t does not occur in the length-L prefix. Absence in
    a prefix is evidence only; presence certifies that W^t is a factor.

    :param w: the word
    :param W: non-empty factor of the prefix
    :param t_cutoff: largest exponent to try
    :param L: prefix length
    :return: the exponent, or None when W^t_cutoff still occurs (enlarge L or t_cutoff)
    """
    W = as_bytes(W)
    if not W:
        raise ValueError("W must be non-empty")
    prefix = w.prefix(L)
    if W not in prefix:
        raise ValueError(f"W is not a factor of the prefix of length {L}")
    for t in range(2, t_cutoff + 1):
        if W * t not in prefix:
            return t
    logger.debug(f"W^{t_cutoff} occurs in the prefix of length {L}")
    return None


def return_time_violations(profile: ComplexityProfile) -> List[str]:
    """
    Check the return time properties on every n where the values are known:
    r(n+1) >= r(n) + 1, r(n) <= p(n) + n, and r(n+1) >= 2n + 3 after a jump of 2 or more.

    :return: a list of messages, empty when nothing is violated
    """
    violations = []
    for n in sorted(profile.p):
        current, following = profile.r.get(n), profile.r.get(n + 1)
        if current is not None and current > profile.p[n] + n:
            violations.append(f"n={n}: r(n)={current} > p(n)+n={profile.p[n] + n}")
        if current is None or following is None:
            continue
        if following < current + 1:
            violations.append(f"n={n}: r(n+1)={following} < r(n)+1={current + 1}")
        if following >= current + 2 and following < 2 * n + 3:
            violations.append(f"n={n}: branch jump with r(n+1)={following} < 2n+3={2 * n + 3}")
    return violations


def periodicity_evidence(profile: ComplexityProfile) -> Optional[int]:
    """
    First n with p(n) <= n, or None. By Morse-Hedlund such an n can only exist for
    an ultimately periodic word. Only n with L >= 4n are considered, since a shorter
    prefix need not contain every factor of length n.
    """
    for n in sorted(profile.p):
        if DEFAULT_EVIDENCE_PREFIX_FACTOR * n > profile.prefix_length_used:
            break
        if profile.p[n] <= n:
            return n
    return None


def branching_table(profile: ComplexityProfile) -> pd.DataFrame:
    """
    One row per branching index n_k: r(n_k), rho_k, alpha_k = r(n_k)/n_k (exact),
    whether alpha_k < 2, whether rho_k >= 2, and eta_k = r(n_{k+2}) - r(n_{k+1}) when available.
    """
    indices = profile.branching_indices
    rows = []
    for k, n in enumerate(indices, start=1):
        alpha = Fraction(profile.r[n], n)
        eta = None
        if k + 1 < len(indices):
            eta = profile.r[indices[k + 1]] - profile.r[indices[k]]
        rows.append({
            "k": k,
            "n_k": n,
            "r_n_k": profile.r[n],
            "rho_k": profile.r[n + 1] - 2 * n - 1,
            "alpha_k": alpha,
            "alpha_below_two": alpha < 2,
            "rho_at_least_two": profile.r[n + 1] - 2 * n - 1 >= 2,
            "eta_k": eta,
        })
    columns = ["k", "n_k", "r_n_k", "rho_k", "alpha_k", "alpha_below_two", "rho_at_least_two", "eta_k"]
    df = pd.DataFrame(rows, columns=columns)
    df["eta_k"] = pd.array(df["eta_k"].tolist(), dtype="Int64")
    return df


def _validate_range(n: int, L: int):
    if n < 1:
        raise ValueError(f"n must be >= 1 (received {n})")
    if n > L:
        raise ValueError(f"n={n} exceeds the prefix length L={L}")
