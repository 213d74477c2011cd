import logging
from typing import List, Optional

import numpy as np


logger = logging.getLogger("sturmlab.automaton")


class SuffixAutomaton:
    """
    Suffix automaton (minimal DAWG) of a finite word, built online in linear time.

    Each state v stands for the factors whose lengths lie in (length[link[v]], length[v]],
    so the number of distinct factors of every length can be read off the states
    without enumerating the factors. While the automaton is built, the length of the
    suffix link of the newest state is the length of the longest suffix of the current
    prefix that already occurred earlier; those lengths give every return time r(n)
    in one pass.

    Example usage:
    >>> sam = SuffixAutomaton(bytes([0, 1, 0, 0, 1]))
    >>> sam.factor_counts(3)
    [1, 2, 3, 3]
    >>> sam.return_times(2)
    [None, 3, 5]
    """

    def __init__(self, word: bytes):
        self.length = [0]
        self.link = [-1]
        self.next = [{}]
        self.last = 0
        # repeat_lengths[m - 1] = longest suffix of word[:m] occurring earlier in word[:m]
        self.repeat_lengths = []
        for symbol in word:
            self.extend(symbol)
        logger.debug(f"built suffix automaton with {len(self.length)} states for {len(word)} symbols")

    def extend(self, symbol: int):
        """Append one symbol to the word recognized by the automaton."""
        length, link, transitions = self.length, self.link, self.next
        current = len(length)
        length.append(length[self.last] + 1)
        link.append(0)
        transitions.append({})

        p = self.last
        while p >= 0 and symbol not in transitions[p]:
            transitions[p][symbol] = current
            p = link[p]
        if p >= 0:
            q = transitions[p][symbol]
            if length[p] + 1 == length[q]:
                link[current] = q
            else:
                clone = len(length)
                length.append(length[p] + 1)
                link.append(link[q])
                transitions.append(dict(transitions[q]))
                while p >= 0 and transitions[p].get(symbol) == q:
                    transitions[p][symbol] = clone
                    p = link[p]
                link[q] = clone
                link[current] = clone
        self.last = current
        self.repeat_lengths.append(length[link[current]])

    def factor_counts(self, max_n: int) -> List[int]:
        """
        Number of distinct factors of each length.

        :param max_n: largest factor length of interest
        :return: list c with c[n] = number of distinct length-n factors for 1 <= n <= max_n
        (c[0] = 1 counts the empty word)
        """
        lengths = np.array(self.length, dtype=np.int64)
        links = np.array(self.link[1:], dtype=np.int64)
        starts = np.minimum(lengths[links] + 1, max_n + 1)
        stops = np.minimum(lengths[1:] + 1, max_n + 1)
        diff = np.zeros(max_n + 2, dtype=np.int64)
        np.add.at(diff, starts, 1)
        np.add.at(diff, stops, -1)
        counts = np.cumsum(diff)[:max_n + 1]
        counts[0] = 1
        return [int(x) for x in counts]

    def return_times(self, max_n: int) -> List[Optional[int]]:
        """
        Return times r(n) of the word for 1 <= n <= max_n, i.e. the length of the
        shortest prefix containing two (possibly overlapping) occurrences of some
        length-n word.

        :param max_n: largest n of interest
        :return: list r with r[n] the return time or None when no length-n word repeats
        in the whole word (r[0] is None)
        """
        r = [None] * (max_n + 1)
        best = 0
        for m, repeat in enumerate(self.repeat_lengths, start=1):
            if repeat > best:
                for n in range(best + 1, min(repeat, max_n) + 1):
                    r[n] = m
                best = repeat
                if best >= max_n:
                    break
        return r
