"""Multiset bookkeeping for index tuples in [k]^n.

Outcome weights are symmetric in the tuple entries, so everything expensive
is computed once per sorted multiset and shared across its permutations.
"""

from __future__ import annotations

import math
from collections import Counter
from itertools import combinations_with_replacement, permutations
from typing import Iterable, Iterator


def multiset_classes(k: int, n: int) -> Iterator[tuple[int, ...]]:
    """All sorted index multisets of length n over alphabet range(k), lex order."""
    return combinations_with_replacement(range(k), n)


def multiplicity(ms: tuple[int, ...]) -> int:
    """Number of distinct orderings of the multiset ``ms``."""
    counts = Counter(ms)
    out = math.factorial(len(ms))
    for c in counts.values():
        out //= math.factorial(c)
    return out


def orderings(ms: Iterable[int]) -> list[tuple[int, ...]]:
    """Distinct orderings of ``ms``, sorted lexicographically."""
    return sorted(set(permutations(ms)))


def occurrence_counts(ms: Iterable[int], k: int) -> list[int]:
    """occurrence_counts(I, k)[i] = number of times i occurs in I."""
    counts = [0] * k
    for i in ms:
        counts[i] += 1
    return counts


def submultisets(ms: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Distinct nonempty sorted submultisets of ``ms``, smallest first."""
    counts = sorted(Counter(ms).items())
    symbols = [s for s, _ in counts]
    maxima = [c for _, c in counts]

    def rec(idx: int, prefix: list[int]):
        if idx == len(symbols):
            if prefix:
                yield tuple(prefix)
            return
        for take in range(maxima[idx] + 1):
            yield from rec(idx + 1, prefix + [symbols[idx]] * take)

    return rec(0, [])
