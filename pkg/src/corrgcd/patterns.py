"""Rank-ordered candidate pattern generation.

Subsets of reliability-table ranks are emitted in nondecreasing logistic
weight W(S) = sum of ranks; within a weight class, smaller cardinality
first, then lexicographically by the sorted rank tuple. Subsets swapping
the same block twice are discarded but still counted against the budget.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .blocks import ReliabilityTable


class _Sentinel:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


EXHAUSTED = _Sentinel("EXHAUSTED")
CAPPED = _Sentinel("CAPPED")

DEFAULT_CAP = 10 ** 6


class Pattern(NamedTuple):
    ranks: tuple        # table ranks (1-based), ascending
    swaps: tuple        # ((block_id, alternative_pattern), ...)
    weight: int         # logistic weight, sum of ranks
    delta_sum: float    # total relative reliability of the swaps


def _subsets_fixed(weight, card, lo, m):
    """Distinct integers in [lo, m], exactly `card` of them summing to
    `weight`, in lexicographic order of the ascending tuple."""
    if card == 1:
        if lo <= weight <= m:
            yield (weight,)
        return
    rest = card - 1
    for a in range(lo, m + 1):
        rem = weight - a
        # smallest achievable tail: a+1 .. a+rest
        if rest * (2 * a + rest + 1) // 2 > rem:
            break
        # largest achievable tail: m-rest+1 .. m
        if rest * (2 * m - rest + 1) // 2 < rem:
            continue
        for tail in _subsets_fixed(rem, rest, a + 1, m):
            yield (a,) + tail


def rank_subsets(m: int):
    """All subsets of {1..m} in (weight, cardinality, lex) order."""
    yield ()
    for weight in range(1, m * (m + 1) // 2 + 1):
        for card in range(1, m + 1):
            if card * (card + 1) // 2 > weight:
                break
            if card * (2 * m - card + 1) // 2 < weight:
                continue
            yield from _subsets_fixed(weight, card, 1, m)


# The raw subset sequence depends only on the entry count m, not on the
# received vector, so decodes with the same table size can share one
# memoised prefix instead of re-running the recursive generator. The
# prefix is length-capped to keep memory bounded when a decode runs far
# past typical caps; states beyond it fall back to a private generator.
_SUBSET_CACHE_LIMIT = 1 << 16
_subset_cache: dict = {}


class _SubsetPrefix:
    __slots__ = ("items", "gen")

    def __init__(self, m):
        self.items = []
        self.gen = rank_subsets(m)

    def extend_to(self, size) -> bool:
        items = self.items
        while len(items) < size:
            nxt = next(self.gen, None)
            if nxt is None:
                return False
            items.append(nxt)
        return True


def _shared_prefix(m) -> _SubsetPrefix:
    pre = _subset_cache.get(m)
    if pre is None:
        pre = _subset_cache[m] = _SubsetPrefix(m)
    return pre


class PatternState:
    """Single-consumer pattern stream over one reliability table.

    next_pattern() returns a Pattern, or the CAPPED / EXHAUSTED sentinel
    once the emitted + discarded budget is used up or all subsets are
    consumed. Conflicting subsets (same block twice) are discarded and
    counted.
    """

    def __init__(self, table: ReliabilityTable, cap: int = DEFAULT_CAP):
        self.table = table
        self.cap = cap
        self.emitted_count = 0
        self.discarded_count = 0
        self._blocks = [e.block for e in table.entries]
        self._m = len(table.entries)
        self._prefix = _shared_prefix(self._m)
        self._idx = 0
        self._tail = None
        self._done = False

    @property
    def total_count(self) -> int:
        return self.emitted_count + self.discarded_count

    def _next_subset(self):
        if self._tail is not None:
            return next(self._tail, None)
        if self._idx < _SUBSET_CACHE_LIMIT:
            items = self._prefix.items
            if self._idx < len(items) or self._prefix.extend_to(self._idx + 1):
                ranks = items[self._idx]
                self._idx += 1
                return ranks
            return None
        # Past the shared prefix: replay a private generator.
        self._tail = rank_subsets(self._m)
        for _ in range(self._idx):
            next(self._tail)
        return next(self._tail, None)

    def next_pattern(self):
        if self._done:
            return EXHAUSTED
        blocks = self._blocks
        entries = self.table.entries
        while True:
            if self.total_count >= self.cap:
                return CAPPED
            ranks = self._next_subset()
            if ranks is None:
                self._done = True
                return EXHAUSTED
            used = 0
            ok = True
            for r in ranks:
                bit = 1 << blocks[r - 1]
                if used & bit:
                    ok = False
                    break
                used |= bit
            if not ok:
                self.discarded_count += 1
                continue
            self.emitted_count += 1
            swaps = tuple((blocks[r - 1], entries[r - 1].alt) for r in ranks)
            return Pattern(ranks=ranks, swaps=swaps, weight=sum(ranks),
                           delta_sum=sum(entries[r - 1].delta for r in ranks))


def future_delta_floor(deltas) -> np.ndarray:
    """Lower bound on the delta sum of any pattern still to be emitted.

    Entry deltas must be ascending (rank r carries deltas[r-1]). Emission
    is weight-ascending, so once a pattern of logistic weight W has been
    emitted every remaining pattern is a distinct-rank subset of weight
    >= W; floor[W] bounds its delta sum from below. Rank-sum-exact minima
    come from a 0/1 knapsack pass, then a suffix minimum handles "weight
    at least W". The same-block conflict rule is ignored, which can only
    lower the bound, so it stays valid.
    """
    m = len(deltas)
    wmax = m * (m + 1) // 2
    g = np.full(wmax + 1, np.inf)
    g[0] = 0.0
    for r in range(1, m + 1):
        g[r:] = np.minimum(g[r:], g[:-r] + deltas[r - 1])
    return np.minimum.accumulate(g[::-1])[::-1]


def pattern_to_decision(p: Pattern, hard) -> list:
    """Per-block decision: hard demodulation with the pattern's swaps applied."""
    decision = list(hard)
    for block, alt in p.swaps:
        decision[block] = alt
    return decision
