"""Class-pure block partitions, block hard demodulation, and the
rank-ordered table of relative reliabilities.

Block bit patterns are encoded as small integers, MSB first: for a block
of width w, bit offset t within the block is (pattern >> (w-1-t)) & 1.
A smaller integer therefore is the lexicographically smaller bit string.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import LOG_2PI, ChannelModel


class BlockClass(enum.Enum):
    BASE = "base"
    COMP = "comp"


class Scope(enum.Enum):
    ALL = "all"
    BASE_ONLY = "base_only"


@dataclass(frozen=True)
class BlockPartition:
    """Consecutive, class-pure blocks of at most b positions covering 1..n."""

    n: int
    b: int
    starts: tuple      # 0-based first position of each block
    widths: tuple
    classes: tuple     # BlockClass per block

    @property
    def n_b(self) -> int:
        return len(self.starts)

    def positions(self, i) -> range:
        """0-based positions of block i."""
        return range(self.starts[i], self.starts[i] + self.widths[i])


def make_partition(n: int, b: int, base_set) -> BlockPartition:
    """Greedy left-to-right grouping into class-pure blocks of width <= b.

    A block grows while the next position belongs to the same class
    (base vs complement) and the block holds fewer than b positions.
    Class changes therefore force block boundaries, producing singleton
    blocks at isolated positions.
    """
    if not 1 <= b <= n:
        raise ValueError(f"need 1 <= b <= n, got b={b}, n={n}")
    base = set(base_set)
    starts, widths, classes = [], [], []
    for pos in range(1, n + 1):
        cls = BlockClass.BASE if pos in base else BlockClass.COMP
        if starts and classes[-1] is cls and widths[-1] < b:
            widths[-1] += 1
        else:
            starts.append(pos - 1)
            widths.append(1)
            classes.append(cls)
    return BlockPartition(n=n, b=b, starts=tuple(starts), widths=tuple(widths),
                          classes=tuple(classes))


def block_loglik_tables(y, part: BlockPartition, model: ChannelModel):
    """Per-block log-density of every possible bit pattern.

    Returns a list of length part.n_b; entry i is a float array of length
    2^width(i) indexed by the MSB-first pattern integer. Blocks of equal
    width are evaluated in one vectorized pass.
    """
    y = np.asarray(y, dtype=np.float64)
    s2 = model.sigma ** 2
    rho = model.rho
    v = s2 * (1.0 - rho ** 2)
    tables = [None] * part.n_b
    by_width = {}
    for i, w in enumerate(part.widths):
        by_width.setdefault(w, []).append(i)
    for w, idx in by_width.items():
        yb = np.stack([y[part.starts[i]:part.starts[i] + w] for i in idx])
        bits = (np.arange(2 ** w)[:, None] >> np.arange(w - 1, -1, -1)) & 1
        z = yb[:, None, :] - (1.0 - 2.0 * bits)[None, :, :]
        ll = -0.5 * (LOG_2PI + math.log(s2)) - z[..., 0] ** 2 / (2.0 * s2)
        if w > 1:
            d = z[..., 1:] - rho * z[..., :-1]
            ll = ll - 0.5 * (w - 1) * (LOG_2PI + math.log(v)) - (d ** 2).sum(axis=-1) / (2.0 * v)
        for j, i in enumerate(idx):
            tables[i] = ll[j]
    return tables


def hard_demod(y, part: BlockPartition, model: ChannelModel, tables=None) -> np.ndarray:
    """Per-block likelihood argmax patterns.

    Ties (probability-zero events) resolve to the lexicographically
    smaller pattern, i.e. the smaller pattern integer.
    """
    if tables is None:
        tables = block_loglik_tables(y, part, model)
    # np.argmax returns the first maximum, which is the smallest integer.
    return np.array([int(np.argmax(t)) for t in tables], dtype=np.int64)


class TableEntry(NamedTuple):
    block: int        # 0-based block id
    alt: int          # alternative pattern integer
    delta: float      # relative reliability >= 0


@dataclass(frozen=True)
class ReliabilityTable:
    """All positive relative reliabilities of in-scope block alternatives,
    sorted ascending by delta (ties by block id, then pattern)."""

    entries: tuple            # TableEntry, rank r is entries[r-1]
    hard: np.ndarray          # hard pattern per block (all blocks)
    scope: Scope
    part: BlockPartition
    block_logliks: tuple      # per-block pattern log-density arrays

    def __len__(self) -> int:
        return len(self.entries)


def build_reliability_table(y, part: BlockPartition, model: ChannelModel,
                            scope: Scope = Scope.ALL, tables=None) -> ReliabilityTable:
    if tables is None:
        tables = block_loglik_tables(y, part, model)
    hard = hard_demod(y, part, model, tables)
    entries = []
    for i in range(part.n_b):
        if scope is Scope.BASE_ONLY and part.classes[i] is not BlockClass.BASE:
            continue
        t = tables[i]
        h = hard[i]
        for alt in range(len(t)):
            if alt == h:
                continue
            entries.append(TableEntry(block=i, alt=alt, delta=float(t[h] - t[alt])))
    entries.sort(key=lambda e: (e.delta, e.block, e.alt))
    return ReliabilityTable(entries=tuple(entries), hard=hard, scope=scope,
                            part=part, block_logliks=tuple(tables))
