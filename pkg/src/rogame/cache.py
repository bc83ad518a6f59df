"""Dominance cache of won and lost histories, keyed by fill state.

A query on ``(L, H)`` answers *won* if some stored won history ``H'`` has
``H' ⊑ H`` and *lost* if some stored lost history ``H'`` has ``H ⊑ H'``.
Entries are never evicted; an optional byte cap aborts the run instead.
"""
from __future__ import annotations

import bisect
import os
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from .model import FillState, History
from .packing import first_above, first_below, history_counts, history_leq

CACHE_CAP_ENV = "ROGAME_CACHE_MAX_BYTES"


class CacheResult(Enum):
    WON = "Won"
    LOST = "Lost"
    UNKNOWN = "Unknown"


class CacheIntegrityError(RuntimeError):
    """A history was recorded as both won and lost for the same fill state."""


class CacheMemoryExceeded(MemoryError):
    """The configured byte cap on cache contents was exceeded."""


class _HistorySet:
    """Histories in canonical-encoding order plus their count-vector rows."""

    __slots__ = ("keys", "members", "rows", "n")

    def __init__(self, width: int):
        self.keys: List[History] = []
        self.members = set()
        self.rows = np.zeros((4, width), dtype=np.int64)
        self.n = 0

    def add(self, history: History, counts: np.ndarray) -> bool:
        if history in self.members:
            return False
        pos = bisect.bisect_left(self.keys, history)
        if self.n == self.rows.shape[0]:
            grown = np.zeros((2 * self.n, self.rows.shape[1]), dtype=np.int64)
            grown[: self.n] = self.rows[: self.n]
            self.rows = grown
        self.rows[pos + 1 : self.n + 1] = self.rows[pos : self.n]
        self.rows[pos] = counts
        self.keys.insert(pos, history)
        self.members.add(history)
        self.n += 1
        return True

    def remove_where(self, pred) -> int:
        keep = [i for i, h in enumerate(self.keys) if not pred(h)]
        dropped = self.n - len(keep)
        if dropped:
            self.rows[: len(keep)] = self.rows[keep]
            self.keys = [self.keys[i] for i in keep]
            self.members = set(self.keys)
            self.n = len(keep)
        return dropped


@dataclass
class CacheCounters:
    queries: int = 0
    won_hits: int = 0
    lost_hits: int = 0
    insertions: int = 0


@dataclass
class DominanceCache:
    k: int
    prune_dominated: bool = False
    max_bytes: Optional[int] = None
    counters: CacheCounters = field(default_factory=CacheCounters)
    _table: Dict[FillState, tuple] = field(default_factory=dict, repr=False)
    _stored: int = 0
    _bytes: int = 0

    def __post_init__(self) -> None:
        if self.max_bytes is None:
            env = os.environ.get(CACHE_CAP_ENV)
            if env:
                self.max_bytes = int(env)

    def query(self, fill: FillState, history: History) -> CacheResult:
        self.counters.queries += 1
        entry = self._table.get(fill)
        if entry is None:
            return CacheResult.UNKNOWN
        won, lost = entry
        q = history_counts(history, self.k)
        if won.n and first_below(won.rows, won.n, q) >= 0:
            self.counters.won_hits += 1
            return CacheResult.WON
        if lost.n and first_above(lost.rows, lost.n, q) >= 0:
            self.counters.lost_hits += 1
            return CacheResult.LOST
        return CacheResult.UNKNOWN

    def insert(self, fill: FillState, history: History, outcome: CacheResult) -> None:
        if outcome is CacheResult.UNKNOWN:
            raise ValueError("only Won or Lost outcomes can be cached")
        entry = self._table.get(fill)
        if entry is None:
            entry = (_HistorySet(max(self.k, 1)), _HistorySet(max(self.k, 1)))
            self._table[fill] = entry
            self._bytes += sys.getsizeof(fill) + 2 * entry[0].rows.nbytes
        target, other = entry if outcome is CacheResult.WON else entry[::-1]
        if history in other.members:
            raise CacheIntegrityError(
                f"history {history} for fill {fill} is already recorded as "
                f"{'lost' if outcome is CacheResult.WON else 'won'}"
            )
        if self.prune_dominated:
            if outcome is CacheResult.WON:
                dropped = target.remove_where(lambda h: history_leq(history, h))
            else:
                dropped = target.remove_where(lambda h: history_leq(h, history))
            self._stored -= dropped
        old_rows = target.rows.shape[0]
        if target.add(history, history_counts(history, self.k)):
            self.counters.insertions += 1
            self._stored += 1
            self._bytes += sys.getsizeof(history) + 8 * len(history)
            if target.rows.shape[0] != old_rows:
                self._bytes += target.rows.nbytes - old_rows * target.rows.shape[1] * 8
            if self.max_bytes is not None and self._bytes > self.max_bytes:
                raise CacheMemoryExceeded(
                    f"cache holds ~{self._bytes} bytes, cap is {self.max_bytes}"
                )

    @property
    def distinct_fills(self) -> int:
        return len(self._table)

    @property
    def stored_histories(self) -> int:
        return self._stored

    @property
    def approx_bytes(self) -> int:
        return self._bytes

    def stats(self) -> Dict[str, int]:
        c = self.counters
        return {
            "cache_queries": c.queries,
            "cache_won_hits": c.won_hits,
            "cache_lost_hits": c.lost_hits,
            "cache_insertions": c.insertions,
            "cache_distinct_fills": self.distinct_fills,
            "cache_stored_histories": self.stored_histories,
        }
