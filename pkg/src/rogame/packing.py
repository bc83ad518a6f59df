"""Multiset packing decisions.

``fits_exact`` is the exact feasibility test behind the cheat proof,
``ffd_fits`` the first-fit-decreasing under-approximation behind the
history order, and ``fits_bruteforce`` a deliberately naive reference used
only by tests.

The ``first_below`` / ``first_above`` scans are the dominance-cache hot
loop. They work on count vectors (``row[c]`` = number of class-``c`` items)
and are compiled with numba unless disabled, see :mod:`rogame._accel`.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ._accel import HAS_NUMBA, njit
from .model import History, Params


class OracleMisuseError(ValueError):
    """The brute-force oracle was asked to solve an instance above its bound."""


@dataclass(frozen=True)
class PackingInstance:
    items: Tuple[int, ...]
    capacities: Tuple[int, ...]

    def __init__(self, items: Sequence[int], capacities: Sequence[int]):
        items = tuple(int(x) for x in items)
        capacities = tuple(int(x) for x in capacities)
        if any(x < 1 for x in items):
            raise ValueError(f"item sizes must be >= 1: {items}")
        if any(x < 1 for x in capacities):
            raise ValueError(f"capacities must be >= 1: {capacities}")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "capacities", capacities)

    def __str__(self) -> str:
        def fmt(xs):
            return "{" + ",".join(map(str, sorted(xs, reverse=True))) + "}"

        return f"{fmt(self.items)} into {fmt(self.capacities)}"


def fits_exact(instance: PackingInstance) -> bool:
    """Exact feasibility by depth-first branch and bound.

    Items go in non-increasing order. At each level only one bin per
    distinct residual capacity is tried, residuals too small for any
    remaining item are zeroed, and failed (item index, residual multiset)
    pairs are memoized.
    """
    items = sorted(instance.items, reverse=True)
    if not items:
        return True
    caps = sorted(instance.capacities, reverse=True)
    if not caps or items[0] > caps[0] or sum(items) > sum(caps):
        return False

    n = len(items)
    smallest = items[-1]
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i]
    failed = set()

    def normalize(res):
        return tuple(sorted((r if r >= smallest else 0 for r in res), reverse=True))

    def rec(i, res):
        if i == n:
            return True
        if sum(res) < suffix[i]:
            return False
        key = (i, res)
        if key in failed:
            return False
        x = items[i]
        prev = -1
        for j, r in enumerate(res):
            if r < x:
                break
            if r == prev:
                continue
            prev = r
            if rec(i + 1, normalize(res[:j] + (r - x,) + res[j + 1:])):
                return True
        failed.add(key)
        return False

    return rec(0, normalize(caps))


def che(history: History, params: Params) -> bool:
    """True when ``history`` provably cannot fit the offline bins.

    Each class-``c`` item is taken at its infimal size ``c``; if those do
    not fit ``m`` bins of size ``k - 1``, the real items (each strictly
    larger) cannot fit ``m`` bins of size ``k``.
    """
    if not history:
        return False
    if params.k == 1:
        return True
    return not fits_exact(PackingInstance(history, (params.k - 1,) * params.m))


def _ffd_sorted(items, caps):
    # items and caps both non-increasing; caps is consumed
    for i in range(items.shape[0]):
        x = items[i]
        placed = False
        for j in range(caps.shape[0]):
            if caps[j] >= x:
                caps[j] -= x
                placed = True
                break
        if not placed:
            return False
    return True


def _leq_counts(a, b):
    w = a.shape[0]
    sub = True
    va = 0
    vb = 0
    amax = 0
    bmax = 0
    nb = 0
    for c in range(1, w):
        if a[c] > b[c]:
            sub = False
        va += c * a[c]
        vb += c * b[c]
        nb += b[c]
        if a[c] > 0:
            amax = c
        if b[c] > 0:
            bmax = c
    if sub:
        return True
    if va > vb or amax > bmax:
        return False
    res = np.empty(nb, dtype=np.int64)
    p = 0
    for c in range(w - 1, 0, -1):
        for _ in range(b[c]):
            res[p] = c
            p += 1
    for c in range(w - 1, 0, -1):
        for _ in range(a[c]):
            placed = False
            for j in range(nb):
                if res[j] >= c:
                    res[j] -= c
                    placed = True
                    break
            if not placed:
                return False
    return True


def _first_below(rows, n, q):
    for i in range(n):
        if _leq_counts(rows[i], q):
            return i
    return -1


def _first_above(rows, n, q):
    for i in range(n):
        if _leq_counts(q, rows[i]):
            return i
    return -1


def _leq_counts_lists(a, b) -> bool:
    bins = [c for c in range(len(b) - 1, 0, -1) for _ in range(b[c])]
    for c in range(len(a) - 1, 0, -1):
        for _ in range(a[c]):
            for j, r in enumerate(bins):
                if r >= c:
                    bins[j] = r - c
                    break
            else:
                return False
    return True


def _prefilter(rows, q, below):
    lhs, rhs = (rows, q) if below else (q, rows)
    classes = np.arange(rows.shape[1])
    sub = np.all(lhs <= rhs, axis=1)
    vol_ok = (lhs @ classes) <= (rhs @ classes)
    top = np.where(rows > 0, classes, 0).max(axis=1)
    qtop = int(np.where(q > 0, classes, 0).max(initial=0))
    max_ok = top <= qtop if below else qtop <= top
    return sub, vol_ok & max_ok


def _first_below_np(rows, n, q):
    if n == 0:
        return -1
    rows = rows[:n]
    sub, maybe = _prefilter(rows, q, below=True)
    ql = q.tolist()
    for i in np.flatnonzero(sub | maybe):
        if sub[i] or _leq_counts_lists(rows[i].tolist(), ql):
            return int(i)
    return -1


def _first_above_np(rows, n, q):
    if n == 0:
        return -1
    rows = rows[:n]
    sub, maybe = _prefilter(rows, q, below=False)
    ql = q.tolist()
    for i in np.flatnonzero(sub | maybe):
        if sub[i] or _leq_counts_lists(ql, rows[i].tolist()):
            return int(i)
    return -1


if HAS_NUMBA:
    _ffd_kernel = njit(cache=True)(_ffd_sorted)
    _leq_counts = njit(cache=True)(_leq_counts)
    _first_below = njit(cache=True)(_first_below)
    _first_above = njit(cache=True)(_first_above)
    first_below = _first_below
    first_above = _first_above
else:
    _ffd_kernel = _ffd_sorted
    first_below = _first_below_np
    first_above = _first_above_np

# first_below(rows, n, q): first i < n with rows[i] ⊑ q, else -1
# first_above(rows, n, q): first i < n with q ⊑ rows[i], else -1


def ffd_fits(instance: PackingInstance) -> bool:
    """First-fit-decreasing feasibility; ``True`` implies :func:`fits_exact`."""
    items = sorted(instance.items, reverse=True)
    caps = sorted(instance.capacities, reverse=True)
    if not items:
        return True
    if not caps or items[0] > caps[0]:
        return False
    if not HAS_NUMBA:
        for x in items:
            for j, r in enumerate(caps):
                if r >= x:
                    caps[j] = r - x
                    break
            else:
                return False
        return True
    return bool(_ffd_kernel(np.array(items, dtype=np.int64), np.array(caps, dtype=np.int64)))


def is_submultiset(h1: Sequence[int], h2: Sequence[int]) -> bool:
    return not (Counter(h1) - Counter(h2))


def history_leq(h1: History, h2: History) -> bool:
    """The ⊑ relation: ``h1``'s items provably fit bins sized by ``h2``'s items.

    Sub-multiset inclusion or a successful first-fit-decreasing packing.
    """
    return is_submultiset(h1, h2) or ffd_fits(PackingInstance(h1, h2))


def history_counts(history: History, k: int) -> np.ndarray:
    counts = np.zeros(max(k, 1), dtype=np.int64)
    for c in history:
        counts[c] += 1
    return counts


def fits_bruteforce(instance: PackingInstance, max_items: int = 10) -> bool:
    """Reference oracle: try every item-to-bin assignment in input order."""
    items = instance.items
    caps = instance.capacities
    if len(items) > max_items:
        raise OracleMisuseError(
            f"brute force limited to {max_items} items, got {len(items)}"
        )
    loads = [0] * len(caps)

    def rec(i):
        if i == len(items):
            return True
        for j in range(len(caps)):
            if loads[j] + items[i] <= caps[j]:
                loads[j] += items[i]
                ok = rec(i + 1)
                loads[j] -= items[i]
                if ok:
                    return True
        return False

    return rec(0)
