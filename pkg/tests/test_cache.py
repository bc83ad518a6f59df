import random

import pytest

from rogame.cache import (
    CacheIntegrityError,
    CacheMemoryExceeded,
    CacheResult,
    DominanceCache,
)

WON, LOST, UNKNOWN = CacheResult.WON, CacheResult.LOST, CacheResult.UNKNOWN
L = (2, 1, 0)


def test_query_examples():
    cache = DominanceCache(k=5)
    assert cache.query(L, (3,)) is UNKNOWN
    cache.insert(L, (2,), WON)
    assert cache.query(L, (3,)) is WON

    cache = DominanceCache(k=5)
    cache.insert(L, (3,), LOST)
    assert cache.query(L, (2,)) is LOST
    assert cache.query(L, (4,)) is UNKNOWN


def test_insert_is_keyed_by_fill():
    cache = DominanceCache(k=5)
    cache.insert(L, (2,), WON)
    assert cache.query(L, (2,)) is WON
    assert cache.query((2, 2, 0), (2,)) is UNKNOWN


def test_disjointness_is_enforced():
    cache = DominanceCache(k=5)
    cache.insert(L, (2,), WON)
    with pytest.raises(CacheIntegrityError):
        cache.insert(L, (2,), LOST)
    with pytest.raises(ValueError):
        cache.insert(L, (1,), UNKNOWN)


def test_counters():
    cache = DominanceCache(k=5)
    cache.insert(L, (2,), WON)
    cache.insert(L, (2,), WON)
    cache.insert((3, 0, 0), (4, 4), LOST)
    cache.query(L, (2, 1))
    cache.query((3, 0, 0), (1,))
    cache.query((9, 9, 9), ())
    stats = cache.stats()
    assert stats["cache_insertions"] == 2
    assert stats["cache_queries"] == 3
    assert stats["cache_won_hits"] == 1
    assert stats["cache_lost_hits"] == 1
    assert stats["cache_distinct_fills"] == 2
    assert stats["cache_stored_histories"] == 2


def test_scan_order_is_canonical():
    cache = DominanceCache(k=6)
    for h in [(5,), (1, 1), (3, 2), (2,)]:
        cache.insert(L, h, WON)
    won, _ = cache._table[L]
    assert won.keys == sorted(won.keys)
    for i, h in enumerate(won.keys):
        assert list(won.rows[i]) == [h.count(c) for c in range(6)]


def test_answers_never_regress_as_entries_accumulate():
    rng = random.Random(3)
    cache = DominanceCache(k=6)
    probes = [tuple(sorted((rng.randint(1, 5) for _ in range(rng.randint(0, 4))), reverse=True))
              for _ in range(40)]
    known = {}
    for _ in range(60):
        h = tuple(sorted((rng.randint(1, 5) for _ in range(rng.randint(0, 4))), reverse=True))
        # keep the stored sets consistent with a monotone "volume >= 6 wins" rule
        outcome = WON if sum(h) >= 6 else LOST
        try:
            cache.insert(L, h, outcome)
        except CacheIntegrityError:
            pytest.fail("consistent outcomes must never collide")
        for p in probes:
            answer = cache.query(L, p)
            if p in known:
                assert answer is known[p]
            if answer is not UNKNOWN:
                known[p] = answer


def test_prune_dominated_drops_redundant_entries():
    cache = DominanceCache(k=6, prune_dominated=True)
    cache.insert(L, (3, 2), WON)
    cache.insert(L, (2,), WON)
    assert cache.stored_histories == 1
    assert cache.query(L, (3, 2)) is WON


def test_memory_cap(monkeypatch):
    monkeypatch.setenv("ROGAME_CACHE_MAX_BYTES", "600")
    cache = DominanceCache(k=6)
    with pytest.raises(CacheMemoryExceeded):
        for i in range(100):
            cache.insert((i, 0), (1,), WON)
