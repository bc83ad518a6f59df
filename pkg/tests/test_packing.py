import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rogame import packing
from rogame.model import Params
from rogame.packing import (
    OracleMisuseError,
    PackingInstance,
    che,
    ffd_fits,
    fits_bruteforce,
    fits_exact,
    history_counts,
    history_leq,
)

from .oracles import packs_by_enumeration

instances = st.tuples(
    st.lists(st.integers(1, 9), max_size=7),
    st.lists(st.integers(1, 9), min_size=1, max_size=3),
)


@pytest.mark.parametrize(
    "items, caps, expected",
    [
        ((2, 2, 2), (3, 3), False),
        ((), (3, 3), True),
        ((4, 4, 3, 3, 2, 2), (9, 9), True),
        ((5,), (4, 4), False),
        ((3, 3, 2, 2, 2), (6, 6), True),
    ],
)
def test_fits_exact_examples(items, caps, expected):
    assert fits_exact(PackingInstance(items, caps)) is expected
    assert fits_bruteforce(PackingInstance(items, caps)) is expected
    assert packs_by_enumeration(items, caps) is expected


def test_instance_validation():
    with pytest.raises(ValueError):
        PackingInstance((0,), (3,))
    with pytest.raises(ValueError):
        PackingInstance((1,), (0,))
    assert str(PackingInstance((2, 4), (3,))) == "{4,2} into {3}"


def test_ffd_examples():
    assert ffd_fits(PackingInstance((2,), (3,)))
    assert not ffd_fits(PackingInstance((2, 2), (3,)))
    gap = PackingInstance((4, 4, 3, 3, 2, 2), (9, 9))
    assert not ffd_fits(gap) and fits_exact(gap)


def test_che_examples():
    assert che((2, 2, 2), Params(2, 4, 5))
    assert not che((), Params(3, 5, 7))
    assert not che((2, 2), Params(2, 3, 4))


def test_history_leq_examples():
    assert history_leq((2,), (2,))
    assert history_leq((1, 1), (3,))
    assert not history_leq((3,), (1, 1))
    assert history_leq((), (1,))


def test_bruteforce_refuses_large():
    with pytest.raises(OracleMisuseError):
        fits_bruteforce(PackingInstance((1,) * 11, (20,)))
    assert fits_bruteforce(PackingInstance((1,), (1,)))


@settings(max_examples=300, deadline=None)
@given(instances)
def test_soundness_chain(inst):
    items, caps = inst
    p = PackingInstance(items, caps)
    exact = fits_exact(p)
    assert exact == fits_bruteforce(p) == packs_by_enumeration(items, caps)
    if ffd_fits(p):
        assert exact


@settings(max_examples=200, deadline=None)
@given(instances, st.randoms())
def test_fits_exact_permutation_invariant(inst, rnd):
    items, caps = list(inst[0]), list(inst[1])
    before = fits_exact(PackingInstance(items, caps))
    rnd.shuffle(items)
    rnd.shuffle(caps)
    assert fits_exact(PackingInstance(items, caps)) == before


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(1, 6), max_size=7),
    st.integers(2, 3),
    st.integers(7, 9),
)
def test_che_antitone_in_k(history, m, k):
    history = tuple(sorted(history, reverse=True))
    if che(history, Params(m, k, k)):
        assert che(history, Params(m, k - 1, k - 1))


histories = st.lists(st.integers(1, 6), max_size=6).map(lambda h: tuple(sorted(h, reverse=True)))


@settings(max_examples=300, deadline=None)
@given(histories, histories)
def test_history_leq_implies_exact_order(h1, h2):
    # h1 ⊑ h2 must imply h1's items really fit bins sized by h2
    if history_leq(h1, h2):
        assert packs_by_enumeration(h1, h2)
    assert history_leq(h1, h1)


@settings(max_examples=200, deadline=None)
@given(histories, histories, histories)
def test_history_leq_transfers_to_supersets(h1, h2, extra):
    h3 = tuple(sorted(h2 + extra, reverse=True))
    if history_leq(h1, h2) and h3 and len(h1) <= 8:
        assert fits_bruteforce(PackingInstance(h1, h3))


def _scan_reference(rows, query, below):
    for i, row in enumerate(rows):
        h_row = tuple(c for c in range(len(row) - 1, 0, -1) for _ in range(row[c]))
        h_q = tuple(c for c in range(len(query) - 1, 0, -1) for _ in range(query[c]))
        if (history_leq(h_row, h_q) if below else history_leq(h_q, h_row)):
            return i
    return -1


@pytest.mark.parametrize("impl", ["active", "numpy"])
def test_dominance_scan_matches_history_leq(impl):
    below = packing.first_below if impl == "active" else packing._first_below_np
    above = packing.first_above if impl == "active" else packing._first_above_np
    rng = random.Random(7)
    k = 7
    for _ in range(300):
        stored = [tuple(sorted((rng.randint(1, k - 1) for _ in range(rng.randint(0, 5))),
                               reverse=True)) for _ in range(rng.randint(0, 6))]
        query = tuple(sorted((rng.randint(1, k - 1) for _ in range(rng.randint(0, 5))),
                             reverse=True))
        rows = np.zeros((max(len(stored), 1) + 2, k), dtype=np.int64)
        for i, h in enumerate(stored):
            rows[i] = history_counts(h, k)
        q = history_counts(query, k)
        counts = [history_counts(h, k) for h in stored]
        assert below(rows, len(stored), q) == _scan_reference(counts, q, True)
        assert above(rows, len(stored), q) == _scan_reference(counts, q, False)
