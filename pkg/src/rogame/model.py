"""Integer game model: parameters, fill states, histories, items and moves.

Fill states and histories are plain tuples in canonical (non-increasing)
order so they hash and compare by value and stay cheap on the solver's hot
path. ``Item`` and ``GameState`` are named tuples for the same reason.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

FillState = Tuple[int, ...]
History = Tuple[int, ...]


class ModelError(ValueError):
    """A value violates the game model (bad params, wrong length, bad bin)."""


@dataclass(frozen=True)
class Params:
    """One game instance: ``m`` bins, granularity ``k``, online capacity ``s``."""

    m: int
    k: int
    s: int

    def __post_init__(self) -> None:
        for name in ("m", "k", "s"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ModelError(f"{name} must be an integer, got {value!r}")
        if self.m < 2:
            raise ModelError(f"need at least 2 bins, got m={self.m}")
        if self.k < 1:
            raise ModelError(f"granularity must be >= 1, got k={self.k}")
        if self.s < self.k:
            raise ModelError(f"capacity s={self.s} is below granularity k={self.k}")

    @property
    def alpha(self) -> Fraction:
        """Stretching factor certified by a win, as an exact fraction."""
        return Fraction(self.s, self.k)

    @property
    def volume(self) -> int:
        """Total offline volume ``m * k``."""
        return self.m * self.k


class Item(NamedTuple):
    cls: int
    overflows: Tuple[int, ...]


class GameState(NamedTuple):
    fill: FillState
    history: History


def canonicalize(levels: Sequence[int], m: int) -> FillState:
    """Return ``levels`` as a non-increasing tuple of length ``m``."""
    if len(levels) != m:
        raise ModelError(f"expected {m} fill levels, got {len(levels)}")
    if any(level < 0 for level in levels):
        raise ModelError(f"fill levels must be non-negative: {tuple(levels)}")
    return tuple(sorted(levels, reverse=True))


def make_history(classes: Iterable[int], k: Optional[int] = None) -> History:
    """Canonical multiset of item classes; class 0 is dropped."""
    out = []
    for c in classes:
        if c < 0 or (k is not None and c > k - 1):
            raise ModelError(f"item class {c} out of range for k={k}")
        if c:
            out.append(c)
    out.sort(reverse=True)
    return tuple(out)


def add_to_history(history: History, cls: int) -> History:
    if cls == 0:
        return history
    i = 0
    while i < len(history) and history[i] >= cls:
        i += 1
    return history[:i] + (cls,) + history[i:]


def initial_state(params: Params) -> GameState:
    return GameState((0,) * params.m, ())


def make_item(cls: int, overflows: Sequence[int], params: Params) -> Item:
    if not 0 <= cls <= params.k - 1:
        raise ModelError(f"item class {cls} out of range 0..{params.k - 1}")
    if len(overflows) != params.m or any(b not in (0, 1) for b in overflows):
        raise ModelError(f"overflow vector must be {params.m} bits: {overflows!r}")
    if cls == 0 and not all(overflows):
        raise ModelError("class-0 items must overflow every bin")
    return Item(cls, tuple(int(b) for b in overflows))


def place(fill: FillState, item: Item, bin: int, s: int) -> Optional[FillState]:
    """Put ``item`` into canonical bin ``bin``.

    Returns the re-canonicalized fill state, or ``None`` when the bin would
    reach level ``s`` (an online loss).
    """
    if not 0 <= bin < len(fill):
        raise ModelError(f"bin index {bin} out of range for {len(fill)} bins")
    level = fill[bin] + item.cls + item.overflows[bin]
    if level >= s:
        return None
    new = list(fill)
    new[bin] = level
    new.sort(reverse=True)
    return tuple(new)


def render_state(fill: Sequence[int], history: Sequence[int]) -> str:
    """Canonical text key ``L=[..];H=[..]`` used in logs and certificates."""
    return "L=[{}];H=[{}]".format(
        ",".join(map(str, fill)), ",".join(map(str, history))
    )


def render_item(item: Item) -> str:
    """Item key ``c|bits``, e.g. ``2|10``."""
    return f"{item.cls}|" + "".join(map(str, item.overflows))
