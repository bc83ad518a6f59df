"""Minimax search for the online player's winning strategy.

``Solver.solve`` evaluates a state in a fixed order: the volume guard, the
emptiest-bin guard, a dominance-cache lookup, then every adversary item.
``Solver.search`` tries the item in each bin from fullest to emptiest and
falls back to the cheat proof when every placement loses.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Tuple

from .cache import CacheResult, DominanceCache
from .model import (
    FillState,
    GameState,
    History,
    Item,
    ModelError,
    Params,
    add_to_history,
    render_state,
)
from .packing import che

log = logging.getLogger("rogame.trace")


class Outcome(str, Enum):
    ALGORITHM_WINS = "AlgorithmWins"
    ADVERSARY_WINS = "AdversaryWins"
    INCONCLUSIVE = "Inconclusive"


class NodeLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveConfig:
    cache_enabled: bool = True
    che_includes_current_item: bool = True
    node_limit: Optional[int] = None
    trace: bool = False
    trace_depth: int = 2
    prune_cache: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.node_limit is not None and self.node_limit < 1:
            raise ModelError(f"node_limit must be >= 1, got {self.node_limit}")
        if self.workers < 1:
            raise ModelError(f"workers must be >= 1, got {self.workers}")
        if self.trace_depth < 0:
            raise ModelError(f"trace_depth must be >= 0, got {self.trace_depth}")


@dataclass
class SolveStats:
    solve_calls: int = 0
    search_calls: int = 0
    che_calls: int = 0
    che_wins: int = 0
    guard_volume: int = 0
    guard_emptiest: int = 0
    guard_no_items: int = 0
    cache_queries: int = 0
    cache_won_hits: int = 0
    cache_lost_hits: int = 0
    cache_insertions: int = 0
    cache_distinct_fills: int = 0
    cache_stored_histories: int = 0
    peak_stored_histories: int = 0

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)

    def merge(self, other: "SolveStats") -> "SolveStats":
        merged = {k: v + getattr(other, k) for k, v in self.as_dict().items()}
        merged["peak_stored_histories"] = max(
            self.peak_stored_histories, other.peak_stored_histories
        )
        return SolveStats(**merged)


def item_universe(params: Params) -> List[Item]:
    """All adversary items in search order: ascending class, then overflow bits."""
    m, k = params.m, params.k
    items = [Item(0, (1,) * m)]
    for c in range(1, k):
        for bits in product((0, 1), repeat=m):
            items.append(Item(c, bits))
    return items


def generate_items(params: Params, fill: FillState) -> List[Item]:
    """Items the adversary may send from ``fill``: class below ``min(remaining, k)``."""
    remaining = params.volume - sum(fill) - 1
    limit = min(remaining, params.k)
    if limit <= 0:
        return []
    return [it for it in item_universe(params) if it.cls < limit]


class Solver:
    """One search over one instance, owning its cache and statistics."""

    def __init__(
        self,
        params: Params,
        config: SolveConfig = SolveConfig(),
        cache: Optional[DominanceCache] = None,
    ):
        self.params = params
        self.config = config
        if cache is None and config.cache_enabled:
            cache = DominanceCache(params.k, prune_dominated=config.prune_cache)
        self.cache = cache if config.cache_enabled else None
        self.stats = SolveStats()
        self._universe = item_universe(params)
        # items with class < limit form a prefix of the universe
        m = params.m
        self._prefix = [0] + [1 + (c - 1) * 2**m for c in range(1, params.k + 1)]
        self._che_memo: Dict[History, bool] = {}

    # -- public, typed entry points -------------------------------------

    def solve(self, state: GameState) -> bool:
        return self._solve(tuple(state.fill), tuple(state.history), 0)

    def search(self, item: Item, state: GameState) -> bool:
        return self._search(item, tuple(state.fill), tuple(state.history), 0)

    def terminal_reason(self, fill: FillState) -> Optional[str]:
        """Which guard, if any, closes ``fill`` without search."""
        p = self.params
        total = sum(fill)
        if total >= p.volume:
            return "VolumeExceeded"
        remaining = p.volume - total - 1
        if remaining + fill[-1] < p.s:
            return "EmptiestBin"
        if min(remaining, p.k) <= 0:
            return "NoItems"
        return None

    def items_for(self, fill: FillState) -> List[Item]:
        limit = min(self.params.volume - sum(fill) - 1, self.params.k)
        return self._universe[: self._prefix[limit]] if limit > 0 else []

    def che(self, history: History) -> bool:
        self.stats.che_calls += 1
        won = self._che_memo.get(history)
        if won is None:
            won = self._che_memo[history] = che(history, self.params)
        if won:
            self.stats.che_wins += 1
        return won

    def snapshot_stats(self) -> SolveStats:
        stats = SolveStats(**self.stats.as_dict())
        if self.cache is not None:
            for key, value in self.cache.stats().items():
                setattr(stats, key, value)
        return stats

    # -- recursion ------------------------------------------------------

    def _solve(self, fill: FillState, history: History, depth: int) -> bool:
        p = self.params
        st = self.stats
        st.solve_calls += 1
        limit_nodes = self.config.node_limit
        if limit_nodes is not None and st.solve_calls > limit_nodes:
            raise NodeLimitExceeded(f"node limit {limit_nodes} reached")
        if self.config.trace and depth <= self.config.trace_depth:
            log.info("%s%s", "  " * depth, render_state(fill, history))

        total = sum(fill)
        if total >= p.volume:
            st.guard_volume += 1
            return True
        remaining = p.volume - total - 1
        if remaining + fill[-1] < p.s:
            st.guard_emptiest += 1
            return True

        cache = self.cache
        if cache is not None:
            hit = cache.query(fill, history)
            if hit is CacheResult.WON:
                return True
            if hit is CacheResult.LOST:
                return False

        limit = remaining if remaining < p.k else p.k
        if limit <= 0:
            st.guard_no_items += 1
            return True
        for item in self._universe[: self._prefix[limit]]:
            if not self._search(item, fill, history, depth):
                if cache is not None:
                    self._record(fill, history, CacheResult.LOST)
                return False
        if cache is not None:
            self._record(fill, history, CacheResult.WON)
        return True

    def _record(self, fill, history, outcome) -> None:
        self.cache.insert(fill, history, outcome)
        stored = self.cache.stored_histories
        if stored > self.stats.peak_stored_histories:
            self.stats.peak_stored_histories = stored

    def _search(self, item: Item, fill: FillState, history: History, depth: int) -> bool:
        self.stats.search_calls += 1
        s = self.params.s
        cls, overflows = item
        grown = add_to_history(history, cls)
        tried = set()
        for b, level in enumerate(fill):
            new_level = level + cls + overflows[b]
            if new_level >= s:
                continue
            # bins sharing (level, overflow bit) give identical children
            key = (level, overflows[b])
            if key in tried:
                continue
            tried.add(key)
            new = list(fill)
            new[b] = new_level
            new.sort(reverse=True)
            if self._solve(tuple(new), grown, depth + 1):
                return True
        return self.che(grown if self.config.che_includes_current_item else history)


@dataclass
class SolveResult:
    params: Params
    outcome: Outcome
    stats: SolveStats
    certificate: Optional[object] = None
    solver: Optional[Solver] = field(default=None, repr=False)

    @property
    def alpha(self) -> Fraction:
        return self.params.alpha


def _search_chunk(args) -> Tuple[str, dict]:
    params, config, items = args
    solver = Solver(params, config)
    root = GameState((0,) * params.m, ())
    try:
        for item in items:
            if not solver.search(item, root):
                return "lost", solver.snapshot_stats().as_dict()
    except NodeLimitExceeded:
        return "inconclusive", solver.snapshot_stats().as_dict()
    return "won", solver.snapshot_stats().as_dict()


def _solve_parallel(params: Params, config: SolveConfig) -> SolveResult:
    solver = Solver(params, config)
    root = (0,) * params.m
    if solver.terminal_reason(root) is not None:
        return SolveResult(params, Outcome.ALGORITHM_WINS, solver.snapshot_stats(), solver=solver)
    items = solver.items_for(root)
    n = min(config.workers, len(items))
    chunks = [(params, config, items[i::n]) for i in range(n)]
    stats = solver.snapshot_stats()
    stats.solve_calls += 1
    verdicts = []
    with ProcessPoolExecutor(max_workers=n) as pool:
        for verdict, chunk_stats in pool.map(_search_chunk, chunks):
            verdicts.append(verdict)
            stats = stats.merge(SolveStats(**chunk_stats))
    if "lost" in verdicts:
        outcome = Outcome.ADVERSARY_WINS
    elif "inconclusive" in verdicts:
        outcome = Outcome.INCONCLUSIVE
    else:
        outcome = Outcome.ALGORITHM_WINS
    return SolveResult(params, outcome, stats, solver=solver)


def solve_instance(
    params: Params,
    config: SolveConfig = SolveConfig(),
    certificate: bool = False,
) -> SolveResult:
    """Decide the game from the empty state.

    With ``certificate=True`` a winning run also extracts a self-contained
    strategy certificate (see :mod:`rogame.certificate`).
    """
    if config.workers > 1:
        result = _solve_parallel(params, config)
        solver = result.solver
    else:
        solver = Solver(params, config)
        try:
            won = solver.solve(GameState((0,) * params.m, ()))
            outcome = Outcome.ALGORITHM_WINS if won else Outcome.ADVERSARY_WINS
        except NodeLimitExceeded:
            outcome = Outcome.INCONCLUSIVE
        result = SolveResult(params, outcome, solver.snapshot_stats(), solver=solver)

    if certificate and result.outcome is Outcome.ALGORITHM_WINS:
        from .certificate import extract

        if config.workers > 1 or config.node_limit is not None:
            # extraction needs an unbounded single-process solver
            solver = Solver(params, SolveConfig(
                cache_enabled=config.cache_enabled,
                che_includes_current_item=config.che_includes_current_item,
                prune_cache=config.prune_cache,
            ))
        result.certificate = extract(solver)
    return result


@dataclass
class SweepResult:
    m: int
    k: int
    outcome: Outcome
    capacity: Optional[int]
    tried: List[SolveResult]

    @property
    def alpha(self) -> Optional[Fraction]:
        return None if self.capacity is None else Fraction(self.capacity, self.k)


def minimal_capacity(m: int, k: int, config: SolveConfig = SolveConfig()) -> SweepResult:
    """Smallest ``s`` in ``[k, 2k]`` the online player wins, by ascending scan.

    ``capacity`` is ``None`` when no ``s <= 2k`` wins; the outcome is
    ``Inconclusive`` if any tried capacity hit the node limit first.
    """
    tried = []
    for s in range(k, 2 * k + 1):
        result = solve_instance(Params(m, k, s), config)
        tried.append(result)
        if result.outcome is Outcome.INCONCLUSIVE:
            return SweepResult(m, k, Outcome.INCONCLUSIVE, None, tried)
        if result.outcome is Outcome.ALGORITHM_WINS:
            return SweepResult(m, k, Outcome.ALGORITHM_WINS, s, tried)
    return SweepResult(m, k, Outcome.ADVERSARY_WINS, None, tried)
