"""Informational: dominance cache against a plain exact-match table.

Both runs use the same solver. Only the cache lookup differs: the exact
table answers when the very same (fill, history) pair was seen before.

    python3 benchmarks/bench_cache.py [--instances 3,6,9 4,7,11]
"""
import argparse
import time

from rogame import CacheResult, DominanceCache, Params, Solver
from rogame.model import initial_state


class ExactCache(DominanceCache):
    def query(self, fill, history):
        self.counters.queries += 1
        entry = self._table.get(fill)
        if entry is None:
            return CacheResult.UNKNOWN
        won, lost = entry
        if history in won.members:
            self.counters.won_hits += 1
            return CacheResult.WON
        if history in lost.members:
            self.counters.lost_hits += 1
            return CacheResult.LOST
        return CacheResult.UNKNOWN


def run(params, cache_cls):
    solver = Solver(params, cache=cache_cls(params.k))
    start = time.perf_counter()
    won = solver.solve(initial_state(params))
    return won, time.perf_counter() - start, solver.cache


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", nargs="+", default=["3,6,9", "3,8,12", "4,6,9", "4,7,11"])
    args = ap.parse_args()
    run(Params(3, 4, 6), DominanceCache)  # warm kernels
    print(f"{'instance':<10}{'exact s':>10}{'dom s':>10}{'exact stored':>14}{'dom stored':>12}"
          f"{'time saved':>12}{'memory saved':>14}")
    for triple in args.instances:
        params = Params(*map(int, triple.split(",")))
        won_a, t_a, exact = run(params, ExactCache)
        won_b, t_b, dom = run(params, DominanceCache)
        assert won_a == won_b, f"caches disagree on {triple}"
        print(f"{triple:<10}{t_a:>10.3f}{t_b:>10.3f}{exact.stored_histories:>14}"
              f"{dom.stored_histories:>12}{1 - t_b / t_a:>12.0%}"
              f"{1 - dom.approx_bytes / exact.approx_bytes:>14.0%}")


if __name__ == "__main__":
    main()
