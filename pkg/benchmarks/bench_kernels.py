"""Time the compiled kernels against the numpy fallback.

Each backend runs in its own interpreter, since the choice is fixed at
import time by ROGAME_DISABLE_NUMBA.

    python3 benchmarks/bench_kernels.py [--instances 3,6,9 4,9,13]
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from rogame import Params, solve_instance
from rogame._accel import HAS_NUMBA
from rogame import packing

out = {"numba": HAS_NUMBA, "solve": {}, "scan": None}
solve_instance(Params(3, 4, 6))  # compile / load kernels
for triple in sys.argv[1:]:
    m, k, s = map(int, triple.split(","))
    t = time.perf_counter()
    r = solve_instance(Params(m, k, s))
    out["solve"][triple] = [r.outcome.value, time.perf_counter() - t]

rng = np.random.default_rng(0)
# every row holds a class-7 item and the probe does not: a miss, so a full scan
rows = rng.integers(0, 3, size=(5000, 8)).astype(np.int64)
rows[:, 7] = 1
probe = rng.integers(0, 3, size=8).astype(np.int64)
probe[7] = 0
t = time.perf_counter()
for _ in range(200):
    packing.first_below(rows, len(rows), probe)
out["scan"] = (time.perf_counter() - t) / 200
print(json.dumps(out))
"""


def run(disable, instances):
    env = dict(os.environ)
    if disable:
        env["ROGAME_DISABLE_NUMBA"] = "1"
    else:
        env.pop("ROGAME_DISABLE_NUMBA", None)
    proc = subprocess.run([sys.executable, "-c", CHILD, *instances], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", nargs="+", default=["3,6,9", "3,8,12", "4,9,13"])
    args = ap.parse_args()
    fast = run(False, args.instances)
    slow = run(True, args.instances)
    print(f"{'workload':<16}{'numba':>12}{'numpy':>12}{'ratio':>8}")
    for triple in args.instances:
        a, b = fast["solve"][triple], slow["solve"][triple]
        assert a[0] == b[0], f"backends disagree on {triple}"
        print(f"solve {triple:<10}{a[1]:>11.3f}s{b[1]:>11.3f}s{b[1] / a[1]:>8.2f}")
    print(f"{'scan 5000x8':<16}{fast['scan'] * 1e6:>10.1f}us{slow['scan'] * 1e6:>10.1f}us"
          f"{slow['scan'] / fast['scan']:>8.2f}")


if __name__ == "__main__":
    main()
