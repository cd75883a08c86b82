"""Compiled kernel vs pure-Python fallback on the same sparse graphs.

    python3 benchmarks/bench_backends.py [--sizes 5000,10000,20000] [--reps 5]
"""
from __future__ import annotations

import argparse
import sys

from dyckreach.bench import run_bench, to_csv
from dyckreach.bidirected import _ckernel


def main() -> int:
    p = argparse.ArgumentParser()
    p.add_argument("--family", default="bidirected-random")
    p.add_argument("--sizes", default="5000,10000,20000")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--warmup", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    if _ckernel is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = run_bench(args.family, sizes, ["fast-ext", "fast-py"], args.seed, warmup=args.warmup, reps=args.reps)
    sys.stdout.write(to_csv(rows))
    by = {(r.n, r.algo): r for r in rows}
    print()
    print(f"{'n':>8} {'ext ms':>10} {'py ms':>10} {'speedup':>8}")
    for r in rows:
        if r.algo == "fast-ext":
            py = by[(r.n, "fast-py")]
            print(f"{r.n:>8} {r.ms:>10.2f} {py.ms:>10.2f} {py.ms / r.ms:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
