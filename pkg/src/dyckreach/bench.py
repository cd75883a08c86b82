"""Wall-clock benchmarks of the DSCC engines on generated graphs."""
from __future__ import annotations

import csv
import io
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .bidirected import _ckernel, bidirected_reach
from .generators import bidirected_random, union_seq_random
from .graph import LabeledGraph
from .oracle import dsccs_from_closure, dyck_closure
from .reductions import union_graph

CSV_HEADER = ("family", "n", "m", "k", "algo", "ms", "iterations", "sum_sprime")
FAMILIES = ("bidirected-random", "union-seq-random")
ALGOS = ("fast", "fast-py", "fast-ext", "naive")
NAIVE_LIMIT = 2000


@dataclass
class BenchRow:
    family: str
    n: int
    m: int
    k: int
    algo: str
    ms: float
    iterations: int | None = None
    sum_sprime: int | None = None

    def cells(self) -> list:
        return [
            self.family, self.n, self.m, self.k, self.algo, f"{self.ms:.3f}",
            "" if self.iterations is None else self.iterations,
            "" if self.sum_sprime is None else self.sum_sprime,
        ]


def make_instance(family: str, n: int, seed: int, k: int = 2) -> LabeledGraph:
    """Sparse instance of ``family`` with about ``n`` nodes."""
    if family == "bidirected-random":
        return bidirected_random(n, 2 * n, k, seed)
    if family == "union-seq-random":
        return union_graph(union_seq_random(n, n - 1, seed))
    raise ValueError(f"unknown bench family {family!r}; choose from {FAMILIES}")


def _engine(algo: str):
    if algo == "fast":
        return lambda g: bidirected_reach(g)[1]
    if algo == "fast-py":
        return lambda g: bidirected_reach(g, backend="py")[1]
    if algo == "fast-ext":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not available")
        return lambda g: bidirected_reach(g, backend="ext")[1]
    if algo == "naive":
        return lambda g: dsccs_from_closure(dyck_closure(g)) and None
    raise ValueError(f"unknown algo {algo!r}; choose from {ALGOS}")


def time_cell(family: str, g: LabeledGraph, algo: str, warmup: int = 3, reps: int = 5) -> BenchRow:
    run = _engine(algo)
    for _ in range(warmup):
        run(g)
    samples = []
    stats = None
    for _ in range(reps):
        t0 = time.perf_counter()
        stats = run(g)
        samples.append((time.perf_counter() - t0) * 1000.0)
    row = BenchRow(family, g.n, g.m, g.k, algo, statistics.median(samples))
    if stats is not None:
        row.iterations = stats.iterations
        row.sum_sprime = stats.sum_sprime
    return row


def run_bench(
    family: str,
    sizes: list[int],
    algos: list[str],
    seed: int = 0,
    *,
    warmup: int = 3,
    reps: int = 5,
    parallel: bool = False,
    naive_limit: int = NAIVE_LIMIT,
) -> list[BenchRow]:
    """One row per (size, algo); ``naive`` is skipped above ``naive_limit`` nodes."""
    for algo in algos:
        _engine(algo)
    graphs = {n: make_instance(family, n, seed + n) for n in sizes}
    cells = [(n, a) for n in sizes for a in algos if not (a == "naive" and n > naive_limit)]

    def one(cell):
        n, algo = cell
        return time_cell(family, graphs[n], algo, warmup, reps)

    if parallel:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(one, cells))
    return [one(c) for c in cells]


def to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.cells())
    return buf.getvalue()
