"""The eight acceptance criteria, each at its stated tolerance.

Every test prints one ``criterion N ...: PASS|FAIL`` line; the lines are
repeated in a summary section at the end of the pytest run.
"""
from __future__ import annotations

import csv
import io
import itertools
import random
import time

import pytest

from conftest import ACCEPTANCE_LINES, anbn
from dyckreach.bidirected import bidirected_reach
from dyckreach.cli import main as cli_main
from dyckreach.generators import bidirected_random, ktree, program_valid_random, random_cnf, union_seq_random
from dyckreach.libclient import (
    ProcessStats,
    SummaryArtifact,
    analyze_client,
    preprocess_library,
    process,
    validate_program_valid,
)
from dyckreach.oracle import dsccs_from_closure, dyck_closure
from dyckreach.reductions import cfl_parse_via_dyck, cky, union_graph
from dyckreach.treedec import decompose, height_bound, rebalance, validate


def report(capsys, number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} {title}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


# -- shared instances ---------------------------------------------------------

def small_bidirected(seed: int):
    rng = random.Random(seed)
    n = rng.randint(1, 40)
    k = rng.randint(1, 4)
    return bidirected_random(n, rng.randint(0, 60), k, seed, eps=rng.choice([0.0, 0.1, 0.3]))


CRIT1_SEEDS = range(1000)


@pytest.fixture(scope="module")
def pipeline_runs():
    """Criterion 5 instances with their one-phase and two-phase indexes."""
    runs = []
    for seed in range(200):
        rng = random.Random(seed)
        g = program_valid_random(
            rng.randint(2, 20), rng.randint(1, 30), rng.randint(0, 15), seed, b=rng.randint(1, 3)
        )
        pvg = validate_program_valid(g)
        t0 = time.perf_counter()
        stats = ProcessStats()
        one = process(pvg, stats=stats)
        lib_methods = [j for j in pvg.methods if rng.random() < 0.5]
        art = SummaryArtifact.loads(preprocess_library(pvg.restrict(lib_methods)).dumps())
        two = analyze_client(art, pvg, stats=ProcessStats())
        runs.append((g, pvg, one, two, time.perf_counter() - t0))
    return runs


# -- criteria -----------------------------------------------------------------

def test_criterion_1_oracle_equivalence(capsys):
    t0 = time.perf_counter()
    bad = []
    for seed in CRIT1_SEEDS:
        g = small_bidirected(seed)
        assert g.n <= 40 and g.k <= 4 and g.m <= 120
        if bidirected_reach(g)[0] != dsccs_from_closure(dyck_closure(g)):
            bad.append(seed)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    report(capsys, 1, "oracle equivalence", ok, f"{len(CRIT1_SEEDS)} graphs, mismatching seeds {bad[:5]}, {dt:.1f} s")


def test_criterion_2_complexity_counters(capsys):
    graphs = [small_bidirected(seed) for seed in CRIT1_SEEDS]
    for n in (1000, 10_000, 100_000):
        for seed in range(3):
            graphs.append(bidirected_random(n, 2 * n, 2, seed))
    violations = []
    worst_it = worst_sp = 0.0
    for g in graphs:
        for densify in (True, False):
            _, st = bidirected_reach(g, densify=densify)
            if st.iterations > 4 * g.n or st.sum_sprime > 2 * g.m:
                violations.append((g.n, g.m, densify, st.iterations, st.sum_sprime))
            worst_it = max(worst_it, st.iterations / max(g.n, 1))
            worst_sp = max(worst_sp, st.sum_sprime / max(g.m, 1))
    report(capsys, 2, "complexity counters", not violations,
           f"{2 * len(graphs)} runs up to n=100000, {len(violations)} violations, "
           f"max iterations/n {worst_it:.2f}, max sum_sprime/m {worst_sp:.2f}")


def test_criterion_3_union_graph_reduction(capsys):
    t0 = time.perf_counter()
    bad = []
    pairs = 0
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(1, 200)
        seq = union_seq_random(n, rng.randint(0, n - 1), seed)
        g = union_graph(seq)
        part, _ = bidirected_reach(g)
        ds = seq.sets()
        root = [ds.find(e) for e in seq.elements]
        for a, b in itertools.combinations(range(n), 2):
            pairs += 1
            if (root[a] == root[b]) != part.query(a, b):
                bad.append((seed, a, b))
    dt = time.perf_counter() - t0
    report(capsys, 3, "union graph reduction", not bad and dt < 30,
           f"200 sequences, {pairs} pairs, {len(bad)} mismatches, {dt:.1f} s")


def test_criterion_4_parse_reduction(capsys):
    t0 = time.perf_counter()
    grammars = [anbn()] + [random_cnf(rng_nt, 2, 2 * rng_nt, seed) for seed, rng_nt in ((1, 3), (2, 4), (3, 6))]
    bad = []
    strings = 0
    for g in grammars:
        assert len(g.nonterminals) <= 6 and len(g.terminals) <= 2
        for n in range(0, 9):
            for s in itertools.product(g.terminals, repeat=n):
                strings += 1
                if cfl_parse_via_dyck(g, s) != cky(g, s):
                    bad.append((g.start, "".join(s)))
    dt = time.perf_counter() - t0
    report(capsys, 4, "CFL parsing reduction", not bad and dt < 60,
           f"{len(grammars)} grammars, {strings} strings, {len(bad)} mismatches, {dt:.1f} s")


def test_criterion_5_pipeline_equivalence(capsys, pipeline_runs):
    t0 = time.perf_counter()
    bad_a, bad_b, pairs = [], [], 0
    for seed, (g, pvg, one, two, _) in enumerate(pipeline_runs):
        rel = dyck_closure(g)
        for j in pvg.methods:
            for u in pvg.nodes_of[j]:
                for v in pvg.nodes_of[j]:
                    pairs += 1
                    a = one[j].query(u, v)
                    if a != rel.s_contains(u, v):
                        bad_a.append((seed, u, v))
                    if two[j].query(u, v) != a:
                        bad_b.append((seed, u, v))
    dt = time.perf_counter() - t0 + sum(r[4] for r in pipeline_runs)
    report(capsys, 5, "library/client pipeline equivalence", not bad_a and not bad_b and dt < 120,
           f"200 programs, {pairs} same-method pairs, {len(bad_a)} oracle mismatches, "
           f"{len(bad_b)} two-phase mismatches, {dt:.1f} s")


def test_criterion_6_tree_decompositions(capsys):
    violations = []
    checked = 0
    for seed in range(100):
        rng = random.Random(seed)
        width = rng.randint(1, 3)
        n = rng.randint(1, 200)
        kt = ktree(n, width, seed, keep=rng.choice([1.0, 0.8, 0.5]))
        for heuristic in ("min-degree", "min-fill"):
            td = decompose(range(n), kt.edges, heuristic)
            rb = rebalance(td)
            checked += 2
            for name, t in (("heuristic", td), ("rebalanced", rb)):
                if validate(t, range(n), kt.edges):
                    violations.append((seed, heuristic, name, "C1-C3"))
            if td.width > width + 2:
                violations.append((seed, heuristic, "width", td.width, width))
            if rb.height > height_bound(len(td.bags)) or rb.width > 3 * td.width + 2:
                violations.append((seed, heuristic, "rebalance", rb.height, rb.width))
    report(capsys, 6, "tree decomposition guarantees", not violations,
           f"{checked} decompositions of planted partial k-trees, {len(violations)} violations")


def test_criterion_7_walk_bound(capsys, pipeline_runs):
    violations = []
    indexes = 0
    for seed, (_, _, one, two, _) in enumerate(pipeline_runs):
        for index in (one, two):
            for j, idx in index.items():
                indexes += 1
                if idx.max_walk > idx.td.height + 1:
                    violations.append((seed, j, idx.max_walk, idx.td.height))
    report(capsys, 7, "bags visited per update/query", not violations,
           f"{indexes} method indexes, {len(violations)} walks above height+1")


def test_criterion_8_scaling(capsys, tmp_path):
    out = tmp_path / "bench.csv"
    t0 = time.perf_counter()
    code = cli_main(["bench", "--family", "bidirected-random", "--sizes", "20000,40000,80000,160000",
                     "--algos", "fast", "--seed", "0", "--out", str(out)])
    dt = time.perf_counter() - t0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    ms = [float(r["ms"]) for r in rows]
    ratios = [b / a for a, b in zip(ms, ms[1:])]
    ok = code == 0 and len(ms) == 4 and all(r <= 2.5 for r in ratios) and dt < 300
    report(capsys, 8, "linear scaling of fast", ok,
           "ms " + " ".join(f"{x:.1f}" for x in ms) + "; ratios " + " ".join(f"{r:.2f}" for r in ratios)
           + f"; {dt:.1f} s")
