"""Seeded random instances.  Every generator draws only from its own
``random.Random(seed)`` so equal arguments give equal output."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .disjoint_sets import DisjointSets
from .graph import LabeledGraph
from .reductions import CnfGrammar, Rule, UnionSequence


def bidirected_random(n: int, m: int, k: int, seed: int, eps: float = 0.1) -> LabeledGraph:
    """Bidirected graph with ``m`` mirrored edge pairs on ``n`` nodes.

    Each pair is an epsilon edge with probability ``eps`` and otherwise a
    closing edge of a uniform index together with its opening mirror.
    """
    rng = random.Random(seed)
    m = min(m, n * (n + 1) // 2)
    used: set[tuple[int, int]] = set()
    triples = []
    while len(used) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        key = (min(u, v), max(u, v))
        if key in used:
            continue
        used.add(key)
        if rng.random() < eps:
            triples.append((u, v, 0))
            if u != v:
                triples.append((v, u, 0))
        else:
            i = rng.randint(1, k)
            triples.append((u, v, -i))
            triples.append((v, u, i))
    return LabeledGraph([f"n{u}" for u in range(n)], k, triples, mode="bidirected")


@dataclass
class KTree:
    n: int
    width: int
    edges: list[tuple[int, int]]


def ktree(n: int, width: int, seed: int, keep: float = 1.0) -> KTree:
    """Random partial k-tree: a k-tree on ``n`` nodes with each edge kept
    with probability ``keep``.  Its treewidth is at most ``width``."""
    rng = random.Random(seed)
    base = min(n, width + 1)
    edges = {(a, b) for a in range(base) for b in range(a + 1, base)}
    # each later node attaches to an existing width-clique
    cliques = [tuple(c for c in range(base) if c != drop) for drop in range(base)] if width > 0 else []
    for u in range(base, n):
        if not cliques:
            continue
        clique = rng.choice(cliques)
        for a in clique:
            edges.add((a, u))
        for drop in range(len(clique)):
            cliques.append(clique[:drop] + clique[drop + 1:] + (u,))
    kept = sorted(e for e in edges if rng.random() < keep)
    return KTree(n, width, kept)


def program_valid_random(
    methods: int,
    nodes_per_method: int,
    call_sites: int,
    seed: int,
    b: int = 3,
    width: int = 2,
    density: float = 0.6,
) -> LabeledGraph:
    """Program-valid graph with method tags.

    Local graphs are randomly oriented partial k-trees.  Call site ``i`` picks
    a caller and a different callee; its entries and exits come from per
    method pools of size at most ``b``.
    """
    rng = random.Random(seed)
    names: list[str] = []
    method_of: list[int] = []
    nodes: list[list[int]] = []
    triples: list[tuple[int, int, int]] = []
    for j in range(methods):
        size = rng.randint(1, nodes_per_method)
        ids = list(range(len(names), len(names) + size))
        names.extend(f"m{j}.{a}" for a in range(size))
        method_of.extend([j] * size)
        nodes.append(ids)
        for a, c in ktree(size, width, rng.getrandbits(32), density).edges:
            roll = rng.random()
            if roll < 0.45:
                triples.append((ids[a], ids[c], 0))
            elif roll < 0.9:
                triples.append((ids[c], ids[a], 0))
            else:
                triples.append((ids[a], ids[c], 0))
                triples.append((ids[c], ids[a], 0))
    entries: dict[int, list[int]] = {}
    exits: dict[int, list[int]] = {}
    pairs: set[tuple[int, int]] = set()
    k = 0
    if methods >= 2:
        for _ in range(call_sites):
            caller, callee = rng.sample(range(methods), 2)
            if callee not in entries:
                entries[callee] = rng.sample(nodes[callee], min(b, len(nodes[callee]), rng.randint(1, b)))
                exits[callee] = rng.sample(nodes[callee], min(b, len(nodes[callee]), rng.randint(1, b)))
            i = k + 1
            edges = []
            for x in rng.sample(nodes[caller], min(2, len(nodes[caller]), rng.randint(1, 2))):
                edges.append((x, rng.choice(entries[callee]), i))
            for y in rng.sample(nodes[caller], min(2, len(nodes[caller]), rng.randint(1, 2))):
                edges.append((rng.choice(exits[callee]), y, -i))
            edges = [e for e in edges if (e[0], e[1]) not in pairs]
            if not any(c > 0 for *_, c in edges) or not any(c < 0 for *_, c in edges):
                continue
            k = i
            for u, v, c in edges:
                pairs.add((u, v))
                triples.append((u, v, c))
    return LabeledGraph(names, max(k, 1), triples, method_of=method_of)


def union_seq_random(n: int, ops: int, seed: int) -> UnionSequence:
    rng = random.Random(seed)
    ds = DisjointSets(range(n))
    out = []
    tries = 0
    while len(out) < min(ops, max(n - 1, 0)) and tries < 100 * (ops + 1):
        tries += 1
        a, b = rng.randrange(n), rng.randrange(n)
        ra, rb = ds.find(a), ds.find(b)
        if ra == rb:
            continue
        ds.union((ra, rb), ra)
        out.append((a, b))
    return UnionSequence.of_size(n, out)


def random_cnf(nonterminals: int, terminals: int, rules: int, seed: int) -> CnfGrammar:
    """CNF grammar with every nonterminal heading a terminal rule (so none is
    barren) plus ``rules`` random binary rules."""
    rng = random.Random(seed)
    nts = ["S"] + [f"N{i}" for i in range(1, nonterminals)]
    ts = "abcdefghijklmnopqrstuvwxyz"[:terminals]
    if rules > len(nts) ** 3:
        raise ValueError(f"only {len(nts) ** 3} distinct binary rules exist over {len(nts)} nonterminals")
    out = [Rule(a, (rng.choice(ts),)) for a in nts]
    seen = set(out)
    while len(out) < len(nts) + rules:
        r = Rule(rng.choice(nts), (rng.choice(nts), rng.choice(nts)))
        if r not in seen:
            seen.add(r)
            out.append(r)
    return CnfGrammar("S", out)
