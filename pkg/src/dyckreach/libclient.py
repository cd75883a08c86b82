"""Reachability summaries for program-valid graphs of low treewidth.

A program-valid graph splits its nodes into methods.  Edges inside a method
are epsilon edges; an ``open i`` edge passes a value from a call node ``x``
in the caller to an entry ``u`` of the callee, and a ``close i`` edge returns
from an exit ``v`` of the callee to a return node ``y`` back in the caller.

Each method gets a :class:`ReachIndex`: a tree decomposition of its local
graph (widened with every possible summary edge ``x -> y``) plus a set R of
reachable pairs restricted to pairs that share a bag.  Queries climb from the
root bags of both endpoints to the tree root.  :func:`process` saturates the
indexes by turning entry-to-exit reachability into summary edges in the
callers until nothing changes.
"""
from __future__ import annotations

import hashlib
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    InvalidDecomposition,
    MissingMethod,
    MixedLocalEdge,
    NotCoResident,
    ParseError,
    SplitCallSite,
    StaleSummary,
    UnknownNode,
)
from .graph import LabeledGraph, code_token
from .treedec import TreeDecomposition, bag_of_edge, decompose, rebalance


# -- program-valid graphs -----------------------------------------------------

@dataclass
class ProgramValidGraph:
    base: LabeledGraph
    method_of: list[int]
    methods: list[int]
    nodes_of: dict[int, list[int]]
    local_edges: dict[int, list[tuple[int, int]]]
    calls: dict[int, list[tuple[int, int]]]  # i -> [(call node x, entry u)]
    returns: dict[int, list[tuple[int, int]]]  # i -> [(exit v, return node y)]
    caller: dict[int, int]  # i -> method holding V_c(i) and V_r(i)
    callee: dict[int, int]  # i -> method holding V_e(i) and V_x(i)
    b: int = 0
    entries: dict[int, list[int]] = field(default_factory=dict)  # method -> entry nodes
    exits: dict[int, list[int]] = field(default_factory=dict)

    def call_nodes(self, i: int) -> set[int]:
        return {x for x, _ in self.calls.get(i, ())}

    def return_nodes(self, i: int) -> set[int]:
        return {y for _, y in self.returns.get(i, ())}

    def name(self, u: int) -> str:
        return self.base.names[u]

    def restrict(self, methods: Iterable[int]) -> ProgramValidGraph:
        """The program-valid graph induced by the nodes of ``methods``."""
        keep = set(methods)
        unknown = keep - set(self.methods)
        if unknown:
            raise MissingMethod(f"no such methods: {sorted(unknown)}")
        sub, _ = self.base.subgraph(u for u in range(self.base.n) if self.method_of[u] in keep)
        return validate_program_valid(sub)


def validate_program_valid(g: LabeledGraph, method_of: Sequence[int | None] | None = None) -> ProgramValidGraph:
    if method_of is None:
        method_of = g.method_of
    if method_of is None or any(m is None for m in method_of):
        missing = [g.names[u] for u in range(g.n)] if method_of is None else [
            g.names[u] for u, m in enumerate(method_of) if m is None
        ]
        raise MissingMethod(f"nodes without a method tag: {' '.join(missing[:5])}")
    method_of = list(method_of)
    methods = sorted(set(method_of))
    nodes_of: dict[int, list[int]] = {j: [] for j in methods}
    for u, j in enumerate(method_of):
        nodes_of[j].append(u)
    local_edges: dict[int, list[tuple[int, int]]] = {j: [] for j in methods}
    calls: dict[int, list[tuple[int, int]]] = defaultdict(list)
    returns: dict[int, list[tuple[int, int]]] = defaultdict(list)
    caller_sets: dict[int, set[int]] = defaultdict(set)
    callee_sets: dict[int, set[int]] = defaultdict(set)
    nm = g.names
    for u, v, c in g.triples():
        same = method_of[u] == method_of[v]
        if c == 0:
            if not same:
                raise MixedLocalEdge(f"epsilon edge {nm[u]} -> {nm[v]} crosses methods")
            if u != v:
                local_edges[method_of[u]].append((u, v))
            continue
        if same:
            raise MixedLocalEdge(
                f"edge {nm[u]} -> {nm[v]} labeled {code_token(c)} stays inside method {method_of[u]}"
            )
        if c > 0:
            calls[c].append((u, v))
            caller_sets[c].add(method_of[u])
            callee_sets[c].add(method_of[v])
        else:
            returns[-c].append((u, v))
            callee_sets[-c].add(method_of[u])
            caller_sets[-c].add(method_of[v])
    caller, callee = {}, {}
    for i in sorted(set(caller_sets) | set(callee_sets)):
        if len(caller_sets[i]) != 1:
            raise SplitCallSite(f"call/return nodes of index {i} span methods {sorted(caller_sets[i])}")
        if len(callee_sets[i]) != 1:
            raise SplitCallSite(f"entry/exit nodes of index {i} span methods {sorted(callee_sets[i])}")
        caller[i] = next(iter(caller_sets[i]))
        callee[i] = next(iter(callee_sets[i]))
    entries = {j: sorted({u for i in calls for _, u in calls[i] if method_of[u] == j}) for j in methods}
    exits = {j: sorted({v for i in returns for v, _ in returns[i] if method_of[v] == j}) for j in methods}
    b = max([len(entries[j]) for j in methods] + [len(exits[j]) for j in methods] + [0])
    return ProgramValidGraph(
        g, method_of, methods, nodes_of, local_edges, dict(calls), dict(returns),
        caller, callee, b, entries, exits,
    )


def maximal_local_graph(pvg: ProgramValidGraph, j: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Nodes and undirected edges of method ``j``'s local graph widened with
    every pair (call node, return node) of one call site."""
    if j not in pvg.nodes_of:
        raise MissingMethod(f"no method {j}")
    edges = {tuple(sorted(e)) for e in pvg.local_edges[j]}
    for i, owner in pvg.caller.items():
        if owner != j:
            continue
        for x in pvg.call_nodes(i):
            for y in pvg.return_nodes(i):
                if x != y:
                    edges.add((min(x, y), max(x, y)))
    return list(pvg.nodes_of[j]), sorted(edges)


# -- the data structure D -----------------------------------------------------

def _closure(nodes: list[int], has) -> list[tuple[int, int]]:
    """All reachable pairs among ``nodes`` under the relation ``has``."""
    n = len(nodes)
    reach = [[a == b or has(nodes[a], nodes[b]) for b in range(n)] for a in range(n)]
    for m in range(n):
        rm = reach[m]
        for a in range(n):
            if reach[a][m]:
                ra = reach[a]
                for b in range(n):
                    if rm[b]:
                        ra[b] = True
    return [(nodes[a], nodes[b]) for a in range(n) for b in range(n) if a != b and reach[a][b]]


class ReachIndex:
    """Reachability among the nodes of one method, stored bag-locally."""

    def __init__(self, method: int, nodes: Iterable[int], td: TreeDecomposition):
        self.method = method
        self.nodes = set(nodes)
        self.td = td
        self.rf: dict[int, set[int]] = defaultdict(set)
        self.rb: dict[int, set[int]] = defaultdict(set)
        self.summary_edges: list[tuple[int, int]] = []
        self.updates = 0
        self.max_walk = 0  # most bags visited by one climb of update or query
        self.widened = False

    # R as a relation: (u, v) is stored on the side of the deeper root bag.
    def has(self, u: int, v: int) -> bool:
        return u == v or v in self.rf.get(u, ()) or u in self.rb.get(v, ())

    def _insert(self, u: int, v: int) -> bool:
        if self.has(u, v):
            return False
        td = self.td
        bu, bv = td.bag_of(u), td.bag_of(v)
        if td.lv[bu] >= td.lv[bv]:
            if v not in td.bags[bu]:
                raise NotCoResident(f"nodes {u} and {v} share no bag")
            self.rf[u].add(v)
        else:
            if u not in td.bags[bv]:
                raise NotCoResident(f"nodes {u} and {v} share no bag")
            self.rb[v].add(u)
        return True

    def _close_bag(self, b: int) -> None:
        for u, v in _closure(sorted(self.td.bags[b]), self.has):
            self._insert(u, v)

    def pairs(self) -> set[tuple[int, int]]:
        out = {(u, v) for u, vs in self.rf.items() for v in vs}
        out.update((u, v) for v, us in self.rb.items() for u in us)
        return out

    def _walk(self, start: int, forward: bool) -> set[int]:
        td = self.td
        reached = {start}
        path = td.path_to_root(td.bag_of(start))
        self.max_walk = max(self.max_walk, len(path))
        for b in path:
            bag = td.bags[b]
            frontier = [w for w in bag if w in reached]
            while frontier:
                a = frontier.pop()
                for w in bag:
                    if w not in reached and (self.has(a, w) if forward else self.has(w, a)):
                        reached.add(w)
                        frontier.append(w)
        return reached

    def query(self, x: int, y: int) -> bool:
        for w in (x, y):
            if w not in self.nodes:
                raise UnknownNode(f"node {w} is not in method {self.method}")
        if x == y:
            return True
        return bool(self._walk(x, True) & self._walk(y, False))

    def update(self, x: int, y: int) -> bool:
        """Insert the edge ``x -> y``; False if R already had the pair."""
        if self.has(x, y):
            return False
        b = bag_of_edge(self.td, x, y)
        self._insert(x, y)
        self.updates += 1
        path = self.td.path_to_root(b)
        self.max_walk = max(self.max_walk, len(path))
        for c in path:
            self._close_bag(c)
        return True


def d_build(method: int, nodes: Iterable[int], edges: Iterable[tuple[int, int]], td: TreeDecomposition) -> ReachIndex:
    idx = ReachIndex(method, nodes, td)
    missing = idx.nodes - set(td.root_bag)
    if missing:
        raise InvalidDecomposition(f"nodes {sorted(missing)[:5]} are in no bag")
    for u, v in edges:
        try:
            idx._insert(u, v)
        except NotCoResident:
            raise InvalidDecomposition(f"edge ({u}, {v}) is not covered by any bag") from None
    for b in td.postorder():
        idx._close_bag(b)
    return idx


def d_update(idx: ReachIndex, x: int, y: int) -> None:
    idx.update(x, y)


def d_query(idx: ReachIndex, x: int, y: int) -> bool:
    return idx.query(x, y)


def build_index(pvg: ProgramValidGraph, j: int, heuristic: str = "min-degree") -> ReachIndex:
    nodes, wide = maximal_local_graph(pvg, j)
    td = rebalance(decompose(nodes, wide, heuristic))
    return d_build(j, nodes, pvg.local_edges[j], td)


# -- saturation ---------------------------------------------------------------

@dataclass
class ProcessStats:
    extractions: int = 0
    updates: int = 0
    max_walk: int = 0
    max_height: int = 0


def process(
    pvg: ProgramValidGraph,
    prebuilt: dict[int, ReachIndex] | None = None,
    *,
    heuristic: str = "min-degree",
    stats: ProcessStats | None = None,
) -> dict[int, ReachIndex]:
    """Build missing indexes and insert summary edges until a fixpoint."""
    prebuilt = dict(prebuilt or {})
    stray = set(prebuilt) - set(pvg.methods)
    if stray:
        raise MissingMethod(f"prebuilt indexes for unknown methods {sorted(stray)}")
    index = {j: prebuilt.get(j) or build_index(pvg, j, heuristic) for j in pvg.methods}
    mo = pvg.method_of
    called_from: dict[int, list[tuple[int, int]]] = defaultdict(list)  # entry -> [(x, i)]
    returns_to: dict[tuple[int, int], list[int]] = defaultdict(list)  # (exit, i) -> [y]
    for i, pairs in pvg.calls.items():
        for x, u in pairs:
            called_from[u].append((x, i))
    for i, pairs in pvg.returns.items():
        for v, y in pairs:
            returns_to[(v, i)].append(y)
    pool = deque(pvg.methods)
    queued = set(pool)
    stats = stats if stats is not None else ProcessStats()
    while pool:
        j = pool.popleft()
        queued.discard(j)
        stats.extractions += 1
        idx = index[j]
        for u in pvg.entries[j]:
            for v in pvg.exits[j]:
                if not idx.query(u, v):
                    continue
                for x, i in called_from[u]:
                    for y in returns_to.get((v, i), ()):
                        caller = index[mo[x]]
                        if caller.query(x, y):
                            continue
                        caller.update(x, y)
                        caller.summary_edges.append((x, y))
                        stats.updates += 1
                        if mo[x] not in queued:
                            queued.add(mo[x])
                            pool.append(mo[x])
    for idx in index.values():
        stats.max_walk = max(stats.max_walk, idx.max_walk)
        stats.max_height = max(stats.max_height, idx.td.height)
    return index


def same_method_query(pvg: ProgramValidGraph, index: dict[int, ReachIndex], u: int, v: int) -> bool:
    """Dyck reachability between nodes of one method; balanced paths never
    end in another method, so cross-method pairs are unreachable."""
    for w in (u, v):
        if not 0 <= w < pvg.base.n:
            raise UnknownNode(f"node id {w} out of range")
    if pvg.method_of[u] != pvg.method_of[v]:
        return False
    return index[pvg.method_of[u]].query(u, v)


# -- two-phase analysis -------------------------------------------------------

def library_digest(pvg: ProgramValidGraph) -> str:
    """sha256 over a canonical listing of nodes (with methods) and edges."""
    g = pvg.base
    lines = sorted(f"node {g.names[u]} {pvg.method_of[u]}" for u in range(g.n))
    lines += sorted(f"edge {g.names[u]} {g.names[v]} {code_token(c)}" for u, v, c in g.triples())
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()


@dataclass
class MethodSummary:
    method: int
    bag_lines: list[str]
    rf: dict[str, list[str]]
    rb: dict[str, list[str]]
    summary_edges: list[tuple[str, str]]


@dataclass
class SummaryArtifact:
    digest: str
    methods: dict[int, MethodSummary]

    @classmethod
    def from_indexes(cls, pvg: ProgramValidGraph, index: dict[int, ReachIndex]) -> SummaryArtifact:
        nm = pvg.base.names
        out = {}
        for j in sorted(index):
            idx = index[j]
            out[j] = MethodSummary(
                j,
                idx.td.dump(nm),
                {nm[u]: sorted(nm[v] for v in vs) for u, vs in sorted(idx.rf.items()) if vs},
                {nm[v]: sorted(nm[u] for u in us) for v, us in sorted(idx.rb.items()) if us},
                [(nm[x], nm[y]) for x, y in idx.summary_edges],
            )
        return cls(library_digest(pvg), out)

    def dumps(self) -> str:
        lines = ["dycksum 1", f"digest sha256 {self.digest}"]
        lines.append(" ".join(["methods"] + [str(j) for j in sorted(self.methods)]))
        for j in sorted(self.methods):
            ms = self.methods[j]
            lines.append(f"method {j} bags {len(ms.bag_lines)}")
            lines.extend(ms.bag_lines)
            lines.extend(f"rf {u} : {' '.join(vs)}" for u, vs in ms.rf.items())
            lines.extend(f"rb {v} : {' '.join(us)}" for v, us in ms.rb.items())
            lines.extend(f"summary-edge {x} {y}" for x, y in ms.summary_edges)
            lines.append("end")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> SummaryArtifact:
        lines = [ln for ln in (raw.split("#", 1)[0].rstrip() for raw in text.splitlines()) if ln.strip()]
        if not lines or lines[0].split() != ["dycksum", "1"]:
            raise ParseError("expected header 'dycksum 1'", 1)
        try:
            kw, algo, digest = lines[1].split()
            head = lines[2].split()
            if kw != "digest" or algo != "sha256" or head[0] != "methods":
                raise ValueError
            declared = [int(t) for t in head[1:]]
        except (ValueError, IndexError):
            raise ParseError("malformed summary header") from None
        methods: dict[int, MethodSummary] = {}
        pos = 3
        while pos < len(lines):
            parts = lines[pos].split()
            if len(parts) != 4 or parts[0] != "method" or parts[2] != "bags":
                raise ParseError(f"expected 'method <id> bags <count>', got {lines[pos]!r}", pos + 1)
            j, nbags = int(parts[1]), int(parts[3])
            bag_lines = lines[pos + 1:pos + 1 + nbags]
            ms = MethodSummary(j, bag_lines, {}, {}, [])
            pos += 1 + nbags
            while pos < len(lines) and lines[pos] != "end":
                parts = lines[pos].split()
                if parts[0] in ("rf", "rb") and len(parts) >= 3 and parts[2] == ":":
                    (ms.rf if parts[0] == "rf" else ms.rb)[parts[1]] = parts[3:]
                elif parts[0] == "summary-edge" and len(parts) == 3:
                    ms.summary_edges.append((parts[1], parts[2]))
                else:
                    raise ParseError(f"unexpected summary line {lines[pos]!r}", pos + 1)
                pos += 1
            if pos == len(lines):
                raise ParseError(f"method {j} is missing 'end'")
            pos += 1
            methods[j] = ms
        if sorted(methods) != sorted(declared):
            raise ParseError("method list does not match method sections")
        return cls(digest, methods)


def preprocess_library(pvg: ProgramValidGraph, *, heuristic: str = "min-degree") -> SummaryArtifact:
    return SummaryArtifact.from_indexes(pvg, process(pvg, heuristic=heuristic))


def _restore(ms: MethodSummary, pvg: ProgramValidGraph, ids: dict[str, int]) -> ReachIndex:
    td = TreeDecomposition.parse(ms.bag_lines, ids)
    idx = ReachIndex(ms.method, pvg.nodes_of[ms.method], td)
    for u, vs in ms.rf.items():
        idx.rf[ids[u]].update(ids[v] for v in vs)
    for v, us in ms.rb.items():
        idx.rb[ids[v]].update(ids[u] for u in us)
    idx.summary_edges = [(ids[x], ids[y]) for x, y in ms.summary_edges]
    return idx


def _covers(td: TreeDecomposition, edges: Iterable[tuple[int, int]]) -> bool:
    try:
        for u, v in edges:
            bag_of_edge(td, u, v)
    except (NotCoResident, UnknownNode):
        return False
    return True


def analyze_client(
    summary: SummaryArtifact,
    pvg: ProgramValidGraph,
    *,
    heuristic: str = "min-degree",
    stats: ProcessStats | None = None,
) -> dict[int, ReachIndex]:
    """Finish the analysis of the whole program from a library summary.

    Library indexes are restored rather than rebuilt.  The one exception is a
    library method whose decomposition cannot host a call site that only the
    client completes (a callback): its index is rebuilt over the widened
    graph and replayed with the stored summary edges.
    """
    unknown = set(summary.methods) - set(pvg.methods)
    if unknown:
        raise MissingMethod(f"summary methods {sorted(unknown)} are absent from the program")
    library = pvg.restrict(summary.methods)
    if library_digest(library) != summary.digest:
        raise StaleSummary("library part of the program changed since it was summarized")
    ids = {name: u for u, name in enumerate(pvg.base.names)}
    prebuilt = {}
    for j, ms in summary.methods.items():
        try:
            idx = _restore(ms, pvg, ids)
        except (KeyError, InvalidDecomposition) as exc:
            raise ParseError(f"summary of method {j} is inconsistent: {exc}") from None
        _, wide = maximal_local_graph(pvg, j)
        if not _covers(idx.td, wide):
            fresh = build_index(pvg, j, heuristic)
            for x, y in idx.summary_edges:
                fresh.update(x, y)
            fresh.summary_edges = list(idx.summary_edges)
            fresh.widened = True
            idx = fresh
        prebuilt[j] = idx
    return process(pvg, prebuilt, heuristic=heuristic, stats=stats)
