"""All-pairs Dyck closure for arbitrary labeled graphs (the reference oracle).

S-pairs are the reflexive-transitive closure of two kinds of "summary"
edges: epsilon edges, and ``(p, q)`` whenever ``p -open_i-> a``, ``(a, b)``
is an S-pair and ``b -close_i-> q``.  The closure is maintained
incrementally with integer bitsets: inserting a summary edge ``(x, y)``
joins every ancestor of ``x`` to every descendant of ``y``, and any pair
newly reaching out of an open edge's target re-arms the matching rule.

Cubic in the worst case; meant for graphs of a few hundred nodes.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Iterator

from .errors import UnknownNode
from .graph import DsccPartition, LabeledGraph


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ClosureRelation:
    """Derivability of the Dyck grammar's nonterminals between node pairs.

    ``reach[u]`` is the bitset of S-successors of ``u``; the ``A_i`` and
    ``Abar_i`` relations are derived from it on request.
    """

    def __init__(self, g: LabeledGraph, reach: list[int], coreach: list[int]):
        self.graph = g
        self.reach = reach
        self.coreach = coreach

    def s_contains(self, u: int, v: int) -> bool:
        return bool(self.reach[u] >> v & 1)

    def s_pairs(self) -> set[tuple[int, int]]:
        return {(u, v) for u, mask in enumerate(self.reach) for v in _bits(mask)}

    def a_pairs(self, i: int) -> set[tuple[int, int]]:
        """Pairs derivable from ``A_i -> open_i S``."""
        out = set()
        for u, w, c in self.graph.triples():
            if c == i:
                out.update((u, v) for v in _bits(self.reach[w]))
        return out

    def abar_pairs(self, i: int) -> set[tuple[int, int]]:
        """Pairs derivable from ``Abar_i -> S close_i``."""
        out = set()
        for w, v, c in self.graph.triples():
            if c == -i:
                out.update((u, v) for u in _bits(self.coreach[w]))
        return out

    def __len__(self) -> int:
        return sum(mask.bit_count() for mask in self.reach)


def dyck_closure(g: LabeledGraph) -> ClosureRelation:
    n = g.n
    reach = [1 << u for u in range(n)]
    coreach = [1 << u for u in range(n)]
    open_in: dict[int, list[tuple[int, int]]] = defaultdict(list)  # a -> [(p, i)]
    close_out: dict[int, dict[int, list[int]]] = defaultdict(lambda: defaultdict(list))
    work: list[tuple[int, int]] = []
    for u, v, c in g.triples():
        if c == 0:
            work.append((u, v))
        elif c > 0:
            open_in[v].append((u, c))
        else:
            close_out[u][-c].append(v)

    def matched(a: int, gained: int) -> None:
        # New S-pairs (a, b) for b in ``gained``: close them with open/close edges.
        for b in _bits(gained):
            outs = close_out.get(b)
            if not outs:
                continue
            for p, i in open_in[a]:
                for q in outs.get(i, ()):
                    work.append((p, q))

    for a in list(open_in):
        matched(a, reach[a])

    while work:
        x, y = work.pop()
        if reach[x] >> y & 1:
            continue
        anc = coreach[x]
        desc = reach[y]
        for u in _bits(anc):
            new = desc & ~reach[u]
            if new:
                reach[u] |= new
                if u in open_in:
                    matched(u, new)
        for v in _bits(desc):
            coreach[v] |= anc
    return ClosureRelation(g, reach, coreach)


def dyck_reachable(g: LabeledGraph, u: int, v: int, closure: ClosureRelation | None = None) -> bool:
    for w in (u, v):
        if not 0 <= w < g.n:
            raise UnknownNode(f"node id {w} out of range")
    rel = closure or dyck_closure(g)
    return rel.s_contains(u, v)


def dsccs_from_closure(rel: ClosureRelation) -> DsccPartition:
    labels = []
    for u, mask in enumerate(rel.reach):
        mutual = mask & rel.coreach[u]
        labels.append((mutual & -mutual).bit_length() - 1)
    return DsccPartition.from_labels(labels)


def witness(g: LabeledGraph, u: int, v: int) -> list[tuple[int, int, int]] | None:
    """A path ``u ~> v`` whose label is balanced, as ``(src, dst, code)`` edges.

    Derives S-pairs with a plain worklist that remembers how each pair was
    first obtained, then unfolds that derivation.  Independent of
    :func:`dyck_closure`; quartic, so keep ``n`` small.
    """
    n = g.n
    how: dict[tuple[int, int], tuple] = {(a, a): ("refl",) for a in range(n)}
    opens: dict[int, list[tuple[int, int]]] = defaultdict(list)  # target -> [(src, i)]
    closes: dict[int, list[tuple[int, int]]] = defaultdict(list)  # src -> [(dst, i)]
    work: list[tuple[int, int]] = list(how)
    for a, b, c in g.triples():
        if c == 0 and (a, b) not in how:
            how[(a, b)] = ("edge", (a, b, 0))
            work.append((a, b))
        elif c > 0:
            opens[b].append((a, c))
        elif c < 0:
            closes[a].append((b, -c))
    succ: dict[int, set[int]] = defaultdict(set)
    pred: dict[int, set[int]] = defaultdict(set)

    def add(pair, reason):
        if pair not in how:
            how[pair] = reason
            work.append(pair)

    while work:
        a, b = work.pop()
        succ[a].add(b)
        pred[b].add(a)
        for p, i in opens[a]:
            for q, j in closes[b]:
                if i == j:
                    add((p, q), ("match", (p, a, i), (a, b), (b, q, -i)))
        for c in list(succ[b]):
            add((a, c), ("cat", (a, b), (b, c)))
        for z in list(pred[a]):
            add((z, b), ("cat", (z, a), (a, b)))
    if (u, v) not in how:
        return None

    path: list[tuple[int, int, int]] = []
    stack = [(u, v)]
    while stack:
        item = stack.pop()
        if isinstance(item, tuple) and len(item) == 3:
            path.append(item)
            continue
        reason = how[item]
        if reason[0] == "edge":
            path.append(reason[1])
        elif reason[0] == "match":
            stack.extend([reason[3], reason[2], reason[1]])
        elif reason[0] == "cat":
            stack.extend([reason[2], reason[1]])
    return path
