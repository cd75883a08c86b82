"""Rooted tree decompositions: construction, validation, rebalancing.

A decomposition is a tree of bags (sets of node ids) such that every node
is in some bag (C1), both endpoints of every edge share a bag (C2) and the
bags holding any node form a connected subtree (C3).  Rooting it gives each
bag a level and each node a unique *root bag*: the topmost bag containing
it, which is unique because of C3.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_degree, treewidth_min_fill_in

from .errors import InvalidDecomposition, NotCoResident, ParseError, UnknownNode

HEURISTICS = {"min-degree": treewidth_min_degree, "min-fill": treewidth_min_fill_in}


@dataclass
class TreeDecomposition:
    bags: list[frozenset[int]]
    parent: list[int]  # -1 at the root
    children: list[list[int]] = field(init=False, repr=False)
    root: int = field(init=False)
    lv: list[int] = field(init=False, repr=False)
    root_bag: dict[int, int] = field(init=False, repr=False)

    def __post_init__(self):
        nb = len(self.bags)
        if nb == 0 or len(self.parent) != nb:
            raise InvalidDecomposition("need one parent entry per bag and at least one bag")
        self.bags = [frozenset(b) for b in self.bags]
        roots = [b for b, p in enumerate(self.parent) if p < 0]
        if len(roots) != 1:
            raise InvalidDecomposition(f"expected exactly one root bag, found {len(roots)}")
        self.root = roots[0]
        self.children = [[] for _ in range(nb)]
        for b, p in enumerate(self.parent):
            if p >= 0:
                if p >= nb:
                    raise InvalidDecomposition(f"bag {b} has unknown parent {p}")
                self.children[p].append(b)
        self.lv = [-1] * nb
        self.lv[self.root] = 0
        order = self.preorder()
        if len(order) != nb:
            raise InvalidDecomposition("parent links do not form a tree")
        for b in order:
            for c in self.children[b]:
                self.lv[c] = self.lv[b] + 1
        self.root_bag = {}
        for b in order:
            for u in self.bags[b]:
                self.root_bag.setdefault(u, b)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    @property
    def height(self) -> int:
        return max(self.lv)

    def __len__(self) -> int:
        return len(self.bags)

    def nodes(self) -> set[int]:
        return set(self.root_bag)

    def preorder(self) -> list[int]:
        out, stack = [], [self.root]
        seen = set()
        while stack:
            b = stack.pop()
            if b in seen:
                break
            seen.add(b)
            out.append(b)
            stack.extend(reversed(self.children[b]))
        return out

    def postorder(self) -> list[int]:
        return self.preorder()[::-1]

    def path_to_root(self, b: int) -> list[int]:
        out = [b]
        while self.parent[b] >= 0:
            b = self.parent[b]
            out.append(b)
        return out

    def bag_of(self, u: int) -> int:
        try:
            return self.root_bag[u]
        except KeyError:
            raise UnknownNode(f"node {u} is in no bag") from None

    def dump(self, names: Sequence[str] | None = None) -> list[str]:
        def show(u: int) -> str:
            return str(u) if names is None else names[u]

        lines = []
        for b, bag in enumerate(self.bags):
            p = self.parent[b]
            members = " ".join(show(u) for u in sorted(bag))
            lines.append(f"bag {b} parent={'-' if p < 0 else p} : {members}".rstrip())
        return lines

    @classmethod
    def parse(cls, lines: Iterable[str], ids: dict[str, int] | None = None) -> TreeDecomposition:
        """Inverse of :meth:`dump`; ``ids`` maps member names back to node ids."""
        bags: dict[int, frozenset[int]] = {}
        parent: dict[int, int] = {}
        for line in lines:
            head, sep, rest = line.partition(":")
            parts = head.split()
            if not sep or len(parts) != 3 or parts[0] != "bag" or not parts[2].startswith("parent="):
                raise ParseError(f"bad bag line {line!r}")
            try:
                b = int(parts[1])
                p = parts[2][7:]
                parent[b] = -1 if p == "-" else int(p)
                if ids is None:
                    members = frozenset(int(t) for t in rest.split())
                else:
                    members = frozenset(ids[t] for t in rest.split())
            except (ValueError, KeyError) as exc:
                raise ParseError(f"bad bag line {line!r}: {exc}") from None
            bags[b] = members
        if sorted(bags) != list(range(len(bags))):
            raise ParseError("bag ids must be 0..n-1")
        return cls([bags[b] for b in range(len(bags))], [parent[b] for b in range(len(bags))])


# -- construction -------------------------------------------------------------

def _from_tree(bags: list[frozenset[int]], adj: list[set[int]]) -> TreeDecomposition:
    """Canonicalize an unrooted bag tree and root it at its center."""
    bags = list(bags)
    alive = set(range(len(bags)))
    # Contract tree edges where one bag contains the other.
    changed = True
    while changed and len(alive) > 1:
        changed = False
        for a in sorted(alive):
            for b in sorted(adj[a]):
                if bags[a] <= bags[b]:
                    for c in adj[a]:
                        if c != b:
                            adj[c].discard(a)
                            adj[c].add(b)
                            adj[b].add(c)
                    adj[b].discard(a)
                    adj[a] = set()
                    alive.discard(a)
                    changed = True
                    break
    keep = sorted(alive)
    new = {b: i for i, b in enumerate(keep)}
    nbags = [bags[b] for b in keep]
    nadj = [{new[c] for c in adj[b]} for b in keep]
    root = _center(nadj)
    parent = [-1] * len(nbags)
    seen = {root}
    queue = deque([root])
    order = []
    while queue:
        b = queue.popleft()
        order.append(b)
        for c in sorted(nadj[b]):
            if c not in seen:
                seen.add(c)
                parent[c] = b
                queue.append(c)
    # Renumber bags in breadth-first order so ids are deterministic.
    pos = {b: i for i, b in enumerate(order)}
    return TreeDecomposition(
        [nbags[b] for b in order],
        [-1 if parent[b] < 0 else pos[parent[b]] for b in order],
    )


def _center(adj: list[set[int]]) -> int:
    n = len(adj)
    if n <= 2:
        return 0
    deg = [len(a) for a in adj]
    leaves = [b for b in range(n) if deg[b] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for b in leaves:
            for c in adj[b]:
                deg[c] -= 1
                if deg[c] == 1:
                    nxt.append(c)
        leaves = nxt
    return min(leaves)


def decompose(
    nodes: Iterable[int],
    edges: Iterable[tuple[int, int]],
    heuristic: str = "min-degree",
) -> TreeDecomposition:
    """Heuristic tree decomposition of the undirected graph (nodes, edges)."""
    try:
        method = HEURISTICS[heuristic]
    except KeyError:
        raise ValueError(f"unknown heuristic {heuristic!r}; choose from {sorted(HEURISTICS)}") from None
    g = nx.Graph()
    g.add_nodes_from(nodes)
    g.add_edges_from((u, v) for u, v in edges if u != v)
    if g.number_of_nodes() == 0:
        return TreeDecomposition([frozenset()], [-1])
    _, tree = method(g)
    bags = list(tree.nodes)
    index = {b: i for i, b in enumerate(bags)}
    adj = [set() for _ in bags]
    for a, b in tree.edges:
        adj[index[a]].add(index[b])
        adj[index[b]].add(index[a])
    # Join components if the heuristic returned a forest.
    comps = list(nx.connected_components(tree))
    for comp in comps[1:]:
        a, b = index[next(iter(comps[0]))], index[next(iter(comp))]
        adj[a].add(b)
        adj[b].add(a)
    return _from_tree(bags, adj)


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class TdViolation:
    condition: str  # "C1", "C2" or "C3"
    witness: tuple
    message: str

    def __str__(self) -> str:
        return f"{self.condition}: {self.message}"


def validate(td: TreeDecomposition, nodes: Iterable[int], edges: Iterable[tuple[int, int]]) -> list[TdViolation]:
    out = []
    where: dict[int, list[int]] = {}
    for b, bag in enumerate(td.bags):
        for u in bag:
            where.setdefault(u, []).append(b)
    for u in sorted(set(nodes)):
        if u not in where:
            out.append(TdViolation("C1", (u,), f"node {u} is in no bag"))
    for u, v in edges:
        if u in where and v in where and not set(where[u]) & set(where[v]):
            out.append(TdViolation("C2", (u, v), f"edge ({u}, {v}) has no common bag"))
    for u, holders in sorted(where.items()):
        hs = set(holders)
        # Connected iff exactly one holder has its parent outside the set.
        tops = [b for b in holders if td.parent[b] not in hs]
        if len(tops) != 1:
            out.append(TdViolation("C3", (u,), f"bags holding node {u} are disconnected: {sorted(hs)}"))
    return out


def bag_of_edge(td: TreeDecomposition, u: int, v: int) -> int:
    """The deeper of the root bags of ``u`` and ``v``; it holds both."""
    bu, bv = td.bag_of(u), td.bag_of(v)
    b = bu if td.lv[bu] >= td.lv[bv] else bv
    if u not in td.bags[b] or v not in td.bags[b]:
        raise NotCoResident(f"nodes {u} and {v} share no bag")
    return b


# -- rebalancing --------------------------------------------------------------

def height_bound(num_bags: int) -> int:
    """Height guaranteed by :func:`rebalance`: 4 * ceil(log2(bags) + 1)."""
    return 4 * math.ceil(math.log2(max(num_bags, 1)) + 1)


def rebalance(td: TreeDecomposition) -> TreeDecomposition:
    """Decomposition of logarithmic height and width at most 3t + 2.

    Recursively split the bag tree at a separator bag ``p``.  The new bag for
    a component is ``bags[p]`` plus the interfaces shared with the at most two
    tree edges leaving the component.  A component with two such edges is
    split on the path between them (closest to its centroid), so every piece
    keeps at most two outgoing edges, and the piece that holds the centroid
    has only one and is split at its centroid next.
    """
    nb = len(td.bags)
    adj = [set(td.children[b]) for b in range(nb)]
    for b, p in enumerate(td.parent):
        if p >= 0:
            adj[b].add(p)
    new_bags: list[frozenset[int]] = []
    new_parent: list[int] = []

    def component(start: int, inside: set[int], cut: int) -> list[int]:
        comp, stack = [start], [start]
        seen = {start, cut}
        while stack:
            b = stack.pop()
            for c in adj[b]:
                if c not in seen and c in inside:
                    seen.add(c)
                    comp.append(c)
                    stack.append(c)
        return comp

    def centroid(comp: list[int]) -> int:
        inside = set(comp)
        root = comp[0]
        order, par = [root], {root: -1}
        for b in order:
            for c in adj[b]:
                if c in inside and c not in par:
                    par[c] = b
                    order.append(c)
        size = dict.fromkeys(comp, 1)
        for b in reversed(order):
            if par[b] >= 0:
                size[par[b]] += size[b]
        total = len(comp)
        best, best_load = root, total
        for b in comp:
            load = total - size[b]
            for c in adj[b]:
                if c in inside and par.get(c) == b:
                    load = max(load, size[c])
            if load < best_load:
                best, best_load = b, load
        return best

    def path(comp: list[int], a: int, z: int) -> list[int]:
        inside = set(comp)
        par = {a: -1}
        queue = deque([a])
        while queue:
            b = queue.popleft()
            if b == z:
                break
            for c in adj[b]:
                if c in inside and c not in par:
                    par[c] = b
                    queue.append(c)
        out = [z]
        while out[-1] != a:
            out.append(par[out[-1]])
        return out

    def distances(comp: list[int], src: int) -> dict[int, int]:
        inside = set(comp)
        dist = {src: 0}
        queue = deque([src])
        while queue:
            b = queue.popleft()
            for c in adj[b]:
                if c in inside and c not in dist:
                    dist[c] = dist[b] + 1
                    queue.append(c)
        return dist

    # Work items: (component bag list, boundary tree edges (inside, outside), new parent id).
    stack = [(list(range(nb)), [], -1)]
    while stack:
        comp, boundary, up = stack.pop()
        if len(boundary) <= 1:
            p = centroid(comp)
        else:
            (a1, _), (a2, _) = boundary
            dist = distances(comp, centroid(comp))
            p = min(path(comp, a1, a2), key=lambda b: (dist[b], b))
        iface = frozenset().union(*(td.bags[a] & td.bags[o] for a, o in boundary))
        me = len(new_bags)
        new_bags.append(td.bags[p] | iface)
        new_parent.append(up)
        inside = set(comp)
        for c in sorted(adj[p]):
            if c not in inside:
                continue
            sub = component(c, inside, p)
            subset = set(sub)
            sub_boundary = [(c, p)] + [(a, o) for a, o in boundary if a in subset]
            stack.append((sub, sub_boundary, me))
    return _contract_rooted(new_bags, new_parent)


def _contract_rooted(bags: list[frozenset[int]], parent: list[int]) -> TreeDecomposition:
    """Merge each bag into its parent when one contains the other, keeping the root."""
    nb = len(bags)
    children = [[] for _ in range(nb)]
    root = -1
    for b, p in enumerate(parent):
        if p < 0:
            root = b
        else:
            children[p].append(b)
    rep = list(range(nb))  # bag -> surviving bag it was merged into
    merged = list(bags)
    order = [root]
    for b in order:
        order.extend(children[b])
    for b in order:
        p = parent[b]
        if p < 0:
            continue
        q = rep[p]
        if merged[b] <= merged[q] or merged[q] <= merged[b]:
            merged[q] = merged[q] | merged[b]
            rep[b] = q
    survivors = [b for b in order if rep[b] == b]
    pos = {b: i for i, b in enumerate(survivors)}
    return TreeDecomposition(
        [merged[b] for b in survivors],
        [-1 if parent[b] < 0 else pos[rep[parent[b]]] for b in survivors],
    )
