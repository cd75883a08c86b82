"""Union-find with caller-chosen set names.

The physical tree root is picked by union-by-rank; a separate ``name`` map
records which member the caller designated as the set's representative, so
``union(S, x)`` can name the merged set after ``x`` without giving up rank
balancing.
"""
from __future__ import annotations

from typing import Hashable, Iterable

from .errors import AlreadyPresent, NotDisjoint, UnknownElement


def inverse_ackermann(n: int) -> int:
    """alpha(n): the least i with A(i, i) >= n, for A(0, j) = j + 1."""
    # A(1,1)=3, A(2,2)=7, A(3,3)=61, A(4,4) is astronomically large.
    for i, bound in enumerate((1, 3, 7, 61)):
        if n <= bound:
            return i
    return 4


class DisjointSets:
    def __init__(self, elements: Iterable[Hashable] = ()):
        self._parent: dict = {}
        self._rank: dict = {}
        self._name: dict = {}  # tree root -> representative
        self._root_of: dict = {}  # representative -> tree root
        self.steps = 0  # parent pointers followed, for amortized-cost checks
        self.finds = 0
        self.unions = 0
        for u in elements:
            self.make_set(u)

    def __contains__(self, u) -> bool:
        return u in self._parent

    def __len__(self) -> int:
        return len(self._parent)

    def make_set(self, u) -> None:
        if u in self._parent:
            raise AlreadyPresent(f"{u!r} already present")
        self._parent[u] = u
        self._rank[u] = 0
        self._name[u] = u
        self._root_of[u] = u

    def _root(self, u):
        parent = self._parent
        try:
            p = parent[u]
        except KeyError:
            raise UnknownElement(f"unknown element {u!r}") from None
        root = u
        while p != root:
            self.steps += 1
            root = p
            p = parent[root]
        while u != root:
            nxt = parent[u]
            parent[u] = root
            u = nxt
        return root

    def find(self, u):
        self.finds += 1
        return self._name[self._root(u)]

    def same_set(self, u, v) -> bool:
        return self._root(u) == self._root(v)

    def union(self, members: Iterable, x) -> None:
        """Merge the sets of ``members`` (pairwise disjoint) and name the result ``x``."""
        members = list(members)
        roots = [self._root(s) for s in members]
        if len(set(roots)) != len(roots):
            raise NotDisjoint("union members must lie in pairwise different sets")
        if x not in self._parent:
            raise UnknownElement(f"unknown element {x!r}")
        x_root = self._root(x)
        if x_root not in roots:
            raise NotDisjoint(f"{x!r} is not in any of the merged sets")
        self.unions += 1
        rank = self._rank
        best = x_root
        for r in roots:
            if rank[r] > rank[best]:
                best = r
        for r in roots:
            if r == best:
                continue
            if rank[r] == rank[best]:
                rank[best] += 1
            self._parent[r] = best
            del self._root_of[self._name.pop(r)]
        del self._root_of[self._name[best]]
        self._name[best] = x
        self._root_of[x] = best

    def representatives(self) -> list:
        return list(self._root_of)

    def groups(self) -> dict:
        out: dict = {}
        for u in self._parent:
            out.setdefault(self.find(u), []).append(u)
        return out
