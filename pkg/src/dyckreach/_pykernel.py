"""Pure-Python main loop of the bidirected DSCC algorithm.

Mirrors ``_ckernel.pyx`` operation for operation; it is the fallback when the
compiled kernel is unavailable and the reference the compiled one is tested
against.

Edge lists are singly linked lists threaded through flat cell arrays so that
moving a whole list onto another is O(1).  Slot ``u * k + (i - 1)`` holds the
targets of ``u``'s outgoing closing edges of type ``i``.
"""
from __future__ import annotations

from collections import deque


class ReachState:
    def __init__(self, n: int, k: int, order: str = "fifo"):
        if order not in ("fifo", "lifo"):
            raise ValueError(f"unknown queue order {order!r}")
        self.n = n
        self.k = k
        self.lifo = order == "lifo"
        self.parent = list(range(n))
        self.rank = [0] * n
        self.name = list(range(n))  # valid at tree roots only
        self.root_of = list(range(n))  # valid for current representatives only
        slots = n * k
        self.head = [-1] * slots
        self.tail = [-1] * slots
        self.size = [0] * slots
        self.cval: list[int] = []
        self.cnext: list[int] = []
        self.queue: deque[int] = deque()
        self.inq = bytearray(slots)
        self.iterations = 0
        self.sum_sprime = 0
        self.unions = 0
        self.finds = 0
        self.splices = 0

    # -- disjoint sets --------------------------------------------------

    def root(self, u: int) -> int:
        parent = self.parent
        r = u
        while parent[r] != r:
            r = parent[r]
        while parent[u] != r:
            parent[u], u = r, parent[u]
        return r

    def find(self, u: int) -> int:
        self.finds += 1
        return self.name[self.root(u)]

    def union(self, members, x: int) -> None:
        """Merge the sets named by ``members`` and name the result ``x``."""
        self.unions += 1
        rank = self.rank
        roots = [self.root_of[s] for s in members]
        best = self.root_of[x]
        for r in roots:
            if rank[r] > rank[best]:
                best = r
        for r in roots:
            if r != best:
                if rank[r] == rank[best]:
                    rank[best] += 1
                self.parent[r] = best
        self.name[best] = x
        self.root_of[x] = best

    # -- edge lists ------------------------------------------------------

    def append(self, slot: int, v: int) -> None:
        c = len(self.cval)
        self.cval.append(v)
        self.cnext.append(-1)
        if self.size[slot] == 0:
            self.head[slot] = c
        else:
            self.cnext[self.tail[slot]] = c
        self.tail[slot] = c
        self.size[slot] += 1

    def move(self, src: int, dst: int) -> None:
        if self.size[src] == 0:
            return
        self.splices += 1
        if self.size[dst] == 0:
            self.head[dst] = self.head[src]
        else:
            self.cnext[self.tail[dst]] = self.head[src]
        self.tail[dst] = self.tail[src]
        self.size[dst] += self.size[src]
        self.clear(src)

    def clear(self, slot: int) -> None:
        self.head[slot] = self.tail[slot] = -1
        self.size[slot] = 0

    def set_single(self, slot: int, v: int) -> None:
        c = self.head[slot]
        if c < 0:
            self.append(slot, v)
            return
        self.cval[c] = v
        self.cnext[c] = -1
        self.tail[slot] = c
        self.size[slot] = 1

    def targets(self, slot: int) -> list[int]:
        out = []
        c = self.head[slot]
        while c >= 0:
            out.append(self.cval[c])
            c = self.cnext[c]
        return out

    def enqueue(self, slot: int) -> None:
        if not self.inq[slot]:
            self.inq[slot] = 1
            self.queue.append(slot)

    # -- main loop -------------------------------------------------------

    def step(self) -> bool:
        """Process one queue entry; False once the queue is empty."""
        if not self.queue:
            return False
        slot = self.queue.pop() if self.lifo else self.queue.popleft()
        self.inq[slot] = 0
        self.iterations += 1
        k = self.k
        u, i = divmod(slot, k)
        if self.find(u) != u:
            return True
        self.sum_sprime += self.size[slot]
        reps = set()
        c = self.head[slot]
        while c >= 0:
            reps.add(self.find(self.cval[c]))
            c = self.cnext[c]
        if len(reps) >= 2:
            x = min(r for r in reps if r != u)
            self.union(reps, x)
            others = sorted(r for r in reps if r != x)
            for j in range(k):
                dst = x * k + j
                for v in others:
                    if v != u or j != i:
                        self.move(v * k + j, dst)
                    else:
                        self.clear(slot)
                        self.append(dst, x)
                if self.size[dst] >= 2:
                    self.enqueue(dst)
        else:
            (x,) = reps
        if u not in reps or len(reps) == 1:
            self.set_single(slot, x)
        return True

    def run(self) -> None:
        while self.step():
            pass

    def stats(self) -> dict:
        return {
            "iterations": self.iterations,
            "sum_sprime": self.sum_sprime,
            "unions": self.unions,
            "finds": self.finds,
            "splices": self.splices,
        }


def reach(n, k, src, dst, lab, densify=True, order="fifo"):
    """Run the algorithm on closing edges ``src[e] -(close lab[e])-> dst[e]``.

    Returns ``(rep, stats)`` where ``rep[u]`` names the DSCC of node ``u``.
    """
    st = ReachState(n, k, order)
    for a, b, i in zip(src, dst, lab):
        st.append(a * k + (i - 1), b)
    if densify:
        _densify(st)
    for slot in range(n * k):
        if st.size[slot] >= 2:
            st.enqueue(slot)
    st.run()
    rep = [st.name[st.root(u)] for u in range(n)]
    return rep, st.stats()


def _densify(st: ReachState) -> None:
    # Targets sharing a source and a closing label are one DSCC: merge them
    # up front and keep a single edge, then gather member lists at the
    # representative so that only representatives own edges.
    n, k = st.n, st.k
    for slot in range(n * k):
        if st.size[slot] < 2:
            continue
        reps = set()
        c = st.head[slot]
        while c >= 0:
            reps.add(st.find(st.cval[c]))
            c = st.cnext[c]
        if len(reps) >= 2:
            st.union(reps, min(reps))
        st.set_single(slot, st.cval[st.head[slot]])
    for u in range(n):
        r = st.find(u)
        if r != u:
            for j in range(k):
                st.move(u * k + j, r * k + j)


def dscc(n, k, src, dst, lab, densify=True, order="fifo"):
    """Mirror check, epsilon contraction and main loop over all edges.

    Same contract as ``_ckernel.dscc``: ``lab`` holds signed label codes and
    the result is ``(class_of, classes, stats)``, or None in place of
    all three when the graph is not bidirected.
    """
    span = 2 * k + 1
    keys = {(u * n + v) * span + c + k for u, v, c in zip(src, dst, lab)}
    if not all((v * n + u) * span - c + k in keys for u, v, c in zip(src, dst, lab)):
        return None, None, None
    parent = list(range(n))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, c in zip(src, dst, lab):
        if c == 0:
            a, b = root(u), root(v)
            if a < b:
                parent[b] = a
            elif b < a:
                parent[a] = b
    node_map = [0] * n
    ids: dict[int, int] = {}
    for u in range(n):
        node_map[u] = ids.setdefault(root(u), len(ids))
    cs, cd, cl = [], [], []
    for u, v, c in zip(src, dst, lab):
        if c < 0:
            cs.append(node_map[u])
            cd.append(node_map[v])
            cl.append(-c)
    rep, stats = reach(len(ids), k, cs, cd, cl, densify, order)
    first: dict[int, int] = {}
    class_of = [first.setdefault(rep[node_map[u]], u) for u in range(n)]
    return class_of, len(first), stats
