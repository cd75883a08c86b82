"""DSCCs of bidirected graphs in O(m + n alpha(n)).

Pipeline: epsilon contraction, optional dense-graph pre-reduction, then the
union-find main loop.  The main loop runs in a compiled kernel when
``dyckreach._ckernel`` is importable and falls back to ``_pykernel``
otherwise; set ``DYCKREACH_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os
from array import array
from dataclasses import asdict, dataclass

from . import _pykernel
from .disjoint_sets import DisjointSets
from .errors import NotBidirected, PreconditionViolated
from .graph import DsccPartition, LabeledGraph, validate_bidirected

try:
    if os.environ.get("DYCKREACH_PURE"):
        raise ImportError("pure-Python kernel forced")
    from . import _ckernel
except ImportError:
    _ckernel = None

BACKEND = "ext" if _ckernel is not None else "py"


def kernel(backend: str | None = None):
    """The kernel module for ``backend`` ('ext', 'py' or None for the default).

    Both modules provide ``reach`` (main loop over closing edges) and
    ``dscc`` (mirror check, epsilon contraction and main loop).
    """
    backend = backend or BACKEND
    if backend == "py":
        return _pykernel
    if backend == "ext":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not available")
        return _ckernel
    raise ValueError(f"unknown backend {backend!r}")


@dataclass
class RunStats:
    n: int
    m: int
    k: int
    classes: int
    iterations: int
    sum_sprime: int
    unions: int
    finds: int
    splices: int
    backend: str

    def as_dict(self) -> dict:
        return asdict(self)


def densify_reduce(g: LabeledGraph) -> tuple[LabeledGraph, DisjointSets]:
    """Pre-merge the targets of same-labeled closing fan-out.

    For every node ``u`` with two or more outgoing closing edges of type
    ``i`` the targets are merged in the returned seed partition and ``u``
    keeps only its first such edge (with its mirror).
    """
    if any(c == 0 for c in g.lab):
        raise PreconditionViolated("densify_reduce expects an epsilon-free graph")
    if validate_bidirected(g):
        raise PreconditionViolated("densify_reduce expects a bidirected graph")
    seed = DisjointSets(range(g.n))
    kept: dict[tuple[int, int], int] = {}
    fan: dict[tuple[int, int], list[int]] = {}
    for u, v, c in g.triples():
        if c < 0:
            fan.setdefault((u, -c), []).append(v)
    for (u, i), targets in fan.items():
        kept[(u, i)] = targets[0]
        if len(targets) >= 2:
            reps = {seed.find(t) for t in targets}
            if len(reps) >= 2:
                seed.union(reps, min(reps))
    triples = []
    for (u, i), v in kept.items():
        triples.append((u, v, -i))
        triples.append((v, u, i))
    g2 = LabeledGraph(g.names, g.k, triples, mode="bidirected", unique_pairs=False)
    return g2, seed


def bidirected_reach(
    g: LabeledGraph,
    *,
    densify: bool = True,
    order: str = "fifo",
    backend: str | None = None,
) -> tuple[DsccPartition, RunStats]:
    """DSCCs of a bidirected graph.

    Epsilon components are contracted first (the kernel tolerates the
    parallel edges this creates), then the optional pre-reduction and the
    main loop run inside the selected kernel.
    """
    backend = backend or BACKEND
    src, dst, lab = (array("q", g.src), array("q", g.dst), array("q", g.lab))
    class_of, classes, st = kernel(backend).dscc(g.n, g.k, src, dst, lab, densify, order)
    if class_of is None:
        raise NotBidirected(validate_bidirected(g))
    part = DsccPartition(class_of)
    stats = RunStats(g.n, g.m, g.k, classes, backend=backend, **st)
    return part, stats
