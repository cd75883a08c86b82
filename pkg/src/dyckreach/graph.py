"""Labeled graphs over the Dyck alphabet, Dyck words, and the ``dyckgraph 1`` format.

Labels are stored internally as signed integer codes: ``0`` is epsilon,
``+i`` is the opening parenthesis of type ``i`` and ``-i`` its closing
counterpart.  All algorithms work on dense node ids; names only matter for
I/O.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BadLabelIndex, DuplicateEdge, NotBidirected, ParseError, UnknownNode

EPS = 0


@dataclass(frozen=True, slots=True)
class Label:
    kind: str
    index: int = 0

    def __post_init__(self):
        if self.kind == "eps":
            if self.index != 0:
                raise ValueError("epsilon carries no index")
        elif self.kind in ("open", "close"):
            if self.index < 1:
                raise ValueError(f"parenthesis index must be >= 1, got {self.index}")
        else:
            raise ValueError(f"unknown label kind {self.kind!r}")

    @classmethod
    def eps(cls) -> Label:
        return cls("eps")

    @classmethod
    def open(cls, i: int) -> Label:
        return cls("open", i)

    @classmethod
    def close(cls, i: int) -> Label:
        return cls("close", i)

    @classmethod
    def from_code(cls, code: int) -> Label:
        if code == 0:
            return cls("eps")
        return cls("open", code) if code > 0 else cls("close", -code)

    @classmethod
    def parse(cls, token: str) -> Label:
        if token == "eps":
            return cls("eps")
        if len(token) >= 2 and token[0] in "oc" and token[1:].isdigit():
            i = int(token[1:])
            if i >= 1:
                return cls("open" if token[0] == "o" else "close", i)
        raise ValueError(f"bad label {token!r}")

    @property
    def code(self) -> int:
        if self.kind == "eps":
            return 0
        return self.index if self.kind == "open" else -self.index

    def mirror(self) -> Label:
        return Label.from_code(-self.code)

    def __str__(self) -> str:
        if self.kind == "eps":
            return "eps"
        return f"{'o' if self.kind == 'open' else 'c'}{self.index}"


def label_code(label: Label | int) -> int:
    return label if isinstance(label, int) else label.code


def code_token(code: int) -> str:
    if code == 0:
        return "eps"
    return f"o{code}" if code > 0 else f"c{-code}"


def is_dyck(word: Iterable[Label | int], k: int | None = None) -> bool:
    """True iff the epsilon-erased word is a balanced parenthesis string."""
    stack: list[int] = []
    for lab in word:
        c = label_code(lab)
        if k is not None and abs(c) > k:
            raise BadLabelIndex(f"label index {abs(c)} exceeds k={k}")
        if c > 0:
            stack.append(c)
        elif c < 0:
            if not stack or stack.pop() != -c:
                return False
    return not stack


class LabeledGraph:
    """Immutable Sigma_k-labeled directed graph.

    ``edges`` holds ``(u, v, label)`` with integer node ids in ``[0, n)`` and
    labels given either as :class:`Label` or as integer codes.  With
    ``unique_pairs`` every ordered pair carries one label, except that a
    self-loop may carry a complementary open/close pair (the only way a
    bidirected self-loop can exist).
    """

    __slots__ = ("names", "k", "src", "dst", "lab", "mode", "method_of", "_ids", "_out")

    def __init__(
        self,
        names: Sequence[str],
        k: int,
        edges: Iterable[tuple[int, int, Label | int]] = (),
        *,
        mode: str = "general",
        method_of: Sequence[int | None] | None = None,
        unique_pairs: bool = True,
    ):
        if k < 1:
            raise ValueError("alphabet size k must be positive")
        if mode not in ("general", "bidirected"):
            raise ValueError(f"unknown mode {mode!r}")
        self.names = tuple(names)
        self.k = k
        self.mode = mode
        n = len(self.names)
        self._ids = {name: i for i, name in enumerate(self.names)}
        if len(self._ids) != n:
            raise ValueError("node names must be distinct")
        if method_of is not None:
            method_of = tuple(method_of)
            if len(method_of) != n:
                raise ValueError("method_of must cover every node")
        self.method_of = method_of
        seen: set[tuple[int, int, int]] = set()
        pair_label: dict[tuple[int, int], int] = {}
        src: list[int] = []
        dst: list[int] = []
        lab: list[int] = []
        for u, v, l in edges:
            c = label_code(l)
            if not (0 <= u < n and 0 <= v < n):
                raise UnknownNode(f"edge ({u}, {v}) references a node outside [0, {n})")
            if abs(c) > k:
                raise BadLabelIndex(f"label index {abs(c)} exceeds k={k}")
            t = (u, v, c)
            if t in seen:
                continue
            if unique_pairs:
                prev = pair_label.get((u, v))
                if prev is not None and not (u == v and prev == -c and c != 0):
                    raise DuplicateEdge(
                        f"pair ({self.names[u]}, {self.names[v]}) already has label {code_token(prev)}"
                    )
                pair_label.setdefault((u, v), c)
            seen.add(t)
            src.append(u)
            dst.append(v)
            lab.append(c)
        self.src = tuple(src)
        self.dst = tuple(dst)
        self.lab = tuple(lab)
        self._out = None

    @classmethod
    def from_named(
        cls,
        k: int,
        edges: Iterable[tuple[str, str, Label | int | str]],
        *,
        nodes: Iterable[str] = (),
        mode: str = "general",
        methods: dict[str, int] | None = None,
        unique_pairs: bool = True,
    ) -> LabeledGraph:
        """Build from named edges; node ids follow first appearance.

        With ``mode="bidirected"`` each edge also gets its mirror.
        """
        ids: dict[str, int] = {}

        def intern(name: str) -> int:
            if name not in ids:
                ids[name] = len(ids)
            return ids[name]

        for name in nodes:
            intern(name)
        triples = []
        for a, b, l in edges:
            c = Label.parse(l).code if isinstance(l, str) else label_code(l)
            u, v = intern(a), intern(b)
            triples.append((u, v, c))
            if mode == "bidirected":
                triples.append((v, u, -c))
        names = list(ids)
        method_of = None
        if methods is not None:
            method_of = [methods.get(name) for name in names]
        return cls(names, k, triples, mode=mode, method_of=method_of, unique_pairs=unique_pairs)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return len(self.src)

    def node_id(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise UnknownNode(f"unknown node {name!r}") from None

    def triples(self) -> Iterator[tuple[int, int, int]]:
        return zip(self.src, self.dst, self.lab)

    def edges(self) -> Iterator[tuple[int, int, Label]]:
        for u, v, c in self.triples():
            yield u, v, Label.from_code(c)

    def out_edges(self, u: int) -> list[tuple[int, int]]:
        """``(v, code)`` pairs leaving ``u``."""
        if self._out is None:
            out: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
            for a, b, c in self.triples():
                out[a].append((b, c))
            self._out = out
        return self._out[u]

    def has_edge(self, u: int, v: int, label: Label | int) -> bool:
        c = label_code(label)
        return any(b == v and lc == c for b, lc in self.out_edges(u))

    def named_triples(self) -> set[tuple[str, str, int]]:
        nm = self.names
        return {(nm[u], nm[v], c) for u, v, c in self.triples()}

    def same_as(self, other: LabeledGraph) -> bool:
        """Equality up to node ordering (names, k, edges and method tags)."""
        if self.k != other.k or set(self.names) != set(other.names):
            return False
        if self.named_triples() != other.named_triples():
            return False
        mine = dict(zip(self.names, self.method_of or [None] * self.n))
        theirs = dict(zip(other.names, other.method_of or [None] * other.n))
        return mine == theirs

    def subgraph(self, keep: Iterable[int], mode: str | None = None) -> tuple[LabeledGraph, list[int]]:
        """Induced subgraph; returns it with the list mapping new ids to old ids."""
        old = sorted(set(keep))
        new_of = {u: i for i, u in enumerate(old)}
        triples = [
            (new_of[u], new_of[v], c)
            for u, v, c in self.triples()
            if u in new_of and v in new_of
        ]
        methods = None if self.method_of is None else [self.method_of[u] for u in old]
        g = LabeledGraph(
            [self.names[u] for u in old], self.k, triples,
            mode=mode or self.mode, method_of=methods, unique_pairs=False,
        )
        return g, old

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, m={self.m}, k={self.k}, mode={self.mode!r})"


@dataclass(frozen=True)
class Violation:
    edge: tuple[str, str, str]
    missing: tuple[str, str, str]

    def __str__(self) -> str:
        return f"edge {' '.join(self.edge)} lacks mirror {' '.join(self.missing)}"


def _mirror_keys_ok(g: LabeledGraph) -> bool:
    # Pack each triple into one int; much cheaper to hash than tuples.
    n, span = g.n, 2 * g.k + 1
    shift = g.k
    keys = {(u * n + v) * span + c + shift for u, v, c in zip(g.src, g.dst, g.lab)}
    return all((v * n + u) * span - c + shift in keys for u, v, c in zip(g.src, g.dst, g.lab))


def validate_bidirected(g: LabeledGraph) -> list[Violation]:
    if _mirror_keys_ok(g):
        return []
    present = set(g.triples())
    nm = g.names
    out = []
    for u, v, c in g.triples():
        if (v, u, -c) not in present:
            out.append(Violation((nm[u], nm[v], code_token(c)), (nm[v], nm[u], code_token(-c))))
    return out


def epsilon_components(g: LabeledGraph) -> tuple[list[int], list[int]]:
    """``(node_map, firsts)``: component id per node, numbered by first member,
    and the lowest-id member of each component."""
    n = g.n
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for u, v, c in zip(g.src, g.dst, g.lab):
        if c == 0:
            ru, rv = find(u), find(v)
            if ru != rv:
                if ru < rv:
                    parent[rv] = ru
                else:
                    parent[ru] = rv
    node_map = [0] * n
    new_id: dict[int, int] = {}
    firsts: list[int] = []
    for u in range(n):
        r = find(u)
        if r not in new_id:
            new_id[r] = len(firsts)
            firsts.append(u)
        node_map[u] = new_id[r]
    return node_map, firsts


def contract_epsilon(g: LabeledGraph) -> tuple[LabeledGraph, list[int]]:
    """Merge the connected components of the epsilon subgraph into single nodes.

    Returns the contracted graph and ``node_map[old] = new``.  Merged nodes
    take the name of their lowest-id member.  Parallel edges created by the
    merge are deduplicated.
    """
    violations = validate_bidirected(g)
    if violations:
        raise NotBidirected(violations)
    if 0 not in g.lab:
        return g, list(range(g.n))
    node_map, firsts = epsilon_components(g)
    triples = (
        (node_map[u], node_map[v], c) for u, v, c in g.triples() if c != 0
    )
    names = [g.names[u] for u in firsts]
    g2 = LabeledGraph(names, g.k, triples, mode="bidirected", unique_pairs=False)
    return g2, node_map


class DsccPartition:
    """Partition of node ids into classes; class id is the smallest member id."""

    __slots__ = ("class_of", "_classes")

    def __init__(self, class_of: Sequence[int], classes: dict[int, list[int]] | None = None):
        self.class_of = tuple(class_of)
        self._classes = classes

    @property
    def classes(self) -> dict[int, list[int]]:
        if self._classes is None:
            classes: dict[int, list[int]] = defaultdict(list)
            for u, cid in enumerate(self.class_of):
                classes[cid].append(u)
            self._classes = dict(classes)
        return self._classes

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> DsccPartition:
        """Canonicalize arbitrary per-node class labels."""
        first: dict[int, int] = {}
        return cls([first.setdefault(lab, u) for u, lab in enumerate(labels)])

    def query(self, u: int, v: int) -> bool:
        n = len(self.class_of)
        if not (0 <= u < n and 0 <= v < n):
            raise UnknownNode(f"node id out of range: {u if not 0 <= u < n else v}")
        return self.class_of[u] == self.class_of[v]

    def __eq__(self, other) -> bool:
        return isinstance(other, DsccPartition) and self.class_of == other.class_of

    def __len__(self) -> int:
        return len(self.classes)

    def __repr__(self) -> str:
        return f"DsccPartition({len(self.classes)} classes over {len(self.class_of)} nodes)"

    def listing(self, names: Sequence[str]) -> str:
        """``class <rep>: <members>`` lines; members sorted by name, rep the first."""
        groups = sorted(sorted(names[u] for u in members) for members in self.classes.values())
        return "".join(f"class {g[0]}: {' '.join(g)}\n" for g in groups)


def dscc_query(p: DsccPartition, u: int, v: int) -> bool:
    return p.query(u, v)


# -- dyckgraph 1 ------------------------------------------------------------

def read_graph(text: str) -> LabeledGraph:
    k = None
    mode = None
    ids: dict[str, int] = {}
    methods: dict[str, int] = {}
    declared: set[str] = set()
    triples: dict[tuple[int, int, int], int] = {}
    pair_label: dict[tuple[int, int], int] = {}
    seen_header = False

    def intern(name: str) -> int:
        if name not in ids:
            ids[name] = len(ids)
        return ids[name]

    def add(u: int, v: int, c: int, lineno: int) -> None:
        if (u, v, c) in triples:
            if mode == "general":
                raise DuplicateEdge(f"duplicate edge {names_of(u)} {names_of(v)}", lineno)
            return
        prev = pair_label.get((u, v))
        if prev is not None and not (u == v and prev == -c and c != 0):
            raise DuplicateEdge(
                f"pair ({names_of(u)}, {names_of(v)}) already labeled {code_token(prev)}", lineno
            )
        pair_label.setdefault((u, v), c)
        triples[(u, v, c)] = lineno

    inv: list[str] = []

    def names_of(u: int) -> str:
        if len(inv) != len(ids):
            inv[:] = list(ids)
        return inv[u]

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not seen_header:
            if parts != ["dyckgraph", "1"]:
                raise ParseError("expected header 'dyckgraph 1'", lineno)
            seen_header = True
            continue
        kw = parts[0]
        if kw == "k":
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError("expected 'k <positive int>'", lineno)
            if k is not None:
                raise ParseError("k declared twice", lineno)
            k = int(parts[1])
        elif kw == "mode":
            if len(parts) != 2 or parts[1] not in ("general", "bidirected"):
                raise ParseError("expected 'mode general|bidirected'", lineno)
            if mode is not None:
                raise ParseError("mode declared twice", lineno)
            mode = parts[1]
        elif kw == "node":
            if k is None or mode is None:
                raise ParseError("'k' and 'mode' must precede nodes and edges", lineno)
            if len(parts) not in (2, 3):
                raise ParseError("expected 'node <name> [method=<int>]'", lineno)
            name = parts[1]
            if name in declared:
                raise ParseError(f"node {name!r} declared twice", lineno)
            declared.add(name)
            intern(name)
            if len(parts) == 3:
                tag = parts[2]
                if not tag.startswith("method=") or not tag[7:].lstrip("-").isdigit():
                    raise ParseError(f"bad node attribute {tag!r}", lineno)
                methods[name] = int(tag[7:])
        elif kw == "edge":
            if k is None or mode is None:
                raise ParseError("'k' and 'mode' must precede nodes and edges", lineno)
            if len(parts) != 4:
                raise ParseError("expected 'edge <src> <dst> <label>'", lineno)
            try:
                lab = Label.parse(parts[3])
            except ValueError:
                raise ParseError(f"bad label {parts[3]!r}", lineno) from None
            if lab.index > k:
                raise BadLabelIndex(f"label {parts[3]} exceeds k={k}", lineno)
            u, v = intern(parts[1]), intern(parts[2])
            c = lab.code
            add(u, v, c, lineno)
            if mode == "bidirected" and not (u == v and c == 0):
                add(v, u, -c, lineno)
        else:
            raise ParseError(f"unknown directive {kw!r}", lineno)
    if not seen_header:
        raise ParseError("empty input; expected header 'dyckgraph 1'")
    if k is None:
        raise ParseError("missing 'k' line")
    if mode is None:
        raise ParseError("missing 'mode' line")
    names = list(ids)
    method_of = [methods.get(name) for name in names] if methods else None
    return LabeledGraph(names, k, list(triples), mode=mode, method_of=method_of)


def write_graph(g: LabeledGraph, mode: str | None = None, comments: Sequence[str] = ()) -> str:
    mode = mode or g.mode
    out = ["dyckgraph 1"]
    out.extend(f"# {c}" for c in comments)
    out.append(f"k {g.k}")
    out.append(f"mode {mode}")
    for u, name in enumerate(g.names):
        tag = None if g.method_of is None else g.method_of[u]
        out.append(f"node {name}" if tag is None else f"node {name} method={tag}")
    triples = sorted(g.triples())
    if mode == "bidirected":
        violations = validate_bidirected(g)
        if violations:
            raise NotBidirected(violations)
        triples = [(u, v, c) for u, v, c in triples if c < 0 or (c == 0 and u <= v)]
    nm = g.names
    out.extend(f"edge {nm[u]} {nm[v]} {code_token(c)}" for u, v, c in triples)
    return "\n".join(out) + "\n"
