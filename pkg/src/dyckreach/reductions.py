"""Graph constructions that encode other problems as Dyck reachability.

* ``union_graph``: a union-only sequence of union-find operations becomes a
  bidirected graph over one parenthesis type whose DSCCs are the final sets.
* ``gadget_graph`` / ``parse_graph``: a CNF grammar and a string become a
  graph in which the sink is Dyck-reachable from the source iff the grammar
  generates the string.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .disjoint_sets import DisjointSets
from .errors import GrammarError, InvalidSequence, UnknownTerminal
from .graph import LabeledGraph
from .oracle import dyck_reachable


# -- union sequences ----------------------------------------------------------

@dataclass
class UnionSequence:
    elements: list[str]
    ops: list[tuple[str, str]]

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise InvalidSequence("element names must be distinct")
        ds = DisjointSets(self.elements)
        for step, (a, b) in enumerate(self.ops, 1):
            if a not in ds or b not in ds:
                raise InvalidSequence(f"operation {step} names an unknown element")
            ra, rb = ds.find(a), ds.find(b)
            if ra == rb:
                raise InvalidSequence(f"operation {step} joins {a} and {b}, already in one set")
            ds.union((ra, rb), ra)

    @classmethod
    def of_size(cls, n: int, ops: Iterable[tuple[int, int]]) -> UnionSequence:
        names = [f"e{i}" for i in range(n)]
        return cls(names, [(names[a], names[b]) for a, b in ops])

    def sets(self) -> DisjointSets:
        ds = DisjointSets(self.elements)
        for a, b in self.ops:
            ra, rb = ds.find(a), ds.find(b)
            ds.union((ra, rb), ra)
        return ds

    def dumps(self) -> str:
        lines = ["unionseq 1", "elements " + " ".join(self.elements)]
        lines += [f"union {a} {b}" for a, b in self.ops]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> UnionSequence:
        lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or lines[0] != ["unionseq", "1"]:
            raise InvalidSequence("expected header 'unionseq 1'")
        elements, ops = [], []
        for parts in lines[1:]:
            if parts[0] == "elements":
                elements.extend(parts[1:])
            elif parts[0] == "union" and len(parts) == 3:
                ops.append((parts[1], parts[2]))
            else:
                raise InvalidSequence(f"unexpected line {' '.join(parts)!r}")
        return cls(elements, ops)


def union_graph(seq: UnionSequence) -> LabeledGraph:
    """Node ``z<i>`` per operation with closing edges to both operands."""
    taken = set(seq.elements)
    prefix = "z"
    while any(name.startswith(prefix) for name in taken):
        prefix += "_"
    names = list(seq.elements) + [f"{prefix}{i}" for i in range(1, len(seq.ops) + 1)]
    ids = {name: u for u, name in enumerate(names)}
    triples = []
    for i, (a, b) in enumerate(seq.ops):
        z = len(seq.elements) + i
        for t in (ids[a], ids[b]):
            triples.append((z, t, -1))
            triples.append((t, z, 1))
    return LabeledGraph(names, 1, triples, mode="bidirected")


# -- grammars -----------------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    head: str
    body: tuple[str, ...]  # (B, C) for binary rules, (a,) for terminal rules

    @property
    def terminal(self) -> bool:
        return len(self.body) == 1

    def __str__(self) -> str:
        rhs = f"'{self.body[0]}'" if self.terminal else " ".join(self.body)
        return f"{self.head} -> {rhs}"


@dataclass
class CnfGrammar:
    start: str
    rules: list[Rule]
    nonterminals: list[str] = field(init=False)
    terminals: list[str] = field(init=False)

    def __post_init__(self):
        if not self.rules:
            raise GrammarError("grammar has no rules")
        nts = [self.start]
        terms: list[str] = []
        for r in self.rules:
            if len(r.body) not in (1, 2):
                raise GrammarError(f"rule {r} is not in Chomsky normal form")
            for sym in (r.head,) + (() if r.terminal else r.body):
                if sym not in nts:
                    nts.append(sym)
            if r.terminal and r.body[0] not in terms:
                terms.append(r.body[0])
        if not any(r.head == self.start for r in self.rules):
            raise GrammarError(f"start symbol {self.start!r} heads no rule")
        self.nonterminals = nts
        self.terminals = terms

    @classmethod
    def parse(cls, text: str) -> CnfGrammar:
        start = None
        rules = []
        seen_header = False
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if not seen_header:
                if line.split() != ["cnf", "1"]:
                    raise GrammarError("expected header 'cnf 1'", lineno)
                seen_header = True
                continue
            parts = line.split()
            if parts[0] == "start" and len(parts) == 2:
                if start is not None:
                    raise GrammarError("start declared twice", lineno)
                start = parts[1]
            elif parts[0] == "rule" and len(parts) >= 4 and parts[2] == "->":
                rhs = parts[3:]
                if len(rhs) == 1 and len(rhs[0]) >= 3 and rhs[0][0] == rhs[0][-1] == "'":
                    rules.append(Rule(parts[1], (rhs[0][1:-1],)))
                elif len(rhs) == 2 and not any("'" in s for s in rhs):
                    rules.append(Rule(parts[1], (rhs[0], rhs[1])))
                else:
                    raise GrammarError(f"rule is not in Chomsky normal form: {line!r}", lineno)
            else:
                raise GrammarError(f"unexpected line {line!r}", lineno)
        if not seen_header:
            raise GrammarError("empty input; expected header 'cnf 1'")
        if start is None:
            raise GrammarError("missing 'start' line")
        return cls(start, rules)

    def dumps(self) -> str:
        return "\n".join(["cnf 1", f"start {self.start}"] + [f"rule {r}" for r in self.rules]) + "\n"

    def index_of(self) -> dict[tuple[str, str], int]:
        """Parenthesis index per symbol: nonterminals first, then terminals."""
        out = {("N", a): i for i, a in enumerate(self.nonterminals, 1)}
        base = len(self.nonterminals)
        out.update({("T", a): base + i for i, a in enumerate(self.terminals, 1)})
        return out

    @property
    def k(self) -> int:
        return len(self.nonterminals) + len(self.terminals)


def _gadget_triples(g: CnfGrammar, x: int, y: int, alloc) -> list[tuple[int, int, int]]:
    idx = g.index_of()
    out = []
    for i, r in enumerate(g.rules, 1):
        xi = alloc(f"x{i}")
        out.append((x, xi, -idx[("N", r.head)]))
        if r.terminal:
            out.append((xi, y, idx[("T", r.body[0])]))
        else:
            b, c = r.body
            yi = alloc(f"y{i}")
            out.append((xi, yi, idx[("N", c)]))
            out.append((yi, y, idx[("N", b)]))
    return out


def gadget_graph(g: CnfGrammar) -> LabeledGraph:
    names: list[str] = ["x", "y"]

    def alloc(name: str) -> int:
        names.append(name)
        return len(names) - 1

    triples = _gadget_triples(g, 0, 1, alloc)
    return LabeledGraph(names, g.k, triples)


@dataclass
class ParseGraph:
    graph: LabeledGraph
    source: int
    sink: int


def _symbols(g: CnfGrammar, s: str | Sequence[str]) -> list[str]:
    if isinstance(s, str):
        if all(len(t) == 1 for t in g.terminals):
            syms = list(s)
        else:
            syms = s.split()
    else:
        syms = list(s)
    for t in syms:
        if t not in g.terminals:
            raise UnknownTerminal(f"{t!r} is not a terminal of the grammar")
    return syms


def parse_graph(g: CnfGrammar, s: str | Sequence[str]) -> ParseGraph:
    """Line ``v -> u0 -> ... -> un`` with one gadget copy hanging off each
    ``u_i`` for ``i < n``."""
    syms = _symbols(g, s)
    n = len(syms)
    idx = g.index_of()
    names = ["v"] + [f"u{i}" for i in range(n + 1)]
    triples = [(0, 1, idx[("N", g.start)])]
    for i, t in enumerate(syms):
        triples.append((1 + i, 2 + i, -idx[("T", t)]))
    for i in range(n):
        def alloc(name: str, _i=i) -> int:
            names.append(f"g{_i}.{name}")
            return len(names) - 1

        x, y = alloc("x"), alloc("y")
        triples.append((1 + i, x, 0))
        triples.append((y, 1 + i, 0))
        triples.extend(_gadget_triples(g, x, y, alloc))
    return ParseGraph(LabeledGraph(names, g.k, triples), 0, n + 1)


def cfl_parse_via_dyck(g: CnfGrammar, s: str | Sequence[str]) -> bool:
    pg = parse_graph(g, s)
    return dyck_reachable(pg.graph, pg.source, pg.sink)


def cky(g: CnfGrammar, s: str | Sequence[str]) -> bool:
    syms = _symbols(g, s)
    n = len(syms)
    if n == 0:
        return False
    table = [[set() for _ in range(n + 1)] for _ in range(n)]  # table[i][j]: span i..j-1
    for i, t in enumerate(syms):
        table[i][i + 1] = {r.head for r in g.rules if r.terminal and r.body[0] == t}
    binary = [r for r in g.rules if not r.terminal]
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span
            cell = table[i][j]
            for mid in range(i + 1, j):
                left, right = table[i][mid], table[mid][j]
                if not left or not right:
                    continue
                for r in binary:
                    if r.body[0] in left and r.body[1] in right:
                        cell.add(r.head)
    return g.start in table[0][n]
