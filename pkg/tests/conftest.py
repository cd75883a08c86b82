from __future__ import annotations

import pytest

from dyckreach.graph import LabeledGraph, read_graph
from dyckreach.reductions import CnfGrammar, Rule

FOUR_NODE_TEXT = """dyckgraph 1
k 1
mode bidirected
edge x u c1
edge x v c1
edge u z c1
edge v v c1
"""

ANBN_TEXT = """cnf 1
start S
rule S -> A B
rule S -> T B
rule T -> A S
rule A -> 'a'
rule B -> 'b'
"""


def four_node() -> LabeledGraph:
    return read_graph(FOUR_NODE_TEXT)


def anbn() -> CnfGrammar:
    return CnfGrammar.parse(ANBN_TEXT)


def anbn_uncorrected() -> CnfGrammar:
    return CnfGrammar("S", [Rule("S", ("T", "B")), Rule("T", ("A", "S")), Rule("A", ("a",)), Rule("B", ("b",))])


def callback_program(which: int) -> LabeledGraph:
    """Method g (0) calling a callback resolved to f1 (which=1), f2 (which=2)
    or left unresolved (which=0).  g.2 is the argument y, g.3 the result p."""
    edges = [("g.3", "g.4", "eps")]
    methods = {"g.1": 0, "g.2": 0, "g.3": 0, "g.4": 0}
    if which == 1:
        edges += [
            ("f1.2", "f1.3", "eps"), ("f1.1", "f1.4", "eps"), ("f1.2", "f1.4", "eps"),
            ("f1.2", "f1.5", "eps"), ("f1.1", "f1.5", "eps"), ("f1.4", "f1.phi", "eps"),
            ("f1.5", "f1.phi", "eps"), ("f1.phi", "f1.6", "eps"),
            ("g.1", "f1.1", "o1"), ("g.2", "f1.2", "o1"), ("f1.6", "g.3", "c1"),
        ]
        methods.update({f"f1.{x}": 1 for x in ("1", "2", "3", "4", "5", "6", "phi")})
    elif which == 2:
        edges += [
            ("f2.1", "f2.3", "eps"), ("f2.1", "f2.4", "eps"), ("f2.1", "f2.5", "eps"),
            ("f2.4", "f2.phi", "eps"), ("f2.5", "f2.phi", "eps"), ("f2.phi", "f2.6", "eps"),
            ("g.1", "f2.1", "o2"), ("g.2", "f2.2", "o2"), ("f2.6", "g.3", "c2"),
        ]
        methods.update({f"f2.{x}": 2 for x in ("1", "2", "3", "4", "5", "6", "phi")})
    return LabeledGraph.from_named(2, edges, nodes=["g.1", "g.2", "g.3", "g.4"], methods=methods)


@pytest.fixture
def four_node_graph() -> LabeledGraph:
    return four_node()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
