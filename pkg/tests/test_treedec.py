from __future__ import annotations

import random
from collections import deque

import pytest

from dyckreach.errors import InvalidDecomposition, NotCoResident, ParseError, UnknownNode
from dyckreach.generators import ktree
from dyckreach.treedec import TreeDecomposition, bag_of_edge, decompose, height_bound, rebalance, validate


def path_td(nbags):
    bags = [{i, i + 1} for i in range(nbags)]
    return TreeDecomposition(bags, [-1] + list(range(nbags - 1))), list(range(nbags + 1)), [(i, i + 1) for i in range(nbags)]


def random_graph(n, m, seed):
    rng = random.Random(seed)
    edges = {tuple(sorted((rng.randrange(n), rng.randrange(n)))) for _ in range(m)}
    return list(range(n)), [e for e in edges if e[0] != e[1]]


class TestDecompose:
    def test_path(self):
        td = decompose([0, 1, 2], [(0, 1), (1, 2)])
        assert sorted(sorted(b) for b in td.bags) == [[0, 1], [1, 2]]
        assert td.width == 1

    def test_triangle(self):
        td = decompose([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
        assert td.bags == [frozenset({0, 1, 2})] and td.width == 2

    def test_empty(self):
        td = decompose([], [])
        assert len(td) == 1 and td.width == -1

    def test_isolated_nodes_forest_joined(self):
        td = decompose([0, 1, 2, 3], [(0, 1)])
        assert validate(td, [0, 1, 2, 3], [(0, 1)]) == []

    @pytest.mark.parametrize("heuristic", ["min-degree", "min-fill"])
    @pytest.mark.parametrize("seed", range(10))
    def test_partial_3_tree(self, heuristic, seed):
        kt = ktree(50, 3, seed, keep=0.8)
        td = decompose(range(kt.n), kt.edges, heuristic)
        assert validate(td, range(kt.n), kt.edges) == []
        assert td.width <= 3 + 2

    def test_unknown_heuristic(self):
        with pytest.raises(ValueError):
            decompose([0], [], "exact")

    @pytest.mark.parametrize("seed", range(20))
    def test_root_bag_unique_and_topmost(self, seed):
        nodes, edges = random_graph(25, 40, seed)
        td = decompose(nodes, edges)
        for u in nodes:
            b = td.bag_of(u)
            assert u in td.bags[b]
            assert all(u not in td.bags[a] for a in td.path_to_root(b)[1:])
            assert sum(1 for c in range(len(td)) if u in td.bags[c] and td.lv[c] == td.lv[b]) == 1


class TestValidate:
    def test_clean(self):
        td, nodes, edges = path_td(3)
        assert validate(td, nodes, edges) == []

    def test_broken_c2(self):
        td = TreeDecomposition([{0, 1}, {2}], [-1, 0])
        (v,) = validate(td, [0, 1, 2], [(0, 1), (1, 2)])
        assert v.condition == "C2" and v.witness == (1, 2)

    def test_broken_c3(self):
        td = TreeDecomposition([{0, 1}, {1, 2}, {0, 3}], [-1, 0, 1])
        (v,) = validate(td, [0, 1, 2, 3], [(0, 1), (1, 2), (0, 3)])
        assert v.condition == "C3" and v.witness == (0,)

    def test_broken_c1(self):
        td = TreeDecomposition([{0}], [-1])
        assert [v.condition for v in validate(td, [0, 1], [])] == ["C1"]


class TestStructure:
    def test_bad_trees(self):
        with pytest.raises(InvalidDecomposition):
            TreeDecomposition([{0}, {1}], [-1, -1])
        with pytest.raises(InvalidDecomposition):
            TreeDecomposition([], [])
        with pytest.raises(InvalidDecomposition):
            TreeDecomposition([{0}, {1}, {2}], [-1, 2, 1])

    def test_unknown_node(self):
        td, _, _ = path_td(2)
        with pytest.raises(UnknownNode):
            td.bag_of(9)

    def test_dump_parse_round_trip(self):
        nodes, edges = random_graph(30, 50, 3)
        td = decompose(nodes, edges)
        back = TreeDecomposition.parse(td.dump())
        assert back.bags == td.bags and back.parent == td.parent

    def test_dump_format(self):
        td, _, _ = path_td(2)
        assert td.dump(["a", "b", "c"]) == ["bag 0 parent=- : a b", "bag 1 parent=0 : b c"]

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            TreeDecomposition.parse(["bag 0 : 1"])
        with pytest.raises(ParseError):
            TreeDecomposition.parse(["bag 1 parent=- : 1"])


class TestBagOfEdge:
    def setup_method(self):
        self.td = TreeDecomposition([{0, 1}, {1, 2}], [-1, 0])

    def test_deeper(self):
        assert bag_of_edge(self.td, 1, 2) == 1

    def test_root(self):
        assert bag_of_edge(self.td, 0, 1) == 0

    def test_not_co_resident(self):
        with pytest.raises(NotCoResident):
            bag_of_edge(self.td, 0, 2)


class TestRebalance:
    def test_long_path(self):
        td, nodes, edges = path_td(64)
        assert td.height == 63
        rb = rebalance(td)
        assert validate(rb, nodes, edges) == []
        assert rb.height <= 24 and rb.height <= height_bound(64)
        assert rb.width <= 3 * 1 + 2

    def test_single_bag(self):
        td = TreeDecomposition([{0, 1, 2}], [-1])
        rb = rebalance(td)
        assert rb.bags == td.bags and rb.parent == [-1]

    def test_already_balanced(self):
        td = TreeDecomposition([{0, 1}, {1, 2}, {1, 3}], [-1, 0, 0])
        rb = rebalance(td)
        assert rb.height <= height_bound(3)

    @pytest.mark.parametrize("seed", range(30))
    def test_random(self, seed):
        nodes, edges = random_graph(40 + seed, 70 + 2 * seed, seed)
        td = decompose(nodes, edges)
        rb = rebalance(td)
        assert validate(rb, nodes, edges) == []
        assert rb.nodes() == td.nodes()
        assert rb.height <= height_bound(len(rb))
        assert rb.width <= 3 * td.width + 2

    def test_height_bound_values(self):
        assert [height_bound(b) for b in (1, 2, 3, 64, 100)] == [4, 8, 12, 28, 32]


def _components_without(nodes, edges, removed):
    adj = {u: set() for u in nodes if u not in removed}
    for u, v in edges:
        if u in adj and v in adj:
            adj[u].add(v)
            adj[v].add(u)
    comp = {}
    for s in adj:
        if s in comp:
            continue
        comp[s] = s
        q = deque([s])
        while q:
            a = q.popleft()
            for b in adj[a]:
                if b not in comp:
                    comp[b] = s
                    q.append(b)
    return comp


@pytest.mark.parametrize("seed", range(15))
def test_separator_property(seed):
    # Removing a bag disconnects nodes whose root bags lie in different
    # subtrees hanging below it (or below vs outside it).
    nodes, edges = random_graph(45, 70, seed)
    td = rebalance(decompose(nodes, edges))
    rng = random.Random(seed)
    for b in rng.sample(range(len(td)), min(6, len(td))):
        sep = td.bags[b]
        comp = _components_without(nodes, edges, sep)

        def side(u):
            for a in td.path_to_root(td.bag_of(u)):
                if td.parent[a] == b:
                    return a
            return "outside"

        for u in nodes:
            for v in nodes:
                if u in sep or v in sep or side(u) == side(v):
                    continue
                assert comp[u] != comp[v]
