from __future__ import annotations

import pytest

from conftest import four_node
from dyckreach.errors import BadLabelIndex, DuplicateEdge, NotBidirected, ParseError, UnknownNode
from dyckreach.generators import bidirected_random
from dyckreach.graph import (
    DsccPartition,
    Label,
    LabeledGraph,
    contract_epsilon,
    dscc_query,
    is_dyck,
    read_graph,
    validate_bidirected,
    write_graph,
)

O1, O2, C1, C2 = Label.open(1), Label.open(2), Label.close(1), Label.close(2)


class TestLabel:
    def test_codes_and_mirror(self):
        assert Label.eps().code == 0
        assert O1.code == 1 and C2.code == -2
        assert O1.mirror() == C1 and Label.eps().mirror() == Label.eps()

    @pytest.mark.parametrize("tok", ["eps", "o1", "c3", "o12"])
    def test_parse_round_trip(self, tok):
        assert str(Label.parse(tok)) == tok

    @pytest.mark.parametrize("tok", ["o0", "x1", "c", "", "o-1"])
    def test_parse_rejects(self, tok):
        with pytest.raises(ValueError):
            Label.parse(tok)

    def test_index_required(self):
        with pytest.raises(ValueError):
            Label("open", 0)
        with pytest.raises(ValueError):
            Label("eps", 2)


class TestIsDyck:
    def test_matched_pair(self):
        assert is_dyck([O1, C1])

    def test_empty(self):
        assert is_dyck([])

    def test_close_first(self):
        assert not is_dyck([C1, O1])

    def test_nesting(self):
        assert is_dyck([O1, O2, C2, C1])

    def test_crossed_and_unclosed(self):
        assert not is_dyck([O1, O2, C1, C2])
        assert not is_dyck([O1])

    def test_epsilon_ignored(self):
        assert is_dyck([Label.eps(), O1, Label.eps(), C1])

    def test_index_bound(self):
        with pytest.raises(BadLabelIndex):
            is_dyck([O2, C2], k=1)


class TestLabeledGraph:
    def test_unique_label_per_pair(self):
        with pytest.raises(DuplicateEdge):
            LabeledGraph(["a", "b"], 1, [(0, 1, 1), (0, 1, -1)])

    def test_self_loop_complementary_pair_allowed(self):
        g = LabeledGraph(["v"], 1, [(0, 0, 1), (0, 0, -1)])
        assert g.m == 2

    def test_out_of_range_node(self):
        with pytest.raises(UnknownNode):
            LabeledGraph(["a"], 1, [(0, 1, 0)])

    def test_label_bound(self):
        with pytest.raises(BadLabelIndex):
            LabeledGraph(["a", "b"], 1, [(0, 1, 2)])

    def test_from_named_bidirected_adds_mirrors(self):
        g = LabeledGraph.from_named(1, [("a", "b", "o1")], mode="bidirected")
        assert g.named_triples() == {("a", "b", 1), ("b", "a", -1)}

    def test_node_id_unknown(self):
        with pytest.raises(UnknownNode):
            four_node().node_id("nope")


class TestValidateBidirected:
    def test_symmetric_pair(self):
        g = LabeledGraph(["a", "b"], 1, [(0, 1, O1), (1, 0, C1)])
        assert validate_bidirected(g) == []

    def test_missing_mirror(self):
        g = LabeledGraph(["a", "b"], 1, [(0, 1, O1)])
        (v,) = validate_bidirected(g)
        assert v.missing == ("b", "a", "c1")

    def test_four_node(self):
        assert validate_bidirected(four_node()) == []

    def test_one_way_epsilon(self):
        g = LabeledGraph(["a", "b"], 1, [(0, 1, 0)])
        assert len(validate_bidirected(g)) == 1


class TestContractEpsilon:
    def test_single_component(self):
        g = LabeledGraph.from_named(1, [("a", "b", "eps"), ("b", "c", "o1")], mode="bidirected")
        g2, node_map = contract_epsilon(g)
        assert g2.names == ("a", "c")
        assert node_map == [0, 0, 1]
        assert g2.named_triples() == {("a", "c", 1), ("c", "a", -1)}

    def test_no_epsilon_is_identity(self):
        g = four_node()
        g2, node_map = contract_epsilon(g)
        assert g2 is g and node_map == list(range(g.n))

    def test_chain_collapses(self):
        g = LabeledGraph.from_named(1, [("a", "b", "eps"), ("b", "c", "eps")], mode="bidirected")
        g2, node_map = contract_epsilon(g)
        assert g2.n == 1 and g2.m == 0 and node_map == [0, 0, 0]

    def test_parallel_edges_deduplicated(self):
        g = LabeledGraph.from_named(
            1, [("a", "b", "eps"), ("a", "c", "o1"), ("b", "c", "o1")], mode="bidirected", unique_pairs=False
        )
        g2, _ = contract_epsilon(g)
        assert g2.m == 2

    def test_rejects_non_bidirected(self):
        with pytest.raises(NotBidirected):
            contract_epsilon(LabeledGraph(["a", "b"], 1, [(0, 1, 1)]))


class TestFormat:
    def test_general(self):
        g = read_graph("dyckgraph 1\nk 1\nmode general\nedge a b o1")
        assert (g.n, g.m) == (2, 1)

    def test_bidirected_synthesizes_mirror(self):
        g = read_graph("dyckgraph 1\nk 1\nmode bidirected\nedge a b o1")
        assert g.named_triples() == {("a", "b", 1), ("b", "a", -1)}

    def test_bad_label_index(self):
        with pytest.raises(BadLabelIndex):
            read_graph("dyckgraph 1\nk 2\nmode general\nedge a b o9")

    @pytest.mark.parametrize(
        "text, line",
        [
            ("", None),
            ("graph 1\n", 1),
            ("dyckgraph 1\nk 1\nedge a b o1\n", 3),
            ("dyckgraph 1\nk 1\nmode general\nedge a b\n", 4),
            ("dyckgraph 1\nk 1\nmode general\nedge a b q1\n", 4),
            ("dyckgraph 1\nk 1\nmode general\nfrob\n", 4),
            ("dyckgraph 1\nk 1\nmode weird\n", 3),
            ("dyckgraph 1\nk 0\nmode general\n", 2),
            ("dyckgraph 1\nk 1\nmode general\nnode a method=x\n", 4),
        ],
    )
    def test_parse_errors_carry_line(self, text, line):
        with pytest.raises(ParseError) as exc:
            read_graph(text)
        assert exc.value.line == line

    def test_duplicate_general_edge(self):
        with pytest.raises(DuplicateEdge):
            read_graph("dyckgraph 1\nk 1\nmode general\nedge a b o1\nedge a b o1\n")

    def test_comments_and_method_tags(self):
        g = read_graph("dyckgraph 1  # header\nk 1\nmode general\nnode a method=3\nedge a b eps # tail\n")
        assert g.method_of == (3, None)

    def test_round_trip_bidirected(self):
        g = bidirected_random(30, 50, 3, seed=7)
        assert read_graph(write_graph(g)).same_as(g)

    def test_round_trip_general(self):
        g = four_node()
        g2 = read_graph(write_graph(g, mode="general"))
        assert g2.same_as(g) and g2.mode == "general"

    def test_write_bidirected_requires_mirrors(self):
        with pytest.raises(NotBidirected):
            write_graph(LabeledGraph(["a", "b"], 1, [(0, 1, 1)]), mode="bidirected")


class TestPartition:
    def test_query_and_listing(self):
        p = DsccPartition.from_labels([5, 5, 7, 5])
        assert list(p.class_of) == [0, 0, 2, 0]
        assert dscc_query(p, 1, 3) and not dscc_query(p, 0, 2)
        assert p.listing(["d", "b", "a", "c"]) == "class a: a\nclass b: b c d\n"

    def test_unknown_node(self):
        with pytest.raises(UnknownNode):
            DsccPartition([0]).query(0, 4)
