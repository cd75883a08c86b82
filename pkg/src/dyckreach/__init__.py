"""Dyck reachability for program analysis."""
from .bidirected import BACKEND, RunStats, bidirected_reach, densify_reduce
from .disjoint_sets import DisjointSets
from .graph import (
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
from .libclient import (
    ProgramValidGraph,
    SummaryArtifact,
    analyze_client,
    d_build,
    d_query,
    d_update,
    preprocess_library,
    process,
    validate_program_valid,
)
from .oracle import dsccs_from_closure, dyck_closure, dyck_reachable, witness
from .reductions import CnfGrammar, UnionSequence, cfl_parse_via_dyck, cky, gadget_graph, parse_graph, union_graph
from .treedec import TreeDecomposition, decompose, rebalance, validate

__all__ = [
    "BACKEND",
    "CnfGrammar",
    "DisjointSets",
    "DsccPartition",
    "Label",
    "LabeledGraph",
    "ProgramValidGraph",
    "RunStats",
    "SummaryArtifact",
    "TreeDecomposition",
    "UnionSequence",
    "analyze_client",
    "bidirected_reach",
    "cfl_parse_via_dyck",
    "cky",
    "contract_epsilon",
    "d_build",
    "d_query",
    "d_update",
    "decompose",
    "densify_reduce",
    "dscc_query",
    "dsccs_from_closure",
    "dyck_closure",
    "dyck_reachable",
    "gadget_graph",
    "is_dyck",
    "parse_graph",
    "preprocess_library",
    "process",
    "read_graph",
    "rebalance",
    "union_graph",
    "validate",
    "validate_bidirected",
    "validate_program_valid",
    "witness",
    "write_graph",
]
