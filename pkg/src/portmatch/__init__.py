"""Pattern matching on port graphs with precompiled multi-dimensional prefix trees.

Patterns are compiled once into a :class:`~portmatch.matcher.Matcher`;
queries then find all convex embeddings into a subject graph in time that
does not grow with the number of patterns.
"""
from .anchor_enum import AnchorCandidate, EdgeRoot, all_anchors, anchor_bound, g_max, subject_strings
from .canonical_tree import (
    CanonicalTree,
    SplitGraph,
    StringTuple,
    as_strings,
    canonical_anchors,
    ct_representation,
    reconstruct,
    split_graph,
)
from .circuits import (
    DEFAULT_GATES,
    TH_CX,
    Circuit,
    Gate,
    GateSet,
    circuit_to_portgraph,
    emit_circuit,
    expand_symmetries,
    parse_circuit,
    portgraph_to_circuit,
    random_circuit,
)
from .matcher import (
    CompiledPattern,
    Match,
    Matcher,
    Subject,
    compile_patterns,
    find_matches,
    load,
    naive_match,
    reconstruct_candidate,
    save,
)
from .portgraph import (
    OPEN,
    Embedding,
    GraphError,
    GraphMetrics,
    LinearPath,
    PortGraph,
    Vertex,
    build_graph,
    is_convex,
    linear_paths,
    metrics,
    normalize_two_paths,
    verify_embedding,
)
from .prefix_tree import PrefixTree

compile = compile_patterns

__all__ = [
    "CanonicalTree",
    "SplitGraph",
    "StringTuple",
    "as_strings",
    "canonical_anchors",
    "ct_representation",
    "reconstruct",
    "split_graph",
    "DEFAULT_GATES",
    "TH_CX",
    "Circuit",
    "Gate",
    "GateSet",
    "circuit_to_portgraph",
    "emit_circuit",
    "expand_symmetries",
    "parse_circuit",
    "portgraph_to_circuit",
    "random_circuit",
    "CompiledPattern",
    "Match",
    "Matcher",
    "Subject",
    "compile_patterns",
    "find_matches",
    "load",
    "naive_match",
    "reconstruct_candidate",
    "save",
    "OPEN",
    "Embedding",
    "GraphError",
    "GraphMetrics",
    "LinearPath",
    "PortGraph",
    "Vertex",
    "build_graph",
    "is_convex",
    "linear_paths",
    "metrics",
    "normalize_two_paths",
    "verify_embedding",
    "AnchorCandidate",
    "EdgeRoot",
    "all_anchors",
    "anchor_bound",
    "g_max",
    "subject_strings",
    "PrefixTree",
    "compile",
]
