"""molinfer: inference and enumeration of acyclic chemical graphs.

The package turns target property values into concrete molecular
skeletons in two directions: a feasibility MILP whose solutions decode
into graphs with prescribed size, diameter, and branch-height, and a
dynamic-programming search that enumerates every graph matching a
feature vector.  Supporting pieces: graph descriptors, a small ReLU
regressor whose inverse is MILP-encodable, corpus ingestion, and a
command-line pipeline tying the stages together.
"""

from .chemgraph import (
    ChemicalAlphabet,
    ChemicalGraph,
    BranchDecomposition,
    RootedTreeTemplate,
    branch_decomposition,
    canonical_form,
    diameter_and_center,
    parse_graph,
    parse_graphs,
    serialize_graph,
    tree_template,
    validate,
)

__all__ = [
    "ChemicalAlphabet",
    "ChemicalGraph",
    "BranchDecomposition",
    "RootedTreeTemplate",
    "branch_decomposition",
    "canonical_form",
    "diameter_and_center",
    "parse_graph",
    "parse_graphs",
    "serialize_graph",
    "tree_template",
    "validate",
]

__version__ = "0.1.0"
