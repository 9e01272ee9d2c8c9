"""Stratified tree decompositions, elimination orderings and component trees."""

from .component_tree import (
    ComponentTree,
    CTNode,
    component_tree,
    drop_nodes,
    is_normalized,
    level_graph,
    normalize,
    reference_component_tree,
)
from .core import (
    DecompositionReport,
    StratifiedGraph,
    TreeDecomposition,
    brute_force_tw,
    check_decomposition,
    decomposition_to_ordering,
    ordering_to_decomposition,
    ordering_width,
    parse_stratified_graph,
    render_stratified_graph,
)
from .stratified import formula_stratification, fotw, stratified_treewidth
from .treewidth import optimal_sequence, treewidth_decomposition

__all__ = [
    "CTNode",
    "ComponentTree",
    "DecompositionReport",
    "StratifiedGraph",
    "TreeDecomposition",
    "brute_force_tw",
    "check_decomposition",
    "component_tree",
    "decomposition_to_ordering",
    "drop_nodes",
    "formula_stratification",
    "fotw",
    "is_normalized",
    "level_graph",
    "normalize",
    "optimal_sequence",
    "ordering_to_decomposition",
    "ordering_width",
    "parse_stratified_graph",
    "reference_component_tree",
    "render_stratified_graph",
    "stratified_treewidth",
    "treewidth_decomposition",
]
