"""Data-flow explanation: def/use extraction, dependency graph, activities."""

from .activity import (
    ACTIVITY_CATEGORIES,
    TextGenerator,
    classify_activity,
    describe_activity,
    load_pattern_table,
)
from .flow import (
    Activity,
    ActivityFlow,
    build_activity_flow,
    export_flow,
    flow_to_dict,
    graph_to_dict,
)
from .graph import DependencyEdge, DependencyGraph, analyze_notebook, build_dependency_graph
from .symbols import EXCLUDED_NAMES, CellSymbols, SymbolSet, analyze_cell, extract_symbols

__all__ = [
    "ACTIVITY_CATEGORIES",
    "Activity",
    "ActivityFlow",
    "CellSymbols",
    "DependencyEdge",
    "DependencyGraph",
    "EXCLUDED_NAMES",
    "SymbolSet",
    "TextGenerator",
    "analyze_cell",
    "analyze_notebook",
    "build_activity_flow",
    "build_dependency_graph",
    "classify_activity",
    "describe_activity",
    "export_flow",
    "extract_symbols",
    "flow_to_dict",
    "graph_to_dict",
    "load_pattern_table",
]
