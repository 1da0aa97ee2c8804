"""Activity flow assembly and export (DOT / JSON).

The flow is the Explainer's product: code cells annotated with a semantic
category, a short label, and a description, plus the dependency edges
between them. Exports are byte-deterministic: nodes in cell order, edges
sorted by (producer index, consumer index, symbol).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import UnknownFormat
from ..model import Notebook, canonical_hash
from .activity import TextGenerator, classify_activity, describe_activity
from .graph import DependencyGraph, analyze_notebook, build_dependency_graph

FLOW_SCHEMA = "flow/1"

CATEGORY_COLORS = {
    "Setup": "#d9d9d9",
    "DataLoading": "#a6cee3",
    "Preprocessing": "#b2df8a",
    "Exploration": "#fdbf6f",
    "Modeling": "#fb9a99",
    "Evaluation": "#cab2d6",
    "Visualization": "#ffff99",
    "Other": "#ffffff",
}


@dataclass(frozen=True)
class Activity:
    cell_id: str
    category: str
    label: str
    description: str


@dataclass(frozen=True)
class ActivityFlow:
    activities: tuple[Activity, ...]
    edges: tuple  # DependencyEdge, inherited from the dependency graph
    notebook_hash: str


def build_activity_flow(nb: Notebook, generator: TextGenerator | None = None) -> ActivityFlow:
    symbols = analyze_notebook(nb)
    graph = build_dependency_graph(nb, symbols)
    activities = []
    for _, cell in nb.code_cells():
        sym = symbols[cell.cell_id]
        category, label = classify_activity(cell, sym)
        description = describe_activity(cell, generator, symbols=sym, category=category)
        activities.append(Activity(cell.cell_id, category, label, description))
    return ActivityFlow(tuple(activities), graph.edges, canonical_hash(nb).hex)


def flow_to_dict(flow: ActivityFlow) -> dict:
    return {
        "schema": FLOW_SCHEMA,
        "notebook_hash": flow.notebook_hash,
        "activities": [
            {
                "cell_id": a.cell_id,
                "category": a.category,
                "label": a.label,
                "description": a.description,
            }
            for a in flow.activities
        ],
        "edges": [
            {"from": e.producer, "to": e.consumer, "symbol": e.symbol}
            for e in _sorted_edges(flow)
        ],
    }


def _sorted_edges(flow: ActivityFlow):
    order = {a.cell_id: i for i, a in enumerate(flow.activities)}
    return sorted(flow.edges, key=lambda e: (order[e.producer], order[e.consumer], e.symbol))


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_flow(flow: ActivityFlow, format: str = "json") -> str:
    """Render the flow as text. Formats: ``dot`` (Graphviz), ``json`` (flow/1)."""
    if format == "json":
        return json.dumps(flow_to_dict(flow), indent=2, sort_keys=True, ensure_ascii=False)
    if format == "dot":
        lines = ["digraph activity_flow {", "  rankdir=TB;", '  node [shape=box, style=filled];']
        for activity in flow.activities:
            color = CATEGORY_COLORS[activity.category]
            lines.append(
                f'  "{_dot_escape(activity.cell_id)}" '
                f'[label="{_dot_escape(activity.label)}", '
                f'category="{activity.category}", fillcolor="{color}"];'
            )
        for edge in _sorted_edges(flow):
            lines.append(
                f'  "{_dot_escape(edge.producer)}" -> "{_dot_escape(edge.consumer)}" '
                f'[label="{_dot_escape(edge.symbol)}"];'
            )
        lines.append("}")
        return "\n".join(lines)
    raise UnknownFormat(f"unknown flow format: {format!r} (expected 'dot' or 'json')")


def graph_to_dict(graph: DependencyGraph) -> dict:
    return {
        "schema": "graph/1",
        "nodes": [{"cell_id": cid, "index": idx} for cid, idx in graph.nodes],
        "edges": [
            {"from": e.producer, "to": e.consumer, "symbol": e.symbol} for e in graph.edges
        ],
    }
