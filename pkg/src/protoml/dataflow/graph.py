"""Inter-cell dependency graph: nearest-preceding-definer edges.

For every use of a symbol in code cell j, an edge is drawn from the closest
earlier code cell that defines it (sequential-execution semantics: later
definitions shadow earlier ones). Cells are linked in notebook order;
execution counts are deliberately ignored here — stale counts are a review
finding, not a graph input.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model import Notebook
from .symbols import CellSymbols, analyze_cell


@dataclass(frozen=True)
class DependencyEdge:
    producer: str  # cell_id that defines the symbol
    consumer: str  # cell_id that uses it
    symbol: str


@dataclass(frozen=True)
class DependencyGraph:
    nodes: tuple[tuple[str, int], ...]  # (cell_id, index in full notebook order)
    edges: tuple[DependencyEdge, ...]

    def index_of(self, cell_id: str) -> int:
        for cid, idx in self.nodes:
            if cid == cell_id:
                return idx
        raise KeyError(cell_id)

    def edges_from(self, cell_id: str) -> list[DependencyEdge]:
        return [e for e in self.edges if e.producer == cell_id]


def analyze_notebook(nb: Notebook) -> dict[str, CellSymbols]:
    """Per-cell symbol analysis for every code cell, keyed by cell_id."""
    return {cell.cell_id: analyze_cell(cell.source) for _, cell in nb.code_cells()}


def build_dependency_graph(
    nb: Notebook, symbols: dict[str, CellSymbols] | None = None
) -> DependencyGraph:
    symbols = symbols if symbols is not None else analyze_notebook(nb)
    code = nb.code_cells()
    nodes = tuple((cell.cell_id, idx) for idx, cell in code)
    order = {cell.cell_id: pos for pos, (_, cell) in enumerate(code)}

    edges: list[DependencyEdge] = []
    for pos, (_, consumer) in enumerate(code):
        for symbol in sorted(symbols[consumer.cell_id].uses):
            for prev_pos in range(pos - 1, -1, -1):
                producer = code[prev_pos][1]
                if symbol in symbols[producer.cell_id].defs:
                    edges.append(DependencyEdge(producer.cell_id, consumer.cell_id, symbol))
                    break

    edges.sort(key=lambda e: (order[e.producer], order[e.consumer], e.symbol))
    return DependencyGraph(nodes, tuple(edges))
