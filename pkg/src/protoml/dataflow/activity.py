"""Semantic activity classification and cell descriptions.

Each code cell gets exactly one category from a closed taxonomy, chosen by a
priority-ordered pattern table over call/attribute tokens (shipped as a data
file so it can evolve without code changes). Descriptions come from a
deterministic template; an external text generator can be plugged in and any
failure there falls back to the template — the pipeline never breaks on it.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Protocol

from ..model import Cell
from .lexer import name_tokens, split_statements
from .symbols import CellSymbols, analyze_cell

ACTIVITY_CATEGORIES = (
    "Setup",
    "DataLoading",
    "Preprocessing",
    "Exploration",
    "Modeling",
    "Evaluation",
    "Visualization",
    "Other",
)


class TextGenerator(Protocol):
    """Anything that can turn a prompt into a short text."""

    def generate(self, prompt: str) -> str: ...


@dataclass(frozen=True)
class Pattern:
    token: str
    call_only: bool

    def matches(self, token_text: str, calls: bool) -> bool:
        return token_text == self.token and (calls or not self.call_only)


def load_pattern_table() -> list[tuple[str, tuple[Pattern, ...]]]:
    """Priority-ordered (category, patterns) pairs from the shipped table."""
    text = resources.files("protoml.dataflow").joinpath("data/patterns.txt").read_text("utf-8")
    table: dict[str, list[Pattern]] = {}
    order: list[str] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        category, raw = line.split(None, 1)
        if category not in ACTIVITY_CATEGORIES:
            raise ValueError(f"pattern table names unknown category {category!r}")
        if category not in table:
            table[category] = []
            order.append(category)
        table[category].append(Pattern(raw.rstrip("("), raw.endswith("(")))
    return [(cat, tuple(table[cat])) for cat in order]


_PATTERN_TABLE = load_pattern_table()


def _is_import_only(source: str) -> bool:
    statements = split_statements(source)
    if not statements:
        return False
    return all(
        stmt.tokens[0].is_name and stmt.tokens[0].text in ("import", "from")
        for stmt in statements
    )


def classify_activity(
    cell: Cell, symbols: CellSymbols | None = None
) -> tuple[str, str]:
    """(category, label) for a code cell. Depends only on the cell's source."""
    symbols = symbols if symbols is not None else analyze_cell(cell.source)
    tokens = name_tokens(cell.source)
    category = None
    for cat, patterns in _PATTERN_TABLE:
        if any(p.matches(t.text, t.calls) for p in patterns for t in tokens):
            category = cat
            break
    if category is None:
        category = "Setup" if _is_import_only(cell.source) else "Other"
    return category, _label(category, symbols, tokens)


def _label(category: str, symbols: CellSymbols, tokens: list) -> str:
    if not symbols.defs:
        return category
    counts = Counter(t.text for t in tokens)
    salient = sorted(symbols.defs, key=lambda name: (-counts[name], name))[:3]
    return f"{category}: {', '.join(salient)}"


def _fmt(names: frozenset[str]) -> str:
    return ", ".join(sorted(names)) if names else "nothing"


_SENTENCE_END = re.compile(r"(?<=[.!?])\s")


def first_sentence(text: str) -> str:
    line = text.strip().splitlines()[0] if text.strip() else ""
    return _SENTENCE_END.split(line, 1)[0].strip()


def describe_activity(
    cell: Cell,
    generator: TextGenerator | None = None,
    *,
    symbols: CellSymbols | None = None,
    category: str | None = None,
) -> str:
    """One-sentence description of what the cell does.

    With a generator: prompt it with source + category, keep the first
    sentence. Without one — or on any generator failure — fall back to the
    deterministic template.
    """
    symbols = symbols if symbols is not None else analyze_cell(cell.source)
    if category is None:
        category, _ = classify_activity(cell, symbols)
    if generator is not None:
        prompt = (
            f"Describe in one sentence what this {category} notebook cell does:\n"
            f"{cell.source}"
        )
        try:
            sentence = first_sentence(generator.generate(prompt))
            if sentence:
                return sentence
        except Exception:
            pass  # GeneratorUnavailable or anything else: template below
    return f"{category} step defining {_fmt(symbols.defs)} using {_fmt(symbols.uses)}"
