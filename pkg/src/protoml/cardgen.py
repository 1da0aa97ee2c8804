"""Prototype cards: a structured, stakeholder-facing summary of a notebook.

A card is a pure function of the notebook, its activity flow, its review
report, trace links, and manually supplied fields — everything but the
``generated_at`` timestamp, which is injectable. Inputs computed from a
different notebook state fail loudly with HashMismatch rather than quietly
producing a misleading document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .dataflow.activity import ACTIVITY_CATEGORIES
from .dataflow.flow import ActivityFlow
from .dataflow.lexer import string_literals
from .errors import HashMismatch, MalformedNotebook, UnknownFormat
from .knowledge import TraceLink
from .model import Notebook, canonical_hash
from .reviewer import ReviewReport
from .util import Clock, env_clock, rfc3339

CARD_SCHEMA = "card/1"

MISSING_DESCRIPTION = "«not provided»"

DATA_EXTENSIONS = (
    ".csv", ".tsv", ".parquet", ".json", ".xlsx", ".xls", ".feather",
    ".h5", ".hdf5", ".pkl", ".pickle", ".npz", ".npy", ".zip", ".gz",
    ".db", ".sqlite", ".txt",
)


@dataclass(frozen=True)
class PrototypeCard:
    title: str
    problem_description: str
    data_sources: tuple[str, ...]
    activity_summary: tuple[tuple[str, int], ...]
    review_score_by_persona: Mapping[str, float]
    knowledge_sources: tuple[str, ...]
    generated_at: str
    notebook_hash: str
    manual_fields: Mapping[str, str] = field(default_factory=dict)


def _path_like(literal: str) -> bool:
    if not literal or "\n" in literal:
        return False
    return "/" in literal or literal.lower().endswith(DATA_EXTENSIONS)


def _title(nb: Notebook, manual: Mapping[str, str]) -> str:
    if manual.get("title"):
        return manual["title"]
    for cell in nb.cells:
        if cell.kind != "markdown":
            continue
        for line in cell.source.splitlines():
            line = line.strip()
            if line.startswith("#"):
                return line.lstrip("#").strip()
    return "Untitled prototype"


def generate_card(
    nb: Notebook,
    flow: ActivityFlow,
    report: ReviewReport,
    links: list[TraceLink] | None = None,
    manual: Mapping[str, str] | None = None,
    clock: Clock = env_clock,
) -> PrototypeCard:
    manual = dict(manual or {})
    links = links or []
    nb_hash = canonical_hash(nb).hex
    if flow.notebook_hash != nb_hash:
        raise HashMismatch("activity flow was computed from a different notebook state")
    if report.notebook_hash != nb_hash:
        raise HashMismatch("review report was computed from a different notebook state")

    desc_passed = any(f.rule_id == "R-DESC" and f.passed for f in report.findings)
    if desc_passed and nb.cells and nb.cells[0].kind == "markdown":
        problem = nb.cells[0].source
    elif manual.get("problem_description"):
        problem = manual["problem_description"]
    else:
        problem = MISSING_DESCRIPTION

    category_by_cell = {a.cell_id: a.category for a in flow.activities}
    data_sources: list[str] = []
    for _, cell in nb.code_cells():
        if category_by_cell.get(cell.cell_id) != "DataLoading":
            continue
        for literal in string_literals(cell.source):
            if _path_like(literal) and literal not in data_sources:
                data_sources.append(literal)

    counts = {category: 0 for category in ACTIVITY_CATEGORIES}
    for activity in flow.activities:
        counts[activity.category] += 1
    summary = tuple((c, counts[c]) for c in ACTIVITY_CATEGORIES if counts[c])

    return PrototypeCard(
        title=_title(nb, manual),
        problem_description=problem,
        data_sources=tuple(data_sources),
        activity_summary=summary,
        review_score_by_persona=dict(sorted(report.persona_scores.items())),
        knowledge_sources=tuple(sorted({l.source_id for l in links})),
        generated_at=rfc3339(clock()),
        notebook_hash=nb_hash,
        manual_fields=manual,
    )


def card_to_dict(card: PrototypeCard) -> dict:
    return {
        "schema": CARD_SCHEMA,
        "title": card.title,
        "problem_description": card.problem_description,
        "data_sources": list(card.data_sources),
        "activity_summary": [[category, count] for category, count in card.activity_summary],
        "review_score_by_persona": dict(card.review_score_by_persona),
        "knowledge_sources": list(card.knowledge_sources),
        "generated_at": card.generated_at,
        "notebook_hash": card.notebook_hash,
        "manual_fields": dict(card.manual_fields),
    }


def card_from_dict(doc: dict) -> PrototypeCard:
    if not isinstance(doc, dict) or doc.get("schema") != CARD_SCHEMA:
        raise MalformedNotebook(f"not a {CARD_SCHEMA} document")
    return PrototypeCard(
        title=doc["title"],
        problem_description=doc["problem_description"],
        data_sources=tuple(doc["data_sources"]),
        activity_summary=tuple((c, n) for c, n in doc["activity_summary"]),
        review_score_by_persona=dict(doc["review_score_by_persona"]),
        knowledge_sources=tuple(doc["knowledge_sources"]),
        generated_at=doc["generated_at"],
        notebook_hash=doc["notebook_hash"],
        manual_fields=dict(doc["manual_fields"]),
    )


def render_card(card: PrototypeCard, format: str = "markdown") -> str:
    """Markdown (fixed section order) or JSON (``card/1``). Deterministic."""
    if format == "json":
        return json.dumps(card_to_dict(card), indent=2, sort_keys=True, ensure_ascii=False)
    if format != "markdown":
        raise UnknownFormat(f"unknown card format: {format!r} (expected 'markdown' or 'json')")

    lines = [f"# ML Prototype Card: {card.title}", ""]
    lines += [
        "## Overview",
        f"- Generated: {card.generated_at}",
        f"- Notebook hash: `{card.notebook_hash}`",
        "",
        "## Problem",
        card.problem_description,
        "",
        "## Data",
    ]
    if card.data_sources:
        lines += [f"- `{src}`" for src in card.data_sources]
    else:
        lines.append("none detected")
    lines += ["", "## Activities", "| Category | Cells |", "| --- | --- |"]
    for category, count in card.activity_summary:
        lines.append(f"| {category} | {count} |")
    if not card.activity_summary:
        lines.append("| (no code cells) | 0 |")
    lines += ["", "## Quality by Persona", "| Persona | Score |", "| --- | --- |"]
    for persona, score in sorted(card.review_score_by_persona.items()):
        lines.append(f"| {persona} | {score} |")
    lines += ["", "## Knowledge Sources"]
    if card.knowledge_sources:
        lines += [f"- {src}" for src in card.knowledge_sources]
    else:
        lines.append("none linked")
    lines += ["", "## Manual Notes"]
    if card.manual_fields:
        lines += [f"- {key}: {card.manual_fields[key]}" for key in sorted(card.manual_fields)]
    else:
        lines.append("none")
    return "\n".join(lines) + "\n"


def write_card(card: PrototypeCard, path: str | Path, format: str = "markdown") -> None:
    Path(path).write_text(render_card(card, format), encoding="utf-8")
