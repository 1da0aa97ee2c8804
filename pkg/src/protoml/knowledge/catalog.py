"""Knowledge-source catalog: sources, suitability scoring, trace links.

Sources carry user-asserted suitability flags (code availability, known
author, standard benchmarks, peer review, recency) — nothing is fetched
from the network. Trace links tie a source to a notebook cell or a snapshot
node. The catalog lives at ``<repo>/knowledge.json`` (``knowledge/1``),
persisted atomically under the repo's single-writer lock, sorted so saves
round-trip byte-identically.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping

from ..errors import DanglingLink, DuplicateId, InvalidSource, InvalidWeights, UnknownSource
from ..locking import RepoLock
from ..util import Clock, atomic_write, canonical_json_bytes, env_clock, rfc3339

KNOWLEDGE_SCHEMA = "knowledge/1"

SOURCE_KINDS = ("paper", "blog", "repo", "forum", "notebook", "other")
FLAGS = ("has_code", "author_known", "standard_benchmark", "peer_reviewed", "recent")

_SLUG_RE = re.compile(r"^[a-z0-9-]+$")


@dataclass(frozen=True)
class KnowledgeSource:
    source_id: str
    kind: str
    title: str
    url: str | None = None
    author: str | None = None
    added_at: str = ""
    flags: Mapping[str, bool] = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self) -> None:
        if not _SLUG_RE.match(self.source_id):
            raise InvalidSource(f"source_id must be a [a-z0-9-]+ slug, got {self.source_id!r}")
        if self.kind not in SOURCE_KINDS:
            raise InvalidSource(f"unknown source kind {self.kind!r}")
        unknown = sorted(set(self.flags) - set(FLAGS))
        if unknown:
            raise InvalidSource(f"unknown flag {unknown[0]!r}")


@dataclass(frozen=True)
class LinkTarget:
    """Either a (notebook, cell) pair or a snapshot node."""

    type: str  # "cell" | "snapshot"
    notebook: str | None = None
    cell_id: str | None = None
    node_id: str | None = None

    def __post_init__(self) -> None:
        if self.type == "cell":
            if not self.notebook or not self.cell_id or self.node_id is not None:
                raise DanglingLink("cell target needs notebook and cell_id")
        elif self.type == "snapshot":
            if not self.node_id or self.notebook is not None or self.cell_id is not None:
                raise DanglingLink("snapshot target needs node_id")
        else:
            raise DanglingLink(f"unknown target type {self.type!r}")

    @staticmethod
    def cell(notebook: str, cell_id: str) -> "LinkTarget":
        return LinkTarget("cell", notebook=notebook, cell_id=cell_id)

    @staticmethod
    def snapshot(node_id: str) -> "LinkTarget":
        return LinkTarget("snapshot", node_id=node_id)

    def key(self) -> tuple:
        return (self.type, self.notebook or "", self.cell_id or "", self.node_id or "")


@dataclass(frozen=True)
class TraceLink:
    source_id: str
    target: LinkTarget
    rationale: str = ""


@dataclass(frozen=True)
class SuitabilityScore:
    value: float
    breakdown: Mapping[str, float]


def default_weights() -> dict[str, Fraction]:
    text = resources.files("protoml.knowledge").joinpath("data/weights.json").read_text("utf-8")
    doc = json.loads(text)
    return {flag: Fraction(str(v)) for flag, v in doc["weights"].items()}


def score_source(
    src: KnowledgeSource, weights: Mapping[str, Fraction | float] | None = None
) -> SuitabilityScore:
    """Weighted sum of the flags set true. Weights must sum to 1 (±1e-9)."""
    raw = weights if weights is not None else default_weights()
    exact: dict[str, Fraction] = {}
    for flag, value in raw.items():
        if flag not in FLAGS:
            raise InvalidWeights(f"unknown flag {flag!r}")
        w = Fraction(str(value))
        if w < 0:
            raise InvalidWeights(f"weight for {flag!r} is negative")
        exact[flag] = w
    total = sum(exact.values(), Fraction(0))
    if abs(total - 1) > Fraction(1, 10**9):
        raise InvalidWeights(f"weights sum to {float(total)}, expected 1")
    breakdown = {
        flag: float(exact[flag]) for flag in FLAGS if src.flags.get(flag, False) and flag in exact
    }
    return SuitabilityScore(float(sum(Fraction(str(v)) for v in breakdown.values())), breakdown)


class KnowledgeCatalog:
    """Disk-backed catalog handle; reads are always fresh from disk."""

    def __init__(self, repo_dir: str | Path, clock: Clock = env_clock):
        self.repo_dir = Path(repo_dir)
        self.path = self.repo_dir / "knowledge.json"
        self.clock = clock

    # --- persistence ----------------------------------------------------------

    def _load(self) -> tuple[dict[str, KnowledgeSource], list[TraceLink]]:
        if not self.path.exists():
            return {}, []
        doc = json.loads(self.path.read_text("utf-8"))
        sources = {}
        for raw in doc.get("sources", []):
            src = KnowledgeSource(
                source_id=raw["source_id"],
                kind=raw["kind"],
                title=raw["title"],
                url=raw.get("url"),
                author=raw.get("author"),
                added_at=raw.get("added_at", ""),
                flags=dict(raw.get("flags", {})),
                notes=raw.get("notes", ""),
            )
            sources[src.source_id] = src
        links = [
            TraceLink(raw["source_id"], LinkTarget(**raw["target"]), raw.get("rationale", ""))
            for raw in doc.get("links", [])
        ]
        return sources, links

    def _save(self, sources: dict[str, KnowledgeSource], links: list[TraceLink]) -> None:
        doc = {
            "schema": KNOWLEDGE_SCHEMA,
            "sources": [
                {
                    "source_id": s.source_id,
                    "kind": s.kind,
                    "title": s.title,
                    "url": s.url,
                    "author": s.author,
                    "added_at": s.added_at,
                    "flags": {flag: bool(s.flags.get(flag, False)) for flag in FLAGS},
                    "notes": s.notes,
                }
                for s in sorted(sources.values(), key=lambda s: s.source_id)
            ],
            "links": [
                {
                    "source_id": l.source_id,
                    "target": {
                        "type": l.target.type,
                        "notebook": l.target.notebook,
                        "cell_id": l.target.cell_id,
                        "node_id": l.target.node_id,
                    },
                    "rationale": l.rationale,
                }
                for l in sorted(links, key=lambda l: (l.source_id, l.target.key(), l.rationale))
            ],
        }
        atomic_write(self.path, canonical_json_bytes(doc))

    # --- operations -------------------------------------------------------------

    def add_source(
        self,
        source_id: str,
        kind: str,
        title: str,
        url: str | None = None,
        author: str | None = None,
        flags: Mapping[str, bool] | None = None,
        notes: str = "",
    ) -> KnowledgeSource:
        src = KnowledgeSource(
            source_id, kind, title, url, author, rfc3339(self.clock()), dict(flags or {}), notes
        )
        with RepoLock(self.repo_dir):
            sources, links = self._load()
            if source_id in sources:
                raise DuplicateId(f"source {source_id!r} already cataloged")
            sources[source_id] = src
            self._save(sources, links)
        return src

    def get(self, source_id: str) -> KnowledgeSource:
        sources, _ = self._load()
        if source_id not in sources:
            raise UnknownSource(f"no such knowledge source: {source_id}")
        return sources[source_id]

    def list_sources(
        self, kind: str | None = None, flag: str | None = None
    ) -> list[KnowledgeSource]:
        sources, _ = self._load()
        out = sorted(sources.values(), key=lambda s: s.source_id)
        if kind is not None:
            out = [s for s in out if s.kind == kind]
        if flag is not None:
            if flag not in FLAGS:
                raise InvalidSource(f"unknown flag {flag!r}")
            out = [s for s in out if s.flags.get(flag, False)]
        return out

    def link(self, source_id: str, target: LinkTarget, rationale: str = "") -> TraceLink:
        with RepoLock(self.repo_dir):
            sources, links = self._load()
            if source_id not in sources:
                raise UnknownSource(f"no such knowledge source: {source_id}")
            trace = TraceLink(source_id, target, rationale)
            if trace not in links:
                links.append(trace)
            self._save(sources, links)
        return trace

    def unlink(self, source_id: str, target: LinkTarget) -> int:
        """Remove links matching (source, target); returns how many went away."""
        with RepoLock(self.repo_dir):
            sources, links = self._load()
            if source_id not in sources:
                raise UnknownSource(f"no such knowledge source: {source_id}")
            kept = [l for l in links if not (l.source_id == source_id and l.target == target)]
            removed = len(links) - len(kept)
            self._save(sources, kept)
        return removed

    def links(self) -> list[TraceLink]:
        _, links = self._load()
        return sorted(links, key=lambda l: (l.source_id, l.target.key(), l.rationale))

    def sources_for(self, target: LinkTarget) -> list[tuple[KnowledgeSource, TraceLink]]:
        """All (source, link) pairs tracing to the target, sorted by source id."""
        sources, links = self._load()
        hits = [l for l in links if l.target == target]
        hits.sort(key=lambda l: l.source_id)
        return [(sources[l.source_id], l) for l in hits]

    def links_for_cell(self, cell_id: str) -> list[tuple[KnowledgeSource, TraceLink]]:
        """Cell-targeted links matching a cell id in any notebook."""
        sources, links = self._load()
        hits = [l for l in links if l.target.type == "cell" and l.target.cell_id == cell_id]
        hits.sort(key=lambda l: (l.source_id, l.target.key()))
        return [(sources[l.source_id], l) for l in hits]
