"""TF-IDF vector index over a notebook corpus, at cell and notebook level.

Documents are code cells. TF is raw count over cell token total; IDF is
``ln((1 + n_docs) / (1 + df)) + 1`` (fixed smoothing, so two builds of the
same corpus agree bit-for-bit). A notebook's vector is the token-count-
weighted mean of its cell vectors, renormalized to unit length.

Retrieval is an exact top-k scan over sparse dot products, accelerated by
an inverted posting list per token — comfortably interactive at the
10k-cell scale this tool targets. The index is immutable once built;
queries are read-only and thread-safe.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from ..errors import EmptyCorpus, MalformedNotebook, NoNotebooksFound, ProtomlError
from ..model import Notebook, parse_notebook
from ..util import Clock, atomic_write, canonical_json_bytes, env_clock, rfc3339
from .tokens import tokenize

INDEX_SCHEMA = "index/1"


@dataclass(frozen=True)
class Vector:
    weights: Mapping[str, float]
    norm: float


@dataclass(frozen=True)
class CellVector:
    source_ref: tuple[str, str]  # (notebook_path, cell_id)
    weights: Mapping[str, float]
    norm: float


@dataclass(frozen=True)
class Recommendation:
    target: tuple[str, str] | str
    score: float
    rank: int


@dataclass
class VectorIndex:
    cell_vectors: list[CellVector]
    notebook_vectors: dict[str, Vector]
    df: dict[str, int]
    n_docs: int
    built_at: str
    _postings: dict[str, list[tuple[int, float]]] = field(default=None, repr=False, compare=False)

    def idf(self, token: str) -> float:
        return math.log((1 + self.n_docs) / (1 + self.df.get(token, 0))) + 1.0

    @property
    def postings(self) -> dict[str, list[tuple[int, float]]]:
        if self._postings is None:
            postings: dict[str, list[tuple[int, float]]] = {}
            for idx, vec in enumerate(self.cell_vectors):
                for token, weight in vec.weights.items():
                    postings.setdefault(token, []).append((idx, weight))
            self._postings = postings
        return self._postings


def _cell_vector(bag: Counter, idf: Mapping[str, float] | None, index: VectorIndex | None) -> tuple[dict[str, float], float]:
    total = sum(bag.values())
    if total == 0:
        return {}, 0.0
    weights: dict[str, float] = {}
    for token, count in bag.items():
        token_idf = idf[token] if idf is not None else index.idf(token)
        weights[token] = (count / total) * token_idf
    norm = math.sqrt(sum(w * w for w in weights.values()))
    return weights, norm


def _aggregate(cell_bags: list[Counter], idf: Mapping[str, float]) -> Vector:
    """Token-count-weighted mean of cell vectors, renormalized to unit norm."""
    acc: dict[str, float] = {}
    total_weight = 0.0
    for bag in cell_bags:
        total = sum(bag.values())
        if total == 0:
            continue
        total_weight += total
        for token, count in bag.items():
            acc[token] = acc.get(token, 0.0) + count * idf[token]  # total * TF * idf
    if not acc or total_weight == 0.0:
        return Vector({}, 0.0)
    mean = {t: v / total_weight for t, v in acc.items()}
    norm = math.sqrt(sum(w * w for w in mean.values()))
    if norm == 0.0:
        return Vector({}, 0.0)
    return Vector({t: w / norm for t, w in mean.items()}, 1.0)


def build_index(corpus: Iterable[tuple[str, Notebook]], clock: Clock = env_clock) -> VectorIndex:
    """Index a corpus of (path, notebook) pairs. Deterministic: the corpus is
    sorted by path before anything else happens."""
    items = sorted(corpus, key=lambda pair: pair[0])
    if not items:
        raise EmptyCorpus("cannot build an index over an empty corpus")

    docs: list[tuple[str, str, Counter]] = []  # (path, cell_id, bag)
    per_notebook: dict[str, list[Counter]] = {}
    for path, nb in items:
        bags = per_notebook.setdefault(path, [])
        for _, cell in nb.code_cells():
            bag = tokenize(cell.source)
            docs.append((path, cell.cell_id, bag))
            bags.append(bag)

    n_docs = len(docs)
    df: dict[str, int] = {}
    for _, _, bag in docs:
        for token in bag:
            df[token] = df.get(token, 0) + 1

    idf = {token: math.log((1 + n_docs) / (1 + count)) + 1.0 for token, count in df.items()}

    cell_vectors = []
    for path, cell_id, bag in docs:
        weights, norm = _cell_vector(bag, idf, None)
        cell_vectors.append(CellVector((path, cell_id), weights, norm))

    notebook_vectors = {path: _aggregate(bags, idf) for path, bags in per_notebook.items()}
    return VectorIndex(cell_vectors, notebook_vectors, df, n_docs, rfc3339(clock()))


def query_vector(index: VectorIndex, source: str) -> tuple[dict[str, float], float]:
    """Vector for ad-hoc query text, using the index IDF (unseen tokens get
    the df=0 smoothing value)."""
    return _cell_vector(tokenize(source), None, index)


def _ranked(scored: list[tuple[float, tuple[str, str] | str]], k: int) -> list[Recommendation]:
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [Recommendation(target, score, rank) for rank, (score, target) in enumerate(scored[:k], start=1)]


def recommend_cells(index: VectorIndex, query_source: str, k: int = 5) -> list[Recommendation]:
    """Top-k indexed cells by cosine similarity to the query text."""
    weights, qnorm = query_vector(index, query_source)
    if qnorm == 0.0:
        return []
    dots: dict[int, float] = {}
    postings = index.postings
    for token, qw in weights.items():
        for cell_idx, cw in postings.get(token, ()):
            dots[cell_idx] = dots.get(cell_idx, 0.0) + qw * cw
    scored = []
    for cell_idx, dot in dots.items():
        vec = index.cell_vectors[cell_idx]
        if vec.norm == 0.0:
            continue
        score = dot / (qnorm * vec.norm)
        if score > 0.0:
            scored.append((score, vec.source_ref))
    return _ranked(scored, k)


def notebook_query_vector(index: VectorIndex, nb: Notebook) -> Vector:
    idf = {token: index.idf(token) for _, cell in nb.code_cells() for token in tokenize(cell.source)}
    return _aggregate([tokenize(cell.source) for _, cell in nb.code_cells()], idf)


def recommend_notebooks(
    index: VectorIndex,
    query_nb: Notebook,
    k: int = 5,
    exclude_self: bool = False,
    query_path: str | None = None,
) -> list[Recommendation]:
    """Top-k indexed notebooks similar to the query notebook."""
    query = notebook_query_vector(index, query_nb)
    if query.norm == 0.0:
        return []
    scored = []
    for path, vec in index.notebook_vectors.items():
        if exclude_self and query_path is not None and path == query_path:
            continue
        if vec.norm == 0.0:
            continue
        dot = sum(w * vec.weights.get(t, 0.0) for t, w in query.weights.items())
        score = dot / (query.norm * vec.norm)
        if score > 0.0:
            scored.append((score, path))
    return _ranked(scored, k)


def recommendations_to_dict(recs: list[Recommendation]) -> dict:
    """``recommendations/1`` document, shared by CLI and service."""
    return {
        "schema": "recommendations/1",
        "items": [
            {
                "rank": r.rank,
                "score": r.score,
                "target": list(r.target) if isinstance(r.target, tuple) else r.target,
            }
            for r in recs
        ],
    }


# --- persistence -------------------------------------------------------------


def index_to_dict(index: VectorIndex) -> dict:
    return {
        "schema": INDEX_SCHEMA,
        "built_at": index.built_at,
        "n_docs": index.n_docs,
        "df": index.df,
        "cells": [
            {
                "path": vec.source_ref[0],
                "cell_id": vec.source_ref[1],
                "weights": dict(vec.weights),
                "norm": vec.norm,
            }
            for vec in index.cell_vectors
        ],
        "notebooks": {
            path: {"weights": dict(vec.weights), "norm": vec.norm}
            for path, vec in index.notebook_vectors.items()
        },
    }


def index_from_dict(doc: dict) -> VectorIndex:
    if not isinstance(doc, dict) or doc.get("schema") != INDEX_SCHEMA:
        raise MalformedNotebook(f"not an {INDEX_SCHEMA} document")
    return VectorIndex(
        cell_vectors=[
            CellVector((c["path"], c["cell_id"]), c["weights"], c["norm"]) for c in doc["cells"]
        ],
        notebook_vectors={
            path: Vector(v["weights"], v["norm"]) for path, v in doc["notebooks"].items()
        },
        df=dict(doc["df"]),
        n_docs=doc["n_docs"],
        built_at=doc["built_at"],
    )


def save_index(index: VectorIndex, path: str | Path) -> None:
    atomic_write(path, canonical_json_bytes(index_to_dict(index)))


def load_index(path: str | Path) -> VectorIndex:
    return index_from_dict(json.loads(Path(path).read_text("utf-8")))


# --- corpus ingestion ---------------------------------------------------------


@dataclass(frozen=True)
class IngestResult:
    index: VectorIndex
    notebook_count: int
    skipped: tuple[str, ...]  # unparseable files, as relative paths


def ingest_corpus(
    root_dir: str | Path,
    index_path: str | Path | None = None,
    clock: Clock = env_clock,
) -> IngestResult:
    """Discover ``*.ipynb`` under a directory, index the parseable ones.

    Paths are stored relative to the root (POSIX separators) so the same
    corpus indexes identically anywhere.
    """
    root = Path(root_dir)
    if not root.is_dir():
        raise NoNotebooksFound(f"not a directory: {root}")
    files = sorted(root.rglob("*.ipynb"))
    corpus: list[tuple[str, Notebook]] = []
    skipped: list[str] = []
    for file in files:
        rel = file.relative_to(root).as_posix()
        try:
            corpus.append((rel, parse_notebook(file.read_bytes())))
        except (ProtomlError, OSError):
            skipped.append(rel)
    if not corpus:
        raise NoNotebooksFound(f"no parseable notebooks under {root}")
    index = build_index(corpus, clock=clock)
    if index_path is not None:
        save_index(index, index_path)
    return IngestResult(index, len(corpus), tuple(skipped))
