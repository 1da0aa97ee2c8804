"""Similarity retrieval over a notebook corpus (cell and notebook level)."""

from .index import (
    INDEX_SCHEMA,
    CellVector,
    IngestResult,
    Recommendation,
    Vector,
    VectorIndex,
    build_index,
    index_from_dict,
    index_to_dict,
    ingest_corpus,
    load_index,
    query_vector,
    recommend_cells,
    recommend_notebooks,
    recommendations_to_dict,
    save_index,
)
from .tokens import split_identifier, tokenize

__all__ = [
    "CellVector",
    "INDEX_SCHEMA",
    "IngestResult",
    "Recommendation",
    "Vector",
    "VectorIndex",
    "build_index",
    "index_from_dict",
    "index_to_dict",
    "ingest_corpus",
    "load_index",
    "query_vector",
    "recommend_cells",
    "recommend_notebooks",
    "recommendations_to_dict",
    "save_index",
    "split_identifier",
    "tokenize",
]
