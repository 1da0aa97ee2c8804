"""Knowledge-source catalog with suitability scoring and trace links."""

from .catalog import (
    FLAGS,
    KNOWLEDGE_SCHEMA,
    SOURCE_KINDS,
    KnowledgeCatalog,
    KnowledgeSource,
    LinkTarget,
    SuitabilityScore,
    TraceLink,
    default_weights,
    score_source,
)

__all__ = [
    "FLAGS",
    "KNOWLEDGE_SCHEMA",
    "KnowledgeCatalog",
    "KnowledgeSource",
    "LinkTarget",
    "SOURCE_KINDS",
    "SuitabilityScore",
    "TraceLink",
    "default_weights",
    "score_source",
]
