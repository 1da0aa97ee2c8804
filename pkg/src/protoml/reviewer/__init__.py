"""Quality review: rule catalog, stakeholder personas, scoring engine."""

from .catalog import CATALOG_SCHEMA, Persona, Rule, default_catalog, load_catalog, parse_catalog
from .engine import (
    REPORT_SCHEMA,
    Finding,
    ReviewReport,
    failed_severities,
    persona_scores,
    report_to_dict,
    run_review,
)

__all__ = [
    "CATALOG_SCHEMA",
    "Finding",
    "Persona",
    "REPORT_SCHEMA",
    "ReviewReport",
    "Rule",
    "default_catalog",
    "failed_severities",
    "load_catalog",
    "parse_catalog",
    "persona_scores",
    "report_to_dict",
    "run_review",
]
