"""Review catalog: rules, stakeholder personas, and their file format.

The shipped catalog (``data/catalog.json``, schema ``review/1``) is data,
not code: teams can extend rule parameters and persona weights without
touching the engine. Weights are parsed as exact rationals so persona
scores never drift across platforms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from ..errors import InvalidCatalog

CATALOG_SCHEMA = "review/1"

SEVERITIES = ("info", "warning", "error")


@dataclass(frozen=True)
class Rule:
    rule_id: str
    title: str
    severity: str
    parameters: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Persona:
    persona_id: str
    display_name: str
    weights: Mapping[str, Fraction]


def _fraction(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str, Fraction, float)):
        raise InvalidCatalog(f"{where}: weight must be a number, got {value!r}")
    try:
        weight = Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise InvalidCatalog(f"{where}: not a valid rational: {value!r}") from None
    if weight < 0:
        raise InvalidCatalog(f"{where}: weight must be non-negative, got {value!r}")
    return weight


def parse_catalog(doc: Any, origin: str = "catalog") -> tuple[list[Rule], list[Persona]]:
    if not isinstance(doc, dict) or doc.get("schema") != CATALOG_SCHEMA:
        raise InvalidCatalog(f"{origin}: not a {CATALOG_SCHEMA} document")

    rules: list[Rule] = []
    seen: set[str] = set()
    raw_rules = doc.get("rules")
    if not isinstance(raw_rules, list) or not raw_rules:
        raise InvalidCatalog(f"{origin}.rules: must be a non-empty list")
    for i, raw in enumerate(raw_rules):
        where = f"{origin}.rules[{i}]"
        if not isinstance(raw, dict):
            raise InvalidCatalog(f"{where}: must be an object")
        rule_id = raw.get("rule_id")
        if not isinstance(rule_id, str) or not rule_id:
            raise InvalidCatalog(f"{where}: missing rule_id")
        if rule_id in seen:
            raise InvalidCatalog(f"{where}: duplicate rule_id {rule_id!r}")
        seen.add(rule_id)
        severity = raw.get("severity", "warning")
        if severity not in SEVERITIES:
            raise InvalidCatalog(f"{where}: unknown severity {severity!r}")
        parameters = raw.get("parameters", {})
        if not isinstance(parameters, dict):
            raise InvalidCatalog(f"{where}.parameters: must be an object")
        rules.append(Rule(rule_id, raw.get("title", rule_id), severity, dict(parameters)))

    personas: list[Persona] = []
    seen_personas: set[str] = set()
    for i, raw in enumerate(doc.get("personas", [])):
        where = f"{origin}.personas[{i}]"
        if not isinstance(raw, dict):
            raise InvalidCatalog(f"{where}: must be an object")
        persona_id = raw.get("persona_id")
        if not isinstance(persona_id, str) or not persona_id:
            raise InvalidCatalog(f"{where}: missing persona_id")
        if persona_id in seen_personas:
            raise InvalidCatalog(f"{where}: duplicate persona_id {persona_id!r}")
        seen_personas.add(persona_id)
        raw_weights = raw.get("weights")
        if not isinstance(raw_weights, dict) or not raw_weights:
            raise InvalidCatalog(f"{where}.weights: must be a non-empty object")
        weights: dict[str, Fraction] = {}
        for rule_id, value in raw_weights.items():
            if rule_id not in seen:
                raise InvalidCatalog(f"{where}.weights: unknown rule {rule_id!r}")
            weights[rule_id] = _fraction(value, f"{where}.weights[{rule_id!r}]")
        if not any(weights.values()):
            raise InvalidCatalog(f"{where}: needs at least one positive weight")
        personas.append(Persona(persona_id, raw.get("display_name", persona_id), weights))

    return rules, personas


def load_catalog(path: str | Path) -> tuple[list[Rule], list[Persona]]:
    """Parse and validate a catalog file; defaults fill missing parameters."""
    path = Path(path)
    if not path.exists():
        raise InvalidCatalog(f"catalog file not found: {path}")
    try:
        doc = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidCatalog(f"{path}: not valid JSON: {exc}") from None
    return parse_catalog(doc, origin=str(path))


def default_catalog() -> tuple[list[Rule], list[Persona]]:
    """The shipped 8-rule, 4-persona catalog."""
    text = resources.files("protoml.reviewer").joinpath("data/catalog.json").read_text("utf-8")
    return parse_catalog(json.loads(text), origin="builtin catalog")
