"""Rule engine: evaluate a notebook against the catalog, score per persona.

One finding per catalog rule, findings in catalog order, everything
deterministic. A persona's score is the weighted fraction of passed rules,
as a percentage rounded half-up to one decimal — exact rational arithmetic
until the final rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Callable, Mapping

from ..dataflow.activity import classify_activity
from ..dataflow.graph import DependencyGraph, analyze_notebook, build_dependency_graph
from ..dataflow.lexer import name_tokens, split_statements
from ..dataflow.symbols import CellSymbols
from ..errors import InvalidCatalog
from ..model import Notebook, canonical_hash
from .catalog import Persona, Rule, default_catalog

REPORT_SCHEMA = "report/1"


@dataclass(frozen=True)
class Finding:
    rule_id: str
    passed: bool
    locations: tuple[str, ...]
    message: str


@dataclass(frozen=True)
class ReviewReport:
    findings: tuple[Finding, ...]
    persona_scores: dict[str, float]
    notebook_hash: str


@dataclass(frozen=True)
class ReviewContext:
    """Everything the rules may look at, computed once per review."""

    nb: Notebook
    symbols: Mapping[str, CellSymbols]
    graph: DependencyGraph
    categories: Mapping[str, str]  # cell_id -> activity category


RuleCheck = Callable[[ReviewContext, Mapping], tuple[bool, list[str], str]]


def _check_desc(ctx: ReviewContext, params: Mapping) -> tuple[bool, list[str], str]:
    min_words = int(params.get("min_words", 10))
    if not ctx.nb.cells:
        return False, [], "notebook is empty; no leading description"
    first = ctx.nb.cells[0]
    words = len(first.source.split())
    if first.kind == "markdown" and words >= min_words:
        return True, [], f"first cell is markdown with {words} words"
    if first.kind != "markdown":
        return False, [first.cell_id], "first cell is not markdown"
    return False, [first.cell_id], f"leading markdown has {words} words (needs {min_words})"


def _check_order(ctx: ReviewContext, params: Mapping) -> tuple[bool, list[str], str]:
    bad: list[str] = []
    previous: int | None = None
    for _, cell in ctx.nb.code_cells():
        count = cell.execution_count
        if count is None:
            continue
        if previous is not None and count <= previous:
            bad.append(cell.cell_id)
        previous = count
    if bad:
        return False, bad, "execution counts break strict notebook-order increase"
    return True, [], "execution counts strictly increase"


def _check_empty(ctx: ReviewContext, params: Mapping) -> tuple[bool, list[str], str]:
    bad = [cell.cell_id for _, cell in ctx.nb.code_cells() if not cell.source.strip()]
    if bad:
        return False, bad, f"{len(bad)} blank code cell(s)"
    return True, [], "no blank code cells"


def _has_import(source: str) -> bool:
    return any(
        stmt.tokens[0].is_name and stmt.tokens[0].text in ("import", "from")
        for stmt in split_statements(source)
    )


def _check_imports(ctx: ReviewContext, params: Mapping) -> tuple[bool, list[str], str]:
    first_modeling = None
    for index, cell in ctx.nb.code_cells():
        if ctx.categories[cell.cell_id] == "Modeling":
            first_modeling = index
            break
    if first_modeling is None:
        return True, [], "no modeling cell; import placement unconstrained"
    bad = [
        cell.cell_id
        for index, cell in ctx.nb.code_cells()
        if index >= first_modeling and _has_import(cell.source)
    ]
    if bad:
        return False, bad, "imports appear at or after the first modeling cell"
    return True, [], "all imports precede modeling"


def _check_length(ctx: ReviewContext, params: Mapping) -> tuple[bool, list[str], str]:
    max_lines = int(params.get("max_lines", 50))
    bad = [
        cell.cell_id
        for _, cell in ctx.nb.code_cells()
        if len(cell.source.splitlines()) > max_lines
    ]
    if bad:
        return False, bad, f"{len(bad)} cell(s) exceed {max_lines} lines"
    return True, [], f"all code cells within {max_lines} lines"


def _token_list(params: Mapping, key: str, default: str) -> list[str]:
    return [t.strip() for t in str(params.get(key, default)).split(",") if t.strip()]


def _check_seed(ctx: ReviewContext, params: Mapping) -> tuple[bool, list[str], str]:
    randomness = set(_token_list(params, "randomness_tokens", "random,seed,shuffle,sample"))
    seed_specs = _token_list(params, "seed_tokens", "seed(,random_state")
    random_cells: list[str] = []
    seeded = False
    for _, cell in ctx.nb.code_cells():
        tokens = name_tokens(cell.source)
        if any(t.text in randomness for t in tokens):
            random_cells.append(cell.cell_id)
        for spec in seed_specs:
            want_call = spec.endswith("(")
            name = spec.rstrip("(")
            if any(t.text == name and (t.calls or not want_call) for t in tokens):
                seeded = True
    if not random_cells:
        return True, [], "no randomness tokens present"
    if seeded:
        return True, [], "randomness present and seeded"
    return False, random_cells, "randomness used without a seed-setting call"


def _check_deadvar(ctx: ReviewContext, params: Mapping) -> tuple[bool, list[str], str]:
    consumed: dict[str, set[str]] = {}
    for edge in ctx.graph.edges:
        consumed.setdefault(edge.producer, set()).add(edge.symbol)
    bad: list[str] = []
    details: list[str] = []
    for _, cell in ctx.nb.code_cells():
        sym = ctx.symbols[cell.cell_id]
        dead = {
            name
            for name in sym.defs
            if name not in consumed.get(cell.cell_id, set())
            and name not in sym.internal_reads
            and set(name) != {"_"}
        }
        if dead:
            bad.append(cell.cell_id)
            details.append(f"{cell.cell_id}: {', '.join(sorted(dead))}")
    if bad:
        return False, bad, "unused definitions — " + "; ".join(details)
    return True, [], "every defined symbol is consumed"


def _check_untitled(ctx: ReviewContext, params: Mapping) -> tuple[bool, list[str], str]:
    per = int(params.get("cells_per_heading", 10))
    n_code = len(ctx.nb.code_cells())
    n_md = sum(1 for c in ctx.nb.cells if c.kind == "markdown")
    needed = math.ceil(n_code / per) if n_code else 0
    if n_md >= needed:
        return True, [], f"{n_md} markdown cell(s) for {n_code} code cell(s)"
    return False, [], f"needs >= {needed} markdown cell(s) for {n_code} code cell(s), found {n_md}"


RULE_CHECKS: dict[str, RuleCheck] = {
    "R-DESC": _check_desc,
    "R-ORDER": _check_order,
    "R-EMPTY": _check_empty,
    "R-IMPORTS": _check_imports,
    "R-LENGTH": _check_length,
    "R-SEED": _check_seed,
    "R-DEADVAR": _check_deadvar,
    "R-UNTITLED": _check_untitled,
}


def persona_scores(
    passed: Mapping[str, bool], personas: list[Persona]
) -> dict[str, float]:
    """Weighted pass percentage per persona, rounded half-up to one decimal."""
    scores: dict[str, float] = {}
    for persona in personas:
        total = sum(persona.weights.values(), Fraction(0))
        got = sum(
            (w for rule_id, w in persona.weights.items() if passed.get(rule_id, False)),
            Fraction(0),
        )
        ratio = Fraction(100) * got / total
        value = Decimal(ratio.numerator) / Decimal(ratio.denominator)
        scores[persona.persona_id] = float(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))
    return scores


def _validate(catalog: list[Rule], personas: list[Persona]) -> None:
    ids = [r.rule_id for r in catalog]
    if not ids:
        raise InvalidCatalog("catalog: must contain at least one rule")
    if len(set(ids)) != len(ids):
        raise InvalidCatalog("catalog: duplicate rule ids")
    known = set(ids)
    for rule_id in ids:
        if rule_id not in RULE_CHECKS:
            raise InvalidCatalog(f"catalog: no implementation for rule {rule_id!r}")
    for persona in personas:
        unknown = sorted(set(persona.weights) - known)
        if unknown:
            raise InvalidCatalog(
                f"persona {persona.persona_id!r}: weights reference unknown rule {unknown[0]!r}"
            )


def run_review(
    nb: Notebook,
    catalog: list[Rule] | None = None,
    personas: list[Persona] | None = None,
    graph: DependencyGraph | None = None,
) -> ReviewReport:
    """Evaluate every catalog rule; one finding per rule, in catalog order."""
    if catalog is None or personas is None:
        default_rules, default_personas = default_catalog()
        catalog = catalog if catalog is not None else default_rules
        personas = personas if personas is not None else default_personas
    _validate(catalog, personas)

    symbols = analyze_notebook(nb)
    graph = graph if graph is not None else build_dependency_graph(nb, symbols)
    categories = {
        cell.cell_id: classify_activity(cell, symbols[cell.cell_id])[0]
        for _, cell in nb.code_cells()
    }
    ctx = ReviewContext(nb, symbols, graph, categories)

    findings: list[Finding] = []
    for rule in catalog:
        passed, locations, message = RULE_CHECKS[rule.rule_id](ctx, rule.parameters)
        findings.append(Finding(rule.rule_id, passed, tuple(locations), message))

    passed_map = {f.rule_id: f.passed for f in findings}
    return ReviewReport(
        tuple(findings),
        persona_scores(passed_map, personas),
        canonical_hash(nb).hex,
    )


def report_to_dict(report: ReviewReport, catalog: list[Rule] | None = None) -> dict:
    severity = {r.rule_id: r.severity for r in catalog} if catalog else {}
    return {
        "schema": REPORT_SCHEMA,
        "notebook_hash": report.notebook_hash,
        "findings": [
            {
                "rule_id": f.rule_id,
                "passed": f.passed,
                "severity": severity.get(f.rule_id),
                "locations": list(f.locations),
                "message": f.message,
            }
            for f in report.findings
        ],
        "persona_scores": dict(sorted(report.persona_scores.items())),
    }


def failed_severities(report: ReviewReport, catalog: list[Rule]) -> set[str]:
    severity = {r.rule_id: r.severity for r in catalog}
    return {severity[f.rule_id] for f in report.findings if not f.passed}
