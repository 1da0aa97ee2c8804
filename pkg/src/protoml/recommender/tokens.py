"""Identifier token bags for similarity retrieval.

Tokens come from the shared lexer (attribute names included — ``df.fillna``
should count ``fillna``), language keywords are dropped, snake_case and
camelCase split into sub-tokens, everything lowercased, and single-character
leftovers discarded. String/number literals and comments never reach this
stage.
"""

from __future__ import annotations

import re
from collections import Counter

from ..dataflow.lexer import KEYWORDS, name_tokens

_CAMEL = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z0-9]*|[a-z0-9]+")


def split_identifier(identifier: str) -> list[str]:
    """Sub-tokens of one identifier: underscore and camel boundaries, lowercased."""
    parts: list[str] = []
    for chunk in identifier.split("_"):
        parts.extend(m.lower() for m in _CAMEL.findall(chunk))
    return parts


def tokenize(source: str) -> Counter[str]:
    """Token bag for one code cell: token -> positive count."""
    bag: Counter[str] = Counter()
    for tok in name_tokens(source):
        if tok.text in KEYWORDS:
            continue
        for part in split_identifier(tok.text):
            if len(part) > 1:
                bag[part] += 1
    return bag
