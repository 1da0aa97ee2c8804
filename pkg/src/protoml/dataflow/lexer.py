"""Lexical scanner for code cells.

Produces logical statements of tokens without parsing the full language
grammar: comments and string literals are stripped, bracket depth is
tracked, and statements split on newlines/semicolons at depth zero
(backslash continuations joined). The def/use rules, the activity
classifier, the recommender tokenizer, and the card generator all run on
this one scanner so they agree on what a token is.
"""

from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset(
    """False None True and as assert async await break class continue def del
    elif else except finally for from global if import in is lambda nonlocal
    not or pass raise return try while with yield""".split()
)

_STRING_PREFIXES = frozenset({"r", "b", "f", "u", "rb", "br", "fr", "rf"})

# longest first so the scanner never splits a compound operator
_OPERATORS = (
    "**=", "//=", ">>=", "<<=",
    "==", "!=", "<=", ">=", "->", ":=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=",
    "**", "//", ">>", "<<",
    "+", "-", "*", "/", "%", "@", "&", "|", "^", "~",
    "<", ">", "=", "(", ")", "[", "]", "{", "}", ",", ":", ".",
)

AUGMENTED_OPS = frozenset(
    op for op in _OPERATORS if op.endswith("=") and op not in ("==", "!=", "<=", ">=", ":=", "=")
)

_OPENERS = "([{"
_CLOSERS = ")]}"


@dataclass(frozen=True)
class Token:
    text: str
    kind: str  # "name" | "op"
    depth: int  # bracket nesting depth at the token
    after_dot: bool = False  # name directly preceded by "."
    calls: bool = False  # name directly followed by "("

    @property
    def is_name(self) -> bool:
        return self.kind == "name"


@dataclass(frozen=True)
class Statement:
    """One logical statement: its tokens plus the indentation of its line."""

    indent: int
    tokens: tuple[Token, ...]


def _scan_string(source: str, start: int) -> tuple[int, str]:
    """Consume a string literal starting at its quote; returns (end, body)."""
    quote = source[start]
    if source.startswith(quote * 3, start):
        closer, i = quote * 3, start + 3
    else:
        closer, i = quote, start + 1
    n = len(source)
    body_start = i
    while i < n:
        if source[i] == "\\":
            i += 2
            continue
        if source.startswith(closer, i):
            return i + len(closer), source[body_start:i]
        if closer == quote and source[i] == "\n":
            # unterminated single-quoted string: stop at the line end
            return i, source[body_start:i]
        i += 1
    return n, source[body_start:n]


def _indent_at(source: str, pos: int) -> int:
    line_start = source.rfind("\n", 0, pos) + 1
    k = line_start
    while k < len(source) and source[k] in " \t":
        k += 1
    return k - line_start


def _scan(source: str) -> tuple[list[Statement], list[str]]:
    statements: list[Statement] = []
    tokens: list[Token] = []
    literals: list[str] = []
    stmt_indent = 0
    depth = 0
    i = 0
    n = len(source)

    def push(token: Token, pos: int) -> None:
        nonlocal stmt_indent
        if not tokens:
            stmt_indent = _indent_at(source, pos)
        tokens.append(token)

    def flush() -> None:
        nonlocal tokens
        if tokens:
            statements.append(Statement(stmt_indent, tuple(tokens)))
            tokens = []

    while i < n:
        ch = source[i]
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch in "\"'":
            i, body = _scan_string(source, i)
            literals.append(body)
            continue
        if ch == "\\" and i + 1 < n and source[i + 1] == "\n":
            i += 2
            continue
        if ch == "\n":
            if depth == 0:
                flush()
            i += 1
            continue
        if ch == ";" and depth == 0:
            flush()
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            if j < n and source[j] in "\"'" and word.lower() in _STRING_PREFIXES:
                i, body = _scan_string(source, j)
                literals.append(body)
                continue
            after_dot = bool(tokens) and tokens[-1].kind == "op" and tokens[-1].text == "."
            k = j
            while k < n and source[k] in " \t":
                k += 1
            calls = k < n and source[k] == "("
            push(Token(word, "name", depth, after_dot, calls), i)
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and (source[j].isalnum() or source[j] in "._" or (source[j] in "+-" and source[j - 1] in "eE")):
                j += 1
            i = j
            continue
        matched = None
        for op in _OPERATORS:
            if source.startswith(op, i):
                matched = op
                break
        if matched is None:
            i += 1  # unrecognized character: skip, never fail
            continue
        if matched in _OPENERS:
            push(Token(matched, "op", depth), i)
            depth += 1
        elif matched in _CLOSERS:
            depth = max(0, depth - 1)
            push(Token(matched, "op", depth), i)
        else:
            push(Token(matched, "op", depth), i)
        i += len(matched)

    flush()
    return statements, literals


def split_statements(source: str) -> list[Statement]:
    """Logical statements in source order."""
    return _scan(source)[0]


def name_tokens(source: str) -> list[Token]:
    """Every identifier token in the cell, attributes included."""
    return [t for stmt in split_statements(source) for t in stmt.tokens if t.is_name]


def string_literals(source: str) -> list[str]:
    """Bodies of string literals in source order (quotes and prefixes removed)."""
    return _scan(source)[1]
