"""Heuristic def/use extraction for code cells.

Statement-level pattern rules over the lexer's token stream: assignments
(`=` at depth 0 outside comparisons), augmented assignments, `for X in`,
`with ... as X`, `import` / `from ... import`, `def` / `class`, walrus
targets. Reads are identifier tokens consumed before the name is (re)bound
within the cell, minus keywords and the shipped builtin exclusion list.

Known approximations, by design (no grammar, no scoping):

* names bound inside function/class bodies leak into the cell's defs
  (parameters on the header line are shadowed, deeper lines are not);
* `global` / `nonlocal` statements are ignored;
* star imports bind nothing;
* f-string interpolations are invisible (treated as string content);
* attribute/subscript mutation (`a.b = ...`, `d[k] = ...`) reads the base
  name but does not count as a definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .lexer import AUGMENTED_OPS, KEYWORDS, Token, split_statements

IDENTIFIER_KIND = "name"

_COMPOUND_HEADS = frozenset({"if", "elif", "else", "while", "try", "finally"})


def _load_excluded() -> frozenset[str]:
    text = resources.files("protoml.dataflow").joinpath("data/builtins.txt").read_text("utf-8")
    names = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            names.add(line)
    return frozenset(names)


EXCLUDED_NAMES = _load_excluded()


@dataclass(frozen=True)
class SymbolSet:
    """Names a cell binds (defs) and reads before (re)binding them (uses)."""

    defs: frozenset[str]
    uses: frozenset[str]


@dataclass(frozen=True)
class CellSymbols:
    """SymbolSet plus the extras other modules need.

    ``internal_reads``: names read after their own cell defined them
    (dead-variable rule). ``rebound``: names both read and bound by the same
    statement (``x += 1`` and ``x = x + 1`` alike) — the only names allowed
    in defs ∩ uses.
    """

    defs: frozenset[str]
    uses: frozenset[str]
    internal_reads: frozenset[str]
    rebound: frozenset[str]

    @property
    def symbol_set(self) -> SymbolSet:
        return SymbolSet(self.defs, self.uses)


def extract_symbols(source: str) -> SymbolSet:
    """Def/use sets for one code cell. Never raises on odd input."""
    return analyze_cell(source).symbol_set


def _statement_shadows(tokens: list[Token]) -> set[str]:
    """Comprehension targets and lambda params: local to the statement."""
    shadows: set[str] = set()
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.is_name and tok.text == "for" and tok.depth > 0:
            j = i + 1
            while j < len(tokens) and not (
                tokens[j].is_name and tokens[j].text == "in" and tokens[j].depth == tok.depth
            ):
                if tokens[j].is_name and not tokens[j].after_dot and tokens[j].text not in KEYWORDS:
                    shadows.add(tokens[j].text)
                j += 1
            i = j
        elif tok.is_name and tok.text == "lambda":
            j = i + 1
            while j < len(tokens) and not (
                tokens[j].kind == "op" and tokens[j].text == ":" and tokens[j].depth == tok.depth
            ):
                if tokens[j].is_name and not tokens[j].after_dot and tokens[j].text not in KEYWORDS:
                    shadows.add(tokens[j].text)
                j += 1
            i = j
        i += 1
    return shadows


def _collect_reads(tokens: list[Token], shadows: set[str]) -> set[str]:
    reads: set[str] = set()
    for idx, tok in enumerate(tokens):
        if not tok.is_name or tok.after_dot:
            continue
        if tok.text in KEYWORDS or tok.text in shadows:
            continue
        nxt = tokens[idx + 1] if idx + 1 < len(tokens) else None
        if nxt is not None and nxt.kind == "op":
            if nxt.text == "=" and tok.depth > 0:
                continue  # keyword argument / parameter default name
            if nxt.text == ":=":
                continue  # walrus target, collected as a bind
        reads.add(tok.text)
    return reads


def _walrus_binds(tokens: list[Token]) -> set[str]:
    binds = set()
    for idx, tok in enumerate(tokens[:-1]):
        nxt = tokens[idx + 1]
        if tok.is_name and not tok.after_dot and nxt.kind == "op" and nxt.text == ":=":
            binds.add(tok.text)
    return binds


def _classify_targets(tokens: list[Token]) -> tuple[set[str], set[str]]:
    """Split assignment-target tokens into (bound names, read names).

    Bare names bind; bases of attribute/subscript targets and anything inside
    a subscript only read. Grouping parens/brackets recurse (tuple unpack).
    """
    targets: set[str] = set()
    reads: set[str] = set()
    region: list[bool] = []  # True = subscript/call region (reads only)
    prev: Token | None = None
    for idx, tok in enumerate(tokens):
        if tok.kind == "op":
            if tok.text in ("(", "["):
                subscript = prev is not None and (
                    prev.is_name or (prev.kind == "op" and prev.text in (")", "]"))
                )
                region.append(subscript or bool(region and region[-1]))
            elif tok.text in (")", "]"):
                if region:
                    region.pop()
            prev = tok
            continue
        prev = tok
        if tok.after_dot or tok.text in KEYWORDS:
            continue
        nxt = tokens[idx + 1] if idx + 1 < len(tokens) else None
        if region and region[-1]:
            reads.add(tok.text)
        elif nxt is not None and nxt.kind == "op" and nxt.text in (".", "[", "("):
            reads.add(tok.text)
        else:
            targets.add(tok.text)
    return targets, reads


def _split_on(tokens: list[Token], text: str, depth: int = 0) -> list[int]:
    return [
        i
        for i, tok in enumerate(tokens)
        if tok.kind == "op" and tok.text == text and tok.depth == depth
    ]


def _find_name(tokens: list[Token], text: str, depth: int = 0, start: int = 0) -> int:
    for i in range(start, len(tokens)):
        tok = tokens[i]
        if tok.is_name and tok.text == text and tok.depth == depth:
            return i
    return -1


class _CellScan:
    def __init__(self) -> None:
        self.defined: set[str] = set()
        self.defs: set[str] = set()
        self.uses: set[str] = set()
        self.internal: set[str] = set()
        self.rebound: set[str] = set()
        # (header indent, param names) for def headers whose block is open;
        # params are invisible at cell level while inside the block
        self.frames: list[tuple[int, frozenset[str]]] = []
        self.block_shadows: set[str] = set()
        self.cur_indent = 0

    def statement(self, indent: int, tokens: list[Token]) -> None:
        while self.frames and indent <= self.frames[-1][0]:
            self.frames.pop()
        self.block_shadows = set().union(*(params for _, params in self.frames)) if self.frames else set()
        self.cur_indent = indent
        self._dispatch(tokens)

    def apply(self, reads: set[str], binds: set[str], bind_first: bool) -> None:
        reads = reads - self.block_shadows
        binds = binds - self.block_shadows
        if bind_first:
            self._bind(binds)
            self._read(reads)
        else:
            self._read(reads)
            self._bind(binds)

    def _read(self, reads: set[str]) -> None:
        for name in reads:
            if name in self.defined:
                self.internal.add(name)
            elif name not in EXCLUDED_NAMES:
                self.uses.add(name)

    def _bind(self, binds: set[str]) -> None:
        # a name already in uses when bound was read-before-(re)definition:
        # the only way a name may legally sit in both defs and uses
        self.rebound |= binds & self.uses
        self.defined |= binds
        self.defs |= binds

    # --- statement handlers -------------------------------------------------

    def _dispatch(self, tokens: list[Token]) -> None:
        if not tokens:
            return
        first = tokens[0]
        if first.is_name and first.text == "async" and len(tokens) > 1:
            tokens = tokens[1:]
            first = tokens[0]
        if not first.is_name:
            self.simple(tokens)
            return
        head = first.text
        if head in ("global", "nonlocal"):
            return
        if head == "import":
            self.apply(set(), self._import_binds(tokens[1:]), bind_first=True)
            return
        if head == "from":
            self.from_import(tokens)
            return
        if head in ("def", "class"):
            self.definition(tokens)
            return
        if head == "for":
            self.for_statement(tokens)
            return
        if head in ("with", "except"):
            self.as_statement(tokens)
            return
        if head in _COMPOUND_HEADS:
            colons = _split_on(tokens, ":")
            if colons:
                shadows = _statement_shadows(tokens)
                self.apply(_collect_reads(tokens[1 : colons[0]], shadows), _walrus_binds(tokens[1 : colons[0]]), False)
                self._dispatch(tokens[colons[0] + 1 :])
            else:
                self.simple(tokens[1:])
            return
        self.simple(tokens)

    @staticmethod
    def _import_binds(tokens: list[Token]) -> set[str]:
        binds: set[str] = set()
        tentative: str | None = None  # first dotted component, replaced by an alias
        expect_alias = False
        for tok in tokens:
            if tok.kind == "op" and tok.text == ",":
                if tentative is not None:
                    binds.add(tentative)
                tentative, expect_alias = None, False
                continue
            if tok.is_name and tok.text == "as":
                expect_alias = True
                continue
            if tok.is_name:
                if expect_alias:
                    binds.add(tok.text)
                    tentative, expect_alias = None, False
                elif tentative is None:
                    tentative = tok.text
        if tentative is not None:
            binds.add(tentative)
        return binds

    def from_import(self, tokens: list[Token]) -> None:
        import_at = _find_name(tokens, "import")
        if import_at < 0:
            return
        binds: set[str] = set()
        current: str | None = None
        aliased = False
        for tok in tokens[import_at + 1 :]:
            if tok.kind == "op" and tok.text == ",":
                if current is not None:
                    binds.add(current)
                current, aliased = None, False
                continue
            if tok.is_name and tok.text == "as":
                aliased = True
                continue
            if tok.is_name:
                if aliased or current is None:
                    current = tok.text
        if current is not None:
            binds.add(current)
        self.apply(set(), binds, bind_first=True)

    def definition(self, tokens: list[Token]) -> None:
        kind = tokens[0].text
        if len(tokens) < 2 or not tokens[1].is_name:
            self.simple(tokens[1:])
            return
        name = tokens[1].text
        shadows = _statement_shadows(tokens)
        params: set[str] = set()
        reads: set[str] = set()
        body_start = len(tokens)
        # parenthesized header region: params for def, bases for class
        if len(tokens) > 2 and tokens[2].kind == "op" and tokens[2].text == "(":
            close = 3
            while close < len(tokens) and not (
                tokens[close].kind == "op" and tokens[close].text == ")" and tokens[close].depth == 0
            ):
                close += 1
            inner = tokens[3:close]
            if kind == "def":
                group_lead = True
                value_pos = False
                for idx, tok in enumerate(inner):
                    if tok.kind == "op":
                        if tok.text == "," and tok.depth == 1:
                            group_lead, value_pos = True, False
                        elif tok.text in ("=", ":") and tok.depth == 1:
                            value_pos = True
                        continue
                    if not tok.is_name or tok.after_dot or tok.text in KEYWORDS:
                        continue
                    if group_lead and not value_pos:
                        params.add(tok.text)
                        group_lead = False
                    elif value_pos:
                        if tok.text not in shadows:
                            reads.add(tok.text)
            else:
                reads |= _collect_reads(inner, shadows)
            body_start = close + 1
        else:
            colons = _split_on(tokens, ":")
            body_start = colons[0] if colons else len(tokens)
        tail = tokens[body_start:]
        reads |= _collect_reads(tail, shadows | params | {name})
        self.apply(reads, {name}, bind_first=True)
        if kind == "def" and params:
            self.frames.append((self.cur_indent, frozenset(params)))

    def for_statement(self, tokens: list[Token]) -> None:
        in_at = _find_name(tokens, "in", start=1)
        if in_at < 0:
            self.simple(tokens[1:])
            return
        binds = set()
        for idx in range(1, in_at):
            tok = tokens[idx]
            if not tok.is_name or tok.after_dot or tok.text in KEYWORDS:
                continue
            nxt = tokens[idx + 1] if idx + 1 < len(tokens) else None
            if nxt is not None and nxt.kind == "op" and nxt.text in (".", "[", "("):
                continue
            binds.add(tok.text)
        shadows = _statement_shadows(tokens[in_at:])
        reads = _collect_reads(tokens[in_at + 1 :], shadows | binds)
        self.apply(reads, binds | _walrus_binds(tokens), bind_first=True)

    def as_statement(self, tokens: list[Token]) -> None:
        binds: set[str] = set()
        read_tokens: list[Token] = []
        i = 1
        while i < len(tokens):
            tok = tokens[i]
            if tok.is_name and tok.text == "as" and tok.depth == 0:
                i += 1
                while i < len(tokens):
                    nxt = tokens[i]
                    if nxt.kind == "op" and nxt.text in (",", ":") and nxt.depth == 0:
                        break
                    if nxt.is_name and not nxt.after_dot and nxt.text not in KEYWORDS:
                        binds.add(nxt.text)
                    i += 1
                continue
            if tok.kind == "op" and tok.text == ":" and tok.depth == 0:
                shadows = _statement_shadows(tokens)
                reads = _collect_reads(read_tokens, shadows | binds)
                self.apply(reads, binds | _walrus_binds(read_tokens), bind_first=True)
                self._dispatch(tokens[i + 1 :])
                return
            read_tokens.append(tok)
            i += 1
        shadows = _statement_shadows(tokens)
        self.apply(_collect_reads(read_tokens, shadows | binds), binds | _walrus_binds(read_tokens), bind_first=True)

    def simple(self, tokens: list[Token]) -> None:
        if not tokens:
            return
        shadows = _statement_shadows(tokens)
        aug_at = next(
            (i for i, t in enumerate(tokens) if t.kind == "op" and t.text in AUGMENTED_OPS and t.depth == 0),
            None,
        )
        if aug_at is not None:
            targets, base_reads = _classify_targets(tokens[:aug_at])
            rhs_reads = _collect_reads(tokens[aug_at + 1 :], shadows)
            self.apply(targets | base_reads | rhs_reads, targets | _walrus_binds(tokens), bind_first=False)
            return
        eq_positions = _split_on(tokens, "=")
        if eq_positions:
            reads: set[str] = set()
            targets: set[str] = set()
            start = 0
            for pos in eq_positions:
                segment = tokens[start:pos]
                colon = _split_on(segment, ":")
                if colon:
                    seg_targets, seg_reads = _classify_targets(segment[: colon[0]])
                    seg_reads |= _collect_reads(segment[colon[0] + 1 :], shadows)
                else:
                    seg_targets, seg_reads = _classify_targets(segment)
                targets |= seg_targets
                reads |= seg_reads
                start = pos + 1
            reads |= _collect_reads(tokens[start:], shadows)
            self.apply(reads, targets | _walrus_binds(tokens), bind_first=False)
            return
        colon = _split_on(tokens, ":")
        if colon and tokens[0].is_name and tokens[0].text not in KEYWORDS and colon[0] == 1:
            # annotation-only declaration: `x: SomeType`
            self.apply(_collect_reads(tokens[colon[0] + 1 :], shadows), set(), bind_first=False)
            return
        self.apply(_collect_reads(tokens, shadows), _walrus_binds(tokens), bind_first=False)


def analyze_cell(source: str) -> CellSymbols:
    """Full per-cell symbol analysis; ``extract_symbols`` is the public slice."""
    scan = _CellScan()
    for stmt in split_statements(source):
        scan.statement(stmt.indent, list(stmt.tokens))
    return CellSymbols(
        frozenset(scan.defs),
        frozenset(scan.uses),
        frozenset(scan.internal),
        frozenset(scan.rebound),
    )
