"""Parsed in-memory notebook model: parse, canonicalize, hash, serialize.

Every other part of the toolkit consumes this model. Only the fields needed
for analysis are modeled: cell identity, kind, source, execution counts, and
digests of outputs/metadata. Outputs themselves are digested, never stored,
so snapshots stay small while diffs remain honest about "outputs changed".

The canonical serialization (``to_canonical_json``) is the byte-exact format
used for hashing and for the snapshot store:

* one JSON object, keys sorted lexicographically, no insignificant
  whitespace, UTF-8, no trailing newline;
* cells serialized as ``[cell_id, kind, source, execution_count,
  outputs_digest]`` arrays (``null`` for absent values);
* top-level keys: ``cells``, ``format_version``, ``metadata_digest``,
  ``schema`` (fixed ``"notebook/1"``).

``write_ipynb`` exports back to a standard ``.ipynb`` for human use; that
export is lossy on outputs and metadata (only their digests are modeled).
Round-trip guarantees hold for the canonical form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any

from .errors import MalformedNotebook, UnsupportedVersion
from .util import HEX64_RE, canonical_json, canonical_json_bytes, hash_json, sha256_hex

CELL_KINDS = ("code", "markdown", "raw")

NOTEBOOK_SCHEMA = "notebook/1"


@dataclass(frozen=True)
class ContentHash:
    """SHA-256 digest, lowercase hex. The only hash the toolkit uses."""

    hex: str
    algorithm = "sha-256"

    def __post_init__(self) -> None:
        if not HEX64_RE.match(self.hex):
            raise ValueError(f"not a 64-char lowercase hex digest: {self.hex!r}")

    def __str__(self) -> str:
        return self.hex

    @property
    def short(self) -> str:
        return self.hex[:8]


@dataclass(frozen=True)
class Cell:
    """One notebook cell. Immutable; safe to share across threads."""

    cell_id: str
    kind: str
    source: str
    execution_count: int | None = None
    outputs_digest: str | None = None

    def __post_init__(self) -> None:
        if not self.cell_id:
            raise ValueError("cell_id must be non-empty")
        if self.kind not in CELL_KINDS:
            raise ValueError(f"unknown cell kind: {self.kind!r}")
        if self.kind != "code" and self.execution_count is not None:
            raise ValueError(f"{self.kind} cell cannot carry an execution_count")
        if self.execution_count is not None and self.execution_count < 0:
            raise ValueError("execution_count must be non-negative")


@dataclass(frozen=True)
class Notebook:
    """Ordered cells plus format version and a digest of notebook metadata."""

    cells: tuple[Cell, ...]
    format_version: tuple[int, int] = (4, 5)
    metadata_digest: str = field(default_factory=lambda: hash_json({}))

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "format_version", tuple(self.format_version))
        seen: set[str] = set()
        for cell in self.cells:
            if cell.cell_id in seen:
                raise ValueError(f"duplicate cell_id: {cell.cell_id!r}")
            seen.add(cell.cell_id)

    def code_cells(self) -> list[tuple[int, Cell]]:
        """(index, cell) pairs for code cells, indices in full notebook order."""
        return [(i, c) for i, c in enumerate(self.cells) if c.kind == "code"]

    def cell_by_id(self, cell_id: str) -> Cell | None:
        for cell in self.cells:
            if cell.cell_id == cell_id:
                return cell
        return None


def _join_source(raw: Any) -> str:
    if isinstance(raw, str):
        text = raw
    elif isinstance(raw, list) and all(isinstance(line, str) for line in raw):
        text = "".join(raw)
    else:
        raise MalformedNotebook(f"cell source must be a string or list of strings, got {type(raw).__name__}")
    return text.replace("\r\n", "\n").replace("\r", "\n")


def _synthetic_id(index: int, source: str) -> str:
    return f"gen-{index}-{sha256_hex(source.encode('utf-8'))[:8]}"


def parse_notebook(data: bytes | str) -> Notebook:
    """Parse raw ``.ipynb`` bytes into a Notebook.

    Cells missing an ``id`` get a deterministic synthetic one derived from
    their position and source hash, so the same file bytes always yield the
    same ids.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedNotebook(f"not UTF-8 text: {exc}") from None
    else:
        text = data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedNotebook(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedNotebook("top-level value must be a JSON object")

    major = doc.get("nbformat")
    if not isinstance(major, int):
        raise MalformedNotebook("missing or non-integer 'nbformat'")
    if major != 4:
        raise UnsupportedVersion(f"notebook format major version {major} not supported (requires 4)")
    minor = doc.get("nbformat_minor", 0)
    if not isinstance(minor, int):
        raise MalformedNotebook("non-integer 'nbformat_minor'")

    raw_cells = doc.get("cells")
    if not isinstance(raw_cells, list):
        raise MalformedNotebook("missing or non-list 'cells'")

    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise MalformedNotebook("'metadata' must be an object")

    cells: list[Cell] = []
    for index, raw in enumerate(raw_cells):
        if not isinstance(raw, dict):
            raise MalformedNotebook(f"cells[{index}] is not an object")
        kind = raw.get("cell_type")
        if kind not in CELL_KINDS:
            raise MalformedNotebook(f"cells[{index}] has unknown cell_type {kind!r}")
        source = _join_source(raw.get("source", ""))

        cell_id = raw.get("id")
        if not (isinstance(cell_id, str) and cell_id):
            cell_id = _synthetic_id(index, source)

        execution_count = None
        outputs_digest = None
        if kind == "code":
            count = raw.get("execution_count")
            if count is not None:
                if not isinstance(count, int) or count < 0:
                    raise MalformedNotebook(f"cells[{index}] execution_count must be a non-negative integer")
                execution_count = count
            outputs = raw.get("outputs")
            if outputs:
                if not isinstance(outputs, list):
                    raise MalformedNotebook(f"cells[{index}] outputs must be a list")
                outputs_digest = hash_json(outputs)

        cells.append(Cell(cell_id, kind, source, execution_count, outputs_digest))

    try:
        return Notebook(tuple(cells), (major, minor), hash_json(metadata))
    except ValueError as exc:
        raise MalformedNotebook(str(exc)) from None


def canonical_obj(nb: Notebook) -> dict[str, Any]:
    """Plain-JSON structure behind the canonical serialization."""
    return {
        "schema": NOTEBOOK_SCHEMA,
        "format_version": [nb.format_version[0], nb.format_version[1]],
        "metadata_digest": nb.metadata_digest,
        "cells": [
            [c.cell_id, c.kind, c.source, c.execution_count, c.outputs_digest]
            for c in nb.cells
        ],
    }


def to_canonical_json(nb: Notebook) -> str:
    return canonical_json(canonical_obj(nb))


def from_canonical_obj(obj: Any) -> Notebook:
    if not isinstance(obj, dict) or obj.get("schema") != NOTEBOOK_SCHEMA:
        raise MalformedNotebook(f"not a {NOTEBOOK_SCHEMA} document")
    try:
        cells = tuple(
            Cell(cell_id, kind, source, execution_count, outputs_digest)
            for cell_id, kind, source, execution_count, outputs_digest in obj["cells"]
        )
        version = obj["format_version"]
        return Notebook(cells, (int(version[0]), int(version[1])), obj["metadata_digest"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedNotebook(f"invalid canonical notebook document: {exc}") from None


def from_canonical_json(text: str) -> Notebook:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedNotebook(f"not valid JSON: {exc}") from None
    return from_canonical_obj(obj)


def canonical_hash(nb: Notebook) -> ContentHash:
    """SHA-256 of the canonical serialization: identity of a notebook state."""
    return ContentHash(sha256_hex(canonical_json_bytes(canonical_obj(nb))))


def cell_fingerprint(cell: Cell, include_id: bool = True) -> str:
    """Content hash of one cell, optionally ignoring its id (diff alignment)."""
    fields: list[Any] = [cell.kind, cell.source, cell.execution_count, cell.outputs_digest]
    if include_id:
        fields.insert(0, cell.cell_id)
    return hash_json(fields)


def write_ipynb(nb: Notebook) -> bytes:
    """Export to a standard ``.ipynb``. Outputs and metadata are not modeled,
    so they come back empty; the canonical form is the lossless one."""
    cells = []
    for cell in nb.cells:
        raw: dict[str, Any] = {
            "id": cell.cell_id,
            "cell_type": cell.kind,
            "metadata": {},
            "source": cell.source.splitlines(keepends=True),
        }
        if cell.kind == "code":
            raw["execution_count"] = cell.execution_count
            raw["outputs"] = []
        cells.append(raw)
    doc = {
        "cells": cells,
        "metadata": {},
        "nbformat": nb.format_version[0],
        "nbformat_minor": nb.format_version[1],
    }
    return (json.dumps(doc, indent=1, ensure_ascii=False, sort_keys=True) + "\n").encode("utf-8")


def clone_with(nb: Notebook, **changes: Any) -> Notebook:
    return replace(nb, **changes)
