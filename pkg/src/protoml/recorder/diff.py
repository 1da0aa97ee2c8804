"""Structural notebook diffs.

Cells are aligned by cell_id where ids are shared; leftover cells align by
longest common subsequence over content fingerprints (catches renamed ids).
Entries classify as added / removed / modified / moved, and collectively
carry enough information that ``apply_diff(old, diff)`` reproduces the new
notebook's modeled fields exactly — the soundness property the tests hold
this module to.

"moved" is minimal: unchanged matched cells on a longest increasing
subsequence of new positions are stable and get no entry at all.
"""

from __future__ import annotations

import difflib
from bisect import bisect_left
from dataclasses import dataclass

from ..model import Cell, Notebook, cell_fingerprint

DIFF_SCHEMA = "diff/1"

CHANGES = ("added", "removed", "modified", "moved")


@dataclass(frozen=True)
class DiffEntry:
    change: str
    cell_id: str  # id in the old notebook (or the new id for added cells)
    old_index: int | None = None
    new_index: int | None = None
    cell: Cell | None = None  # full new cell for added/modified
    detail: tuple[str, ...] = ()  # per-line source diff for modified


@dataclass(frozen=True)
class NotebookDiff:
    entries: tuple[DiffEntry, ...]
    format_version_change: tuple[tuple[int, int], tuple[int, int]] | None = None
    metadata_digest_change: tuple[str, str] | None = None

    @property
    def is_empty(self) -> bool:
        return (
            not self.entries
            and self.format_version_change is None
            and self.metadata_digest_change is None
        )


def _lcs_pairs(a: list[str], b: list[str]) -> list[tuple[int, int]]:
    """Index pairs of a longest common subsequence of two hash lists."""
    m, n = len(a), len(b)
    if not m or not n:
        return []
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        for j in range(n - 1, -1, -1):
            if a[i] == b[j]:
                dp[i][j] = dp[i + 1][j + 1] + 1
            else:
                dp[i][j] = max(dp[i + 1][j], dp[i][j + 1])
    pairs = []
    i = j = 0
    while i < m and j < n:
        if a[i] == b[j]:
            pairs.append((i, j))
            i += 1
            j += 1
        elif dp[i + 1][j] >= dp[i][j + 1]:
            i += 1
        else:
            j += 1
    return pairs


def _stable_positions(new_positions: list[int]) -> set[int]:
    """Indices (into the input list) forming a longest increasing subsequence."""
    if not new_positions:
        return set()
    tails: list[int] = []  # values
    tail_idx: list[int] = []  # input index of each tail
    prev = [-1] * len(new_positions)
    for idx, value in enumerate(new_positions):
        pos = bisect_left(tails, value)
        if pos == len(tails):
            tails.append(value)
            tail_idx.append(idx)
        else:
            tails[pos] = value
            tail_idx[pos] = idx
        prev[idx] = tail_idx[pos - 1] if pos > 0 else -1
    stable = set()
    cursor = tail_idx[-1]
    while cursor != -1:
        stable.add(cursor)
        cursor = prev[cursor]
    return stable


def _source_diff(old: Cell, new: Cell) -> tuple[str, ...]:
    if old.source == new.source:
        return ()
    return tuple(
        difflib.unified_diff(
            old.source.splitlines(),
            new.source.splitlines(),
            fromfile=f"a/{old.cell_id}",
            tofile=f"b/{new.cell_id}",
            lineterm="",
        )
    )


def diff_notebooks(a: Notebook, b: Notebook) -> NotebookDiff:
    old, new = list(a.cells), list(b.cells)
    old_ids = {c.cell_id: i for i, c in enumerate(old)}
    new_ids = {c.cell_id: i for i, c in enumerate(new)}

    matches: list[tuple[int, int]] = [
        (i, new_ids[c.cell_id]) for i, c in enumerate(old) if c.cell_id in new_ids
    ]
    matched_old = {i for i, _ in matches}
    matched_new = {j for _, j in matches}

    rest_old = [i for i in range(len(old)) if i not in matched_old]
    rest_new = [j for j in range(len(new)) if j not in matched_new]
    lcs = _lcs_pairs(
        [cell_fingerprint(old[i], include_id=False) for i in rest_old],
        [cell_fingerprint(new[j], include_id=False) for j in rest_new],
    )
    for oi, nj in lcs:
        matches.append((rest_old[oi], rest_new[nj]))
        matched_old.add(rest_old[oi])
        matched_new.add(rest_new[nj])
    matches.sort()

    entries: list[DiffEntry] = []
    for i, c in enumerate(old):
        if i not in matched_old:
            entries.append(DiffEntry("removed", c.cell_id, old_index=i))
    for j, c in enumerate(new):
        if j not in matched_new:
            entries.append(DiffEntry("added", c.cell_id, new_index=j, cell=c))

    unchanged: list[tuple[int, int]] = []
    for i, j in matches:
        if old[i] == new[j]:
            unchanged.append((i, j))
        else:
            entries.append(
                DiffEntry(
                    "modified",
                    old[i].cell_id,
                    old_index=i,
                    new_index=j,
                    cell=new[j],
                    detail=_source_diff(old[i], new[j]),
                )
            )

    stable = _stable_positions([j for _, j in unchanged])
    for idx, (i, j) in enumerate(unchanged):
        if idx not in stable:
            entries.append(DiffEntry("moved", old[i].cell_id, old_index=i, new_index=j))

    entries.sort(
        key=lambda e: (
            e.new_index if e.new_index is not None else -1,
            e.old_index if e.old_index is not None else -1,
            e.change,
        )
    )
    return NotebookDiff(
        tuple(entries),
        (a.format_version, b.format_version) if a.format_version != b.format_version else None,
        (a.metadata_digest, b.metadata_digest) if a.metadata_digest != b.metadata_digest else None,
    )


def apply_diff(a: Notebook, diff: NotebookDiff) -> Notebook:
    """Reconstruct the new notebook from the old one plus a diff."""
    removed = {e.cell_id for e in diff.entries if e.change == "removed"}
    placed: dict[int, Cell] = {}
    consumed: set[str] = set(removed)
    old_by_id = {c.cell_id: c for c in a.cells}
    for e in diff.entries:
        if e.change == "added":
            placed[e.new_index] = e.cell
        elif e.change == "modified":
            placed[e.new_index] = e.cell
            consumed.add(e.cell_id)
        elif e.change == "moved":
            placed[e.new_index] = old_by_id[e.cell_id]
            consumed.add(e.cell_id)

    stable = [c for c in a.cells if c.cell_id not in consumed]
    total = len(stable) + len(placed)
    result: list[Cell] = []
    stable_iter = iter(stable)
    for idx in range(total):
        if idx in placed:
            result.append(placed[idx])
        else:
            result.append(next(stable_iter))

    format_version = (
        diff.format_version_change[1] if diff.format_version_change else a.format_version
    )
    metadata_digest = (
        diff.metadata_digest_change[1] if diff.metadata_digest_change else a.metadata_digest
    )
    return Notebook(tuple(result), format_version, metadata_digest)


def diff_to_dict(diff: NotebookDiff) -> dict:
    def cell_obj(cell: Cell | None) -> dict | None:
        if cell is None:
            return None
        return {
            "cell_id": cell.cell_id,
            "kind": cell.kind,
            "source": cell.source,
            "execution_count": cell.execution_count,
            "outputs_digest": cell.outputs_digest,
        }

    return {
        "schema": DIFF_SCHEMA,
        "summary": summarize(diff),
        "entries": [
            {
                "change": e.change,
                "cell_id": e.cell_id,
                "old_index": e.old_index,
                "new_index": e.new_index,
                "cell": cell_obj(e.cell),
                "detail": list(e.detail),
            }
            for e in diff.entries
        ],
        "format_version_change": (
            [list(diff.format_version_change[0]), list(diff.format_version_change[1])]
            if diff.format_version_change
            else None
        ),
        "metadata_digest_change": (
            list(diff.metadata_digest_change) if diff.metadata_digest_change else None
        ),
    }


def summarize(diff: NotebookDiff) -> dict[str, int]:
    counts = {change: 0 for change in CHANGES}
    for entry in diff.entries:
        counts[entry.change] += 1
    return counts
