"""Poll-based notebook watcher: the editor-agnostic execution signal.

Without a kernel hook, the only portable evidence that a cell ran is its
execution_count or outputs changing on disk. Each poll parses the file and
compares those two fields per cell against the store head; any change
triggers a record with the changed cell as trigger. Pure text edits don't
snapshot — they ride along with the next execution. A vanished file emits
one event and watching continues.

``Watcher.poll_once`` is the synchronous unit (drives all tests);
``Watcher.watch`` wraps it in a stoppable timed loop.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from ..errors import ProtomlError
from ..model import Cell, Notebook, parse_notebook
from ..util import sha256_hex
from .store import Snapshot, SnapshotStore

DEFAULT_POLL_INTERVAL = 0.5


@dataclass(frozen=True)
class WatchEvent:
    kind: str  # "snapshot" | "file-vanished"
    snapshot: Snapshot | None = None
    message: str | None = None


def _execution_signature(cell: Cell) -> tuple[int | None, str | None]:
    return (cell.execution_count, cell.outputs_digest)


class Watcher:
    def __init__(
        self,
        store: SnapshotStore,
        notebook_path: str | Path,
        poll_interval: float = DEFAULT_POLL_INTERVAL,
    ):
        self.store = store
        self.path = Path(notebook_path)
        self.poll_interval = poll_interval
        self._last_bytes_hash: str | None = None
        self._vanished = False
        self._stop = threading.Event()

    def poll_once(self) -> list[WatchEvent]:
        """One poll cycle; returns the events it produced (possibly none)."""
        try:
            data = self.path.read_bytes()
        except FileNotFoundError:
            if self._vanished:
                return []
            self._vanished = True
            return [WatchEvent("file-vanished", message=f"watched file vanished: {self.path}")]
        self._vanished = False

        bytes_hash = sha256_hex(data)
        if bytes_hash == self._last_bytes_hash:
            return []
        self._last_bytes_hash = bytes_hash

        try:
            nb = parse_notebook(data)
        except ProtomlError:
            return []  # partial write or junk: try again next poll

        trigger = self._execution_trigger(nb)
        if trigger is None:
            return []
        head_before = self.store.head()
        snapshot = self.store.record(nb, trigger_cell_id=trigger)
        if head_before is not None and snapshot.node_id == head_before.node_id:
            return []  # content-identical: record deduped
        return [WatchEvent("snapshot", snapshot=snapshot)]

    def _execution_trigger(self, nb: Notebook) -> str | None:
        """Cell id whose execution evidence changed vs head, or None.

        With several changed cells the one with the highest execution count
        wins (latest run), ties broken by notebook order (last wins).
        """
        head = self.store.head()
        if head is None:
            old: dict[str, Cell] = {}
        else:
            old = {c.cell_id: c for c in self.store.load_notebook(head.node_id).cells}
        changed: list[tuple[int, int, str]] = []
        for position, cell in enumerate(nb.cells):
            if cell.kind != "code":
                continue
            prev = old.get(cell.cell_id)
            prev_sig = _execution_signature(prev) if prev is not None and prev.kind == "code" else (None, None)
            if _execution_signature(cell) != prev_sig:
                rank = cell.execution_count if cell.execution_count is not None else -1
                changed.append((rank, position, cell.cell_id))
        if not changed:
            return None
        return max(changed)[2]

    def watch(self, stop: threading.Event | None = None) -> Iterator[WatchEvent]:
        """Poll until stopped, yielding events as they happen."""
        stop = stop if stop is not None else self._stop
        while not stop.is_set():
            yield from self.poll_once()
            stop.wait(self.poll_interval)

    def stop(self) -> None:
        self._stop.set()


def watch(
    store: SnapshotStore,
    notebook_path: str | Path,
    poll_interval: float = DEFAULT_POLL_INTERVAL,
    stop: threading.Event | None = None,
) -> Iterator[WatchEvent]:
    yield from Watcher(store, notebook_path, poll_interval).watch(stop)
