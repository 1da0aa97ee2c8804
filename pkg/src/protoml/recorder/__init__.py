"""Snapshot recording: content-addressed store, experiment tree, diffs, watcher."""

from .diff import DiffEntry, NotebookDiff, apply_diff, diff_notebooks, diff_to_dict, summarize
from .store import ExperimentTree, Snapshot, SnapshotStore
from .watch import WatchEvent, Watcher, watch

__all__ = [
    "DiffEntry",
    "ExperimentTree",
    "NotebookDiff",
    "Snapshot",
    "SnapshotStore",
    "WatchEvent",
    "Watcher",
    "apply_diff",
    "diff_notebooks",
    "diff_to_dict",
    "summarize",
    "watch",
]
