"""Content-addressed snapshot store with branch-on-edit experiment tree.

Layout inside the repo directory (default ``.protoml/``):

* ``objects/<node_id>.json`` — snapshot header + canonical notebook, one
  file per snapshot, never rewritten;
* ``manifest.json`` (``store/1``) — root_id, head_id, next_seq; written
  last, so it is the commit point (a crash mid-record leaves an orphan
  object with ``seq >= next_seq``, which loading ignores);
* ``comments.json`` (``comments/1``) — annotations live outside the hashed
  identity so commenting history never rewrites it;
* ``lock`` — single-writer lock, see locking module.

A node's identity hashes content, parent, and sequence number, so the same
notebook content reached on different branches stays two distinct nodes —
the history's shape is part of the record. Recording while head is a
non-leaf starts a new branch.

Reads always come from disk; there is no in-memory cache, so concurrent
readers (CLI, service, watcher) observe writes immediately.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterator

from ..errors import StoreCorrupt, UnknownNode
from ..locking import RepoLock
from ..model import Notebook, canonical_hash, canonical_obj, from_canonical_obj
from ..util import Clock, atomic_write, canonical_json_bytes, env_clock, rfc3339, sha256_hex

STORE_SCHEMA = "store/1"
SNAPSHOT_SCHEMA = "snapshot/1"
COMMENTS_SCHEMA = "comments/1"
TREE_SCHEMA = "tree/1"


@dataclass(frozen=True)
class Snapshot:
    node_id: str
    parent_id: str | None
    content_hash: str
    trigger_cell_id: str | None
    comment: str | None
    created_at: str
    seq: int

    def header(self) -> dict:
        return {
            "node_id": self.node_id,
            "parent_id": self.parent_id,
            "content_hash": self.content_hash,
            "trigger_cell_id": self.trigger_cell_id,
            "created_at": self.created_at,
            "seq": self.seq,
        }


@dataclass(frozen=True)
class ExperimentTree:
    nodes: dict[str, Snapshot]
    root_id: str | None
    head_id: str | None

    def children(self, node_id: str) -> list[str]:
        kids = [s.node_id for s in self.nodes.values() if s.parent_id == node_id]
        return sorted(kids, key=lambda nid: self.nodes[nid].seq)


def _node_id(content_hash: str, parent_id: str | None, seq: int) -> str:
    return sha256_hex(f"{content_hash}{parent_id or ''}{seq}".encode("utf-8"))


def tree_to_dict(tree: ExperimentTree) -> dict:
    """``tree/1`` document, shared verbatim by CLI ``log`` and ``GET /api/tree``."""
    return {
        "schema": TREE_SCHEMA,
        "root_id": tree.root_id,
        "head_id": tree.head_id,
        "nodes": [
            {**snap.header(), "comment": snap.comment, "children": tree.children(snap.node_id)}
            for snap in sorted(tree.nodes.values(), key=lambda s: s.seq)
        ],
    }


class SnapshotStore:
    """Handle on a repo directory. Mutations take the repo's writer lock."""

    def __init__(self, repo_dir: str | Path, clock: Clock = env_clock, verify: bool = True):
        self.repo_dir = Path(repo_dir)
        self.objects_dir = self.repo_dir / "objects"
        self.manifest_path = self.repo_dir / "manifest.json"
        self.comments_path = self.repo_dir / "comments.json"
        self.clock = clock
        if verify and self.manifest_path.exists():
            self.validate()

    # --- disk state ---------------------------------------------------------

    def _manifest(self) -> dict:
        if not self.manifest_path.exists():
            return {"schema": STORE_SCHEMA, "root_id": None, "head_id": None, "next_seq": 0}
        try:
            manifest = json.loads(self.manifest_path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StoreCorrupt(f"unreadable manifest: {exc}") from None
        if manifest.get("schema") != STORE_SCHEMA:
            raise StoreCorrupt(f"manifest schema is not {STORE_SCHEMA}")
        return manifest

    def _comments(self) -> dict[str, str]:
        if not self.comments_path.exists():
            return {}
        try:
            doc = json.loads(self.comments_path.read_text("utf-8"))
            return dict(doc.get("comments", {}))
        except (OSError, json.JSONDecodeError) as exc:
            raise StoreCorrupt(f"unreadable comments file: {exc}") from None

    def _object_path(self, node_id: str) -> Path:
        return self.objects_dir / f"{node_id}.json"

    def _load_object(self, node_id: str) -> dict:
        path = self._object_path(node_id)
        if not path.exists():
            raise UnknownNode(f"no such snapshot node: {node_id}")
        try:
            doc = json.loads(path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StoreCorrupt(f"unreadable object {node_id}: {exc}") from None
        if doc.get("schema") != SNAPSHOT_SCHEMA:
            raise StoreCorrupt(f"object {node_id} schema is not {SNAPSHOT_SCHEMA}")
        return doc

    def _snapshot_from(self, doc: dict, comments: dict[str, str]) -> Snapshot:
        h = doc["header"]
        return Snapshot(
            node_id=h["node_id"],
            parent_id=h["parent_id"],
            content_hash=h["content_hash"],
            trigger_cell_id=h["trigger_cell_id"],
            comment=comments.get(h["node_id"]),
            created_at=h["created_at"],
            seq=h["seq"],
        )

    def _load_nodes(self, manifest: dict) -> dict[str, Snapshot]:
        comments = self._comments()
        nodes: dict[str, Snapshot] = {}
        if not self.objects_dir.exists():
            return nodes
        for path in sorted(self.objects_dir.glob("*.json")):
            doc = self._load_object(path.stem)
            snap = self._snapshot_from(doc, comments)
            if snap.seq >= manifest["next_seq"]:
                continue  # orphan from an interrupted record
            nodes[snap.node_id] = snap
        return nodes

    # --- queries ------------------------------------------------------------

    def tree(self) -> ExperimentTree:
        manifest = self._manifest()
        return ExperimentTree(self._load_nodes(manifest), manifest["root_id"], manifest["head_id"])

    def snapshots(self) -> list[Snapshot]:
        tree = self.tree()
        return sorted(tree.nodes.values(), key=lambda s: s.seq)

    def get(self, node_id: str) -> Snapshot:
        tree = self.tree()
        if node_id not in tree.nodes:
            raise UnknownNode(f"no such snapshot node: {node_id}")
        return tree.nodes[node_id]

    def head(self) -> Snapshot | None:
        manifest = self._manifest()
        if manifest["head_id"] is None:
            return None
        return self._snapshot_from(self._load_object(manifest["head_id"]), self._comments())

    def load_notebook(self, node_id: str) -> Notebook:
        """Stored notebook for a node, without moving head."""
        return from_canonical_obj(self._load_object(self._resolve(node_id))["notebook"])

    def _resolve(self, ref: str) -> str:
        """Full node id, or unique-prefix match (>= 6 chars)."""
        if self._object_path(ref).exists():
            return ref
        if len(ref) >= 6 and self.objects_dir.exists():
            matches = [p.stem for p in self.objects_dir.glob(f"{ref}*.json")]
            if len(matches) == 1:
                return matches[0]
            if len(matches) > 1:
                raise UnknownNode(f"ambiguous node prefix {ref!r} ({len(matches)} matches)")
        raise UnknownNode(f"no such snapshot node: {ref}")

    def resolve(self, ref: str) -> str:
        node_id = self._resolve(ref)
        self.get(node_id)
        return node_id

    # --- mutations ----------------------------------------------------------

    def record(
        self,
        nb: Notebook,
        trigger_cell_id: str | None = None,
        comment: str | None = None,
    ) -> Snapshot:
        """Persist a snapshot of ``nb`` as a child of head and advance head.

        Recording content identical to head is a no-op returning the existing
        head. Recording while head has children starts a new branch.
        """
        content = canonical_hash(nb).hex
        with RepoLock(self.repo_dir):
            manifest = self._manifest()
            if manifest["head_id"] is not None:
                head_doc = self._load_object(manifest["head_id"])
                if head_doc["header"]["content_hash"] == content:
                    return self._snapshot_from(head_doc, self._comments())
            seq = manifest["next_seq"]
            parent_id = manifest["head_id"]
            node_id = _node_id(content, parent_id, seq)
            snapshot = Snapshot(
                node_id=node_id,
                parent_id=parent_id,
                content_hash=content,
                trigger_cell_id=trigger_cell_id,
                comment=comment,
                created_at=rfc3339(self.clock()),
                seq=seq,
            )
            doc = {
                "schema": SNAPSHOT_SCHEMA,
                "header": snapshot.header(),
                "notebook": canonical_obj(nb),
            }
            atomic_write(self._object_path(node_id), canonical_json_bytes(doc))
            if comment is not None:
                self._write_comment(node_id, comment)
            manifest["next_seq"] = seq + 1
            manifest["head_id"] = node_id
            if manifest["root_id"] is None:
                manifest["root_id"] = node_id
            atomic_write(self.manifest_path, canonical_json_bytes(manifest))
            return snapshot

    def checkout(self, ref: str) -> Notebook:
        """Move head to the node and return its notebook, bit-identical to
        what was recorded. The next record branches off this node."""
        with RepoLock(self.repo_dir):
            node_id = self._resolve(ref)
            doc = self._load_object(node_id)
            manifest = self._manifest()
            manifest["head_id"] = node_id
            atomic_write(self.manifest_path, canonical_json_bytes(manifest))
            return from_canonical_obj(doc["notebook"])

    def annotate(self, ref: str, comment: str) -> Snapshot:
        """Attach a comment (overwriting any prior one). Identity unchanged."""
        with RepoLock(self.repo_dir):
            node_id = self._resolve(ref)
            doc = self._load_object(node_id)
            self._write_comment(node_id, comment)
            return replace(self._snapshot_from(doc, {}), comment=comment)

    def _write_comment(self, node_id: str, comment: str) -> None:
        comments = self._comments()
        comments[node_id] = comment
        atomic_write(
            self.comments_path,
            canonical_json_bytes({"schema": COMMENTS_SCHEMA, "comments": comments}),
        )

    # --- integrity ----------------------------------------------------------

    def validate(self) -> None:
        """Check every structural invariant; raise StoreCorrupt on violation."""
        manifest = self._manifest()
        nodes = self._load_nodes(manifest)
        if manifest["head_id"] is None:
            if nodes:
                raise StoreCorrupt("store has objects but no head")
            return
        if manifest["head_id"] not in nodes:
            raise StoreCorrupt(f"head {manifest['head_id']} missing from objects")
        roots = [s for s in nodes.values() if s.parent_id is None]
        if len(roots) != 1:
            raise StoreCorrupt(f"expected exactly one root, found {len(roots)}")
        if roots[0].node_id != manifest["root_id"]:
            raise StoreCorrupt("manifest root_id does not match the parentless node")
        seqs = sorted(s.seq for s in nodes.values())
        if len(set(seqs)) != len(seqs):
            raise StoreCorrupt("duplicate sequence numbers")
        for snap in nodes.values():
            if snap.parent_id is not None:
                parent = nodes.get(snap.parent_id)
                if parent is None:
                    raise StoreCorrupt(f"node {snap.node_id} has missing parent {snap.parent_id}")
                if parent.seq >= snap.seq:
                    raise StoreCorrupt(f"node {snap.node_id} does not postdate its parent")
            if _node_id(snap.content_hash, snap.parent_id, snap.seq) != snap.node_id:
                raise StoreCorrupt(f"node id mismatch for {snap.node_id}")
            stored = from_canonical_obj(self._load_object(snap.node_id)["notebook"])
            if canonical_hash(stored).hex != snap.content_hash:
                raise StoreCorrupt(f"content hash mismatch for {snap.node_id}")

    def walk_to_root(self, node_id: str) -> Iterator[Snapshot]:
        tree = self.tree()
        current: str | None = node_id
        while current is not None:
            snap = tree.nodes.get(current)
            if snap is None:
                raise UnknownNode(f"no such snapshot node: {current}")
            yield snap
            current = snap.parent_id
