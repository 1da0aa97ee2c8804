#!/usr/bin/env python3
"""Record real API responses into frontend/tests/fixtures/.

Replays the golden branch scenario against an in-process service and dumps
the envelopes the UI contract tests run against.
"""

import json
import os
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
OUT = ROOT / "frontend" / "tests" / "fixtures"

os.environ["PROTOML_NOW"] = "2026-08-10T12:00:00+00:00"

from protoml.knowledge import KnowledgeCatalog, LinkTarget  # noqa: E402
from protoml.model import parse_notebook  # noqa: E402
from protoml.recommender import ingest_corpus  # noqa: E402
from protoml.recorder import SnapshotStore  # noqa: E402
from protoml.service import create_app  # noqa: E402


def record(client: TestClient, out: dict, name: str, method: str, url: str, **kwargs):
    response = getattr(client, method)(url, **kwargs)
    out[name] = response.json()


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    out: dict[str, dict] = {}
    with tempfile.TemporaryDirectory() as tmp:
        repo = Path(tmp) / "repo"
        store = SnapshotStore(repo)
        simple = parse_notebook((FIXTURES / "simple.ipynb").read_bytes())
        bad = parse_notebook((FIXTURES / "bad.ipynb").read_bytes())
        seeded = parse_notebook((FIXTURES / "seeded.ipynb").read_bytes())

        root = store.record(simple, comment="baseline")
        child_bad = store.record(bad)
        store.checkout(root.node_id)
        store.record(seeded)
        store.annotate(root.node_id, "first working version")

        ingest_corpus(FIXTURES / "corpus", index_path=repo / "index.json")
        catalog = KnowledgeCatalog(repo)
        catalog.add_source("smote-paper", "paper", "SMOTE oversampling", flags={"has_code": True})
        catalog.link("smote-paper", LinkTarget.cell("simple.ipynb", "load"), "sampling idea")

        client = TestClient(create_app(repo))
        record(client, out, "tree.json", "get", "/api/tree")
        record(client, out, "diff_root_child.json", "get", f"/api/diff?a={root.node_id}&b={child_bad.node_id}")
        record(client, out, "flow.json", "get", f"/api/flow?node={root.node_id}")
        record(client, out, "review.json", "get", f"/api/review?node={child_bad.node_id}")
        record(client, out, "recommend.json", "get", f"/api/recommend/cell?node={root.node_id}&cell=load&k=3")
        record(client, out, "knowledge.json", "get", "/api/knowledge?cell=load")
        record(client, out, "error_unknown_node.json", "post", "/api/checkout", json={"node_id": "f" * 64})

    for name, doc in out.items():
        path = OUT / name
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    sys.exit(main())
