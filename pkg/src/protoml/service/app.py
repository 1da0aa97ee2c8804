"""Local HTTP JSON API bridging the engine to the explorer UI.

Loopback-only by design: a single-developer desk tool, no auth, no TLS.
Reads hit the store files directly so the API is always consistent with
what the CLI and watcher wrote (read-after-write within one poll). Checkout
through the API moves head exactly like the CLI does — one semantics.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..cardgen import CARD_SCHEMA, card_to_dict, generate_card
from ..dataflow import build_activity_flow, flow_to_dict
from ..dataflow.flow import FLOW_SCHEMA
from ..errors import ProtomlError, StoreLocked, UnknownNode, UnknownSource
from ..knowledge import KnowledgeCatalog
from ..recommender import load_index, recommend_cells, recommendations_to_dict
from ..recorder import SnapshotStore, diff_notebooks, diff_to_dict
from ..recorder.diff import DIFF_SCHEMA
from ..recorder.store import SNAPSHOT_SCHEMA, TREE_SCHEMA, tree_to_dict
from ..reviewer import REPORT_SCHEMA, default_catalog, load_catalog, report_to_dict, run_review
from .schemas import AnnotateRequest, CheckoutRequest, fail, ok

INDEX_FILENAME = "index.json"


def create_app(
    repo_dir: str | Path,
    catalog_path: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    repo = Path(repo_dir)
    store = SnapshotStore(repo)
    rules, personas = load_catalog(catalog_path) if catalog_path else default_catalog()

    app = FastAPI(title="protoml", docs_url=None, redoc_url=None)
    index_cache: dict = {"mtime": None, "index": None}

    def get_index():
        path = repo / INDEX_FILENAME
        if not path.exists():
            raise ProtomlError(f"no similarity index at {path}; run `protoml index` first")
        mtime = path.stat().st_mtime_ns
        if index_cache["mtime"] != mtime:
            index_cache["index"] = load_index(path)
            index_cache["mtime"] = mtime
        return index_cache["index"]

    # --- error mapping: every body is an envelope ---------------------------

    @app.exception_handler(UnknownNode)
    @app.exception_handler(UnknownSource)
    async def _unknown(request: Request, exc: ProtomlError):
        return fail(404, "unknown-node", str(exc))

    @app.exception_handler(StoreLocked)
    async def _locked(request: Request, exc: StoreLocked):
        return fail(409, "store-locked", str(exc))

    @app.exception_handler(ProtomlError)
    async def _data_error(request: Request, exc: ProtomlError):
        return fail(400, "bad-request", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _validation(request: Request, exc: RequestValidationError):
        return fail(400, "bad-request", str(exc.errors()))

    @app.exception_handler(StarletteHTTPException)
    async def _http(request: Request, exc: StarletteHTTPException):
        return fail(exc.status_code, "http-error", str(exc.detail))

    # --- endpoints -----------------------------------------------------------

    @app.get("/api/tree")
    def api_tree():
        return ok(TREE_SCHEMA, tree_to_dict(store.tree()))

    @app.get("/api/snapshot/{node_id}")
    def api_snapshot(node_id: str):
        snapshot = store.get(store.resolve(node_id))
        doc = store._load_object(snapshot.node_id)
        return ok(
            SNAPSHOT_SCHEMA,
            {"header": snapshot.header(), "comment": snapshot.comment, "notebook": doc["notebook"]},
        )

    @app.get("/api/diff")
    def api_diff(a: str, b: str):
        diff = diff_notebooks(store.load_notebook(a), store.load_notebook(b))
        return ok(DIFF_SCHEMA, diff_to_dict(diff))

    @app.post("/api/checkout")
    def api_checkout(body: CheckoutRequest):
        nb = store.checkout(body.node_id)
        head = store.tree().head_id
        from ..model import canonical_obj

        return ok("checkout/1", {"node_id": head, "notebook": canonical_obj(nb)})

    @app.post("/api/annotate")
    def api_annotate(body: AnnotateRequest):
        snapshot = store.annotate(body.node_id, body.comment)
        return ok(SNAPSHOT_SCHEMA, {"header": snapshot.header(), "comment": snapshot.comment})

    @app.get("/api/flow")
    def api_flow(node: str):
        nb = store.load_notebook(node)
        return ok(FLOW_SCHEMA, flow_to_dict(build_activity_flow(nb)))

    @app.get("/api/review")
    def api_review(node: str):
        nb = store.load_notebook(node)
        report = run_review(nb, rules, personas)
        return ok(REPORT_SCHEMA, report_to_dict(report, rules))

    @app.get("/api/recommend/cell")
    def api_recommend_cell(node: str, cell: str, k: int = 5):
        nb = store.load_notebook(node)
        target = nb.cell_by_id(cell)
        if target is None:
            raise UnknownNode(f"no cell {cell!r} in snapshot {node}")
        recs = recommend_cells(get_index(), target.source, k)
        return ok("recommendations/1", recommendations_to_dict(recs))

    @app.get("/api/card")
    def api_card(node: str):
        nb = store.load_notebook(node)
        flow = build_activity_flow(nb)
        report = run_review(nb, rules, personas)
        cell_ids = {c.cell_id for c in nb.cells}
        links = [
            link
            for link in KnowledgeCatalog(repo).links()
            if link.target.type == "cell" and link.target.cell_id in cell_ids
        ]
        return ok(CARD_SCHEMA, card_to_dict(generate_card(nb, flow, report, links)))

    @app.get("/api/knowledge")
    def api_knowledge(cell: str | None = None, node: str | None = None):
        catalog = KnowledgeCatalog(repo)
        if cell is not None:
            hits = catalog.links_for_cell(cell)
        elif node is not None:
            from ..knowledge import LinkTarget

            hits = catalog.sources_for(LinkTarget.snapshot(node))
        else:
            raise ProtomlError("pass ?cell= or ?node=")
        return ok(
            "knowledge-trace/1",
            {
                "items": [
                    {
                        "source": {
                            "source_id": src.source_id,
                            "kind": src.kind,
                            "title": src.title,
                            "url": src.url,
                            "author": src.author,
                        },
                        "rationale": link.rationale,
                    }
                    for src, link in hits
                ]
            },
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
