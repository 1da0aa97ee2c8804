"""protoml command line: every capability, scriptable, JSON-first.

Exit codes are stable API: 0 success, 1 review found error-severity
violations, 2 usage error, 3 data error (bad notebook, unknown node, locked
store, ...). ``--format json`` output is deterministic and schema-versioned,
shared with the HTTP service. ``--repo`` (or ``PROTOML_REPO``) points at the
store directory, default ``./.protoml``.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import __version__
from .cardgen import card_to_dict, generate_card, render_card
from .dataflow import build_activity_flow, export_flow, flow_to_dict
from .errors import ProtomlError
from .knowledge import FLAGS, SOURCE_KINDS, KnowledgeCatalog, LinkTarget, score_source
from .model import parse_notebook, write_ipynb
from .recommender import (
    ingest_corpus,
    load_index,
    recommend_cells,
    recommend_notebooks,
    recommendations_to_dict,
)
from .recorder import SnapshotStore, Watcher, diff_notebooks, diff_to_dict
from .recorder.store import tree_to_dict
from .reviewer import default_catalog, failed_severities, load_catalog, report_to_dict, run_review

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_DATA = 3

INDEX_FILENAME = "index.json"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _read_notebook(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ProtomlError(f"cannot read {path}: {exc}") from None
    return parse_notebook(data)


def repo_option(f):
    return click.option(
        "--repo",
        "repo_dir",
        default=".protoml",
        envvar="PROTOML_REPO",
        show_default=True,
        help="Store directory.",
    )(f)


def format_option(f):
    return click.option(
        "--format",
        "fmt",
        type=click.Choice(["text", "json"]),
        default="text",
        show_default=True,
        help="Output format.",
    )(f)


def data_errors(f):
    """Map toolkit errors to exit 3 with the message on stderr."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ProtomlError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DATA)

    return wrapper


@click.group()
@click.version_option(__version__, prog_name="protoml")
def main():
    """Notebook prototyping toolkit: explain, review, record, explore, reuse."""


# --- explain ------------------------------------------------------------------


@main.command()
@click.argument("notebook", type=click.Path())
@click.option("--dot", "as_dot", is_flag=True, help="Emit Graphviz DOT.")
@click.option("--json", "as_json", is_flag=True, help="Emit flow/1 JSON.")
@format_option
@repo_option
@data_errors
def explain(notebook, as_dot, as_json, fmt, repo_dir):
    """Data-flow and activity explanation of NOTEBOOK."""
    nb = _read_notebook(notebook)
    flow = build_activity_flow(nb)
    if as_dot:
        click.echo(export_flow(flow, "dot"))
        return
    if as_json or fmt == "json":
        click.echo(export_flow(flow, "json"))
        return
    for activity in flow.activities:
        click.echo(f"[{activity.category:<13}] {activity.cell_id}: {activity.description}")
    if flow.edges:
        click.echo("edges:")
        for edge in flow.edges:
            click.echo(f"  {edge.producer} -> {edge.consumer} ({edge.symbol})")


# --- review -------------------------------------------------------------------


@main.command()
@click.argument("notebook", type=click.Path())
@click.option("--catalog", "catalog_path", type=click.Path(), default=None, help="Catalog file (review/1).")
@click.option("--persona", "persona_id", default=None, help="Show only this persona's score.")
@format_option
@repo_option
@data_errors
def review(notebook, catalog_path, persona_id, fmt, repo_dir):
    """Review NOTEBOOK against the rule catalog; exit 1 on error-severity failures."""
    nb = _read_notebook(notebook)
    rules, personas = load_catalog(catalog_path) if catalog_path else default_catalog()
    if persona_id is not None and persona_id not in {p.persona_id for p in personas}:
        raise click.UsageError(f"unknown persona: {persona_id}")
    report = run_review(nb, rules, personas)
    if fmt == "json":
        doc = report_to_dict(report, rules)
        if persona_id is not None:
            doc["persona_scores"] = {persona_id: doc["persona_scores"][persona_id]}
        click.echo(_dump(doc))
    else:
        severity = {r.rule_id: r.severity for r in rules}
        for f in report.findings:
            status = "pass" if f.passed else f"FAIL [{severity[f.rule_id]}]"
            suffix = "" if f.passed else f" — {f.message}"
            cells = f" cells: {', '.join(f.locations)}" if f.locations else ""
            click.echo(f"{f.rule_id:<11} {status}{suffix}{cells}")
        click.echo("persona scores:")
        for pid, score in sorted(report.persona_scores.items()):
            if persona_id is None or pid == persona_id:
                click.echo(f"  {pid:<16} {score}")
    if "error" in failed_severities(report, rules):
        sys.exit(EXIT_FINDINGS)


# --- recorder -----------------------------------------------------------------


@main.command()
@click.argument("notebook", type=click.Path())
@click.option("--comment", default=None, help="Comment to attach to the snapshot.")
@format_option
@repo_option
@data_errors
def record(notebook, comment, fmt, repo_dir):
    """Record a snapshot of NOTEBOOK into the store."""
    store = SnapshotStore(repo_dir)
    snapshot = store.record(_read_notebook(notebook), comment=comment)
    if fmt == "json":
        doc = {"schema": "snapshot/1", "header": snapshot.header(), "comment": snapshot.comment}
        click.echo(_dump(doc))
    else:
        click.echo(f"recorded {snapshot.node_id[:12]} (seq {snapshot.seq})")


@main.command()
@click.argument("notebook", type=click.Path())
@click.option("--interval", type=float, default=0.5, show_default=True, help="Poll interval in seconds.")
@format_option
@repo_option
@data_errors
def watch(notebook, interval, fmt, repo_dir):
    """Watch NOTEBOOK and snapshot on every observed cell execution."""
    store = SnapshotStore(repo_dir)
    watcher = Watcher(store, notebook, poll_interval=interval)
    click.echo(f"watching {notebook} (Ctrl-C to stop)", err=True)
    try:
        for event in watcher.watch():
            if event.kind == "snapshot":
                snap = event.snapshot
                if fmt == "json":
                    click.echo(_dump({"schema": "snapshot/1", "header": snap.header()}))
                else:
                    trigger = f" trigger={snap.trigger_cell_id}" if snap.trigger_cell_id else ""
                    click.echo(f"snapshot {snap.node_id[:12]} (seq {snap.seq}){trigger}")
            else:
                click.echo(f"warning: {event.message}", err=True)
    except KeyboardInterrupt:
        click.echo("stopped", err=True)


def _render_tree(tree) -> str:
    lines: list[str] = []

    def walk(node_id: str, prefix: str, connector: str) -> None:
        snap = tree.nodes[node_id]
        head = " [HEAD]" if node_id == tree.head_id else ""
        comment = f"  # {snap.comment}" if snap.comment else ""
        lines.append(f"{prefix}{connector}{snap.node_id[:12]} (seq {snap.seq}){head}{comment}")
        kids = tree.children(node_id)
        if connector == "":
            child_prefix = prefix
        else:
            child_prefix = prefix + ("   " if connector == "`- " else "|  ")
        for i, kid in enumerate(kids):
            walk(kid, child_prefix, "`- " if i == len(kids) - 1 else "|- ")

    if tree.root_id:
        walk(tree.root_id, "", "")
    return "\n".join(lines)


@main.command()
@click.option("--tree", "as_tree", is_flag=True, help="Render the experiment tree.")
@format_option
@repo_option
@data_errors
def log(as_tree, fmt, repo_dir):
    """List recorded snapshots (or the experiment tree with --tree)."""
    store = SnapshotStore(repo_dir)
    tree = store.tree()
    if fmt == "json":
        click.echo(_dump(tree_to_dict(tree)))
        return
    if as_tree:
        rendering = _render_tree(tree)
        click.echo(rendering if rendering else "(empty store)")
        return
    if not tree.nodes:
        click.echo("(empty store)")
        return
    for snap in sorted(tree.nodes.values(), key=lambda s: s.seq):
        head = " [HEAD]" if snap.node_id == tree.head_id else ""
        comment = f"  # {snap.comment}" if snap.comment else ""
        click.echo(f"{snap.seq:>4}  {snap.node_id[:12]}  {snap.created_at}{head}{comment}")


@main.command()
@click.argument("node")
@click.option("-o", "--output", type=click.Path(), default=None, help="Write the notebook as .ipynb.")
@format_option
@repo_option
@data_errors
def checkout(node, output, fmt, repo_dir):
    """Move head to NODE and optionally export its notebook."""
    store = SnapshotStore(repo_dir)
    nb = store.checkout(node)
    node_id = store.tree().head_id
    if output:
        Path(output).write_bytes(write_ipynb(nb))
    if fmt == "json":
        click.echo(_dump({"schema": "checkout/1", "node_id": node_id, "written_to": output}))
    else:
        where = f" -> {output}" if output else ""
        click.echo(f"checked out {node_id[:12]}{where}")


@main.command("diff")
@click.argument("node_a")
@click.argument("node_b")
@format_option
@repo_option
@data_errors
def diff_cmd(node_a, node_b, fmt, repo_dir):
    """Diff the notebooks at two snapshot nodes."""
    store = SnapshotStore(repo_dir)
    a = store.load_notebook(node_a)
    b = store.load_notebook(node_b)
    d = diff_notebooks(a, b)
    if fmt == "json":
        click.echo(_dump(diff_to_dict(d)))
        return
    if d.is_empty:
        click.echo("no differences")
        return
    for entry in d.entries:
        pos = f" @{entry.new_index}" if entry.new_index is not None else ""
        click.echo(f"{entry.change:<9} {entry.cell_id}{pos}")
        for line in entry.detail:
            click.echo(f"    {line}")


@main.command()
@click.argument("node")
@click.argument("text")
@format_option
@repo_option
@data_errors
def annotate(node, text, fmt, repo_dir):
    """Attach a comment to a snapshot node."""
    store = SnapshotStore(repo_dir)
    snapshot = store.annotate(node, text)
    if fmt == "json":
        click.echo(_dump({"schema": "snapshot/1", "header": snapshot.header(), "comment": snapshot.comment}))
    else:
        click.echo(f"annotated {snapshot.node_id[:12]}")


# --- recommender ----------------------------------------------------------------


@main.command()
@click.argument("corpus_dir", type=click.Path())
@format_option
@repo_option
@data_errors
def index(corpus_dir, fmt, repo_dir):
    """Build the similarity index over a directory of notebooks."""
    index_path = Path(repo_dir) / INDEX_FILENAME
    result = ingest_corpus(corpus_dir, index_path=index_path)
    if fmt == "json":
        doc = {
            "schema": "index-summary/1",
            "notebooks": result.notebook_count,
            "cells": result.index.n_docs,
            "skipped": list(result.skipped),
            "index_path": str(index_path),
        }
        click.echo(_dump(doc))
    else:
        click.echo(
            f"indexed {result.notebook_count} notebook(s), {result.index.n_docs} code cell(s)"
            + (f", skipped {len(result.skipped)} unparseable file(s)" if result.skipped else "")
        )


def _load_repo_index(repo_dir: str):
    index_path = Path(repo_dir) / INDEX_FILENAME
    if not index_path.exists():
        raise ProtomlError(f"no similarity index at {index_path}; run `protoml index <corpus-dir>` first")
    return load_index(index_path)


@main.group()
def recommend():
    """Similarity recommendations from the built index."""


@recommend.command("cell")
@click.argument("notebook", type=click.Path())
@click.argument("cell_id")
@click.option("-k", type=int, default=5, show_default=True, help="Number of results.")
@format_option
@repo_option
@data_errors
def recommend_cell(notebook, cell_id, k, fmt, repo_dir):
    """Cells similar to CELL_ID of NOTEBOOK."""
    nb = _read_notebook(notebook)
    cell = nb.cell_by_id(cell_id)
    if cell is None:
        raise ProtomlError(f"no cell {cell_id!r} in {notebook}")
    recs = recommend_cells(_load_repo_index(repo_dir), cell.source, k)
    if fmt == "json":
        click.echo(_dump(recommendations_to_dict(recs)))
    else:
        for r in recs:
            path, cid = r.target
            click.echo(f"{r.rank:>3}. {r.score:.4f}  {path} :: {cid}")
        if not recs:
            click.echo("no similar cells found")


@recommend.command("notebook")
@click.argument("notebook", type=click.Path())
@click.option("-k", type=int, default=5, show_default=True, help="Number of results.")
@click.option("--corpus", "corpus_dir", type=click.Path(), default=None, help="Corpus root (for --exclude-self path matching).")
@click.option("--exclude-self", is_flag=True, help="Drop the query notebook from results.")
@format_option
@repo_option
@data_errors
def recommend_notebook(notebook, k, corpus_dir, exclude_self, fmt, repo_dir):
    """Notebooks similar to NOTEBOOK."""
    nb = _read_notebook(notebook)
    query_path = notebook
    if corpus_dir is not None:
        try:
            query_path = Path(notebook).resolve().relative_to(Path(corpus_dir).resolve()).as_posix()
        except ValueError:
            query_path = notebook
    recs = recommend_notebooks(
        _load_repo_index(repo_dir), nb, k, exclude_self=exclude_self, query_path=query_path
    )
    if fmt == "json":
        click.echo(_dump(recommendations_to_dict(recs)))
    else:
        for r in recs:
            click.echo(f"{r.rank:>3}. {r.score:.4f}  {r.target}")
        if not recs:
            click.echo("no similar notebooks found")


# --- card -----------------------------------------------------------------------


@main.command()
@click.argument("notebook", type=click.Path())
@click.option("-o", "--output", type=click.Path(), default=None, help="Write the card to a file.")
@click.option("--manual", "manual_path", type=click.Path(), default=None, help="Sidecar JSON of manual fields.")
@click.option("--catalog", "catalog_path", type=click.Path(), default=None, help="Review catalog to apply.")
@format_option
@repo_option
@data_errors
def card(notebook, output, manual_path, catalog_path, fmt, repo_dir):
    """Generate the prototype card for NOTEBOOK."""
    nb = _read_notebook(notebook)
    manual = {}
    if manual_path:
        manual = json.loads(Path(manual_path).read_text("utf-8"))
        if not isinstance(manual, dict):
            raise ProtomlError(f"{manual_path}: manual fields must be a JSON object")
    rules, personas = load_catalog(catalog_path) if catalog_path else default_catalog()
    flow = build_activity_flow(nb)
    report = run_review(nb, rules, personas)
    cell_ids = {c.cell_id for c in nb.cells}
    links = [
        link
        for link in KnowledgeCatalog(repo_dir).links()
        if link.target.type == "cell" and link.target.cell_id in cell_ids
    ]
    result = generate_card(nb, flow, report, links, manual)
    text = _dump(card_to_dict(result)) if fmt == "json" else render_card(result, "markdown")
    if output:
        Path(output).write_text(text + ("\n" if not text.endswith("\n") else ""), encoding="utf-8")
        click.echo(f"wrote {output}")
    else:
        click.echo(text)


# --- knowledge --------------------------------------------------------------------


@main.group()
def knowledge():
    """Knowledge-source catalog and trace links."""


@knowledge.command("add")
@click.argument("slug")
@click.option("--kind", type=click.Choice(SOURCE_KINDS), required=True)
@click.option("--title", required=True)
@click.option("--url", default=None)
@click.option("--author", default=None)
@click.option("--notes", default="")
@click.option("--flag", "flags", type=click.Choice(FLAGS), multiple=True, help="Suitability flag to set true.")
@format_option
@repo_option
@data_errors
def knowledge_add(slug, kind, title, url, author, notes, flags, fmt, repo_dir):
    """Catalog a knowledge source."""
    catalog = KnowledgeCatalog(repo_dir)
    src = catalog.add_source(slug, kind, title, url, author, {f: True for f in flags}, notes)
    if fmt == "json":
        click.echo(_dump({"schema": "knowledge-source/1", "source_id": src.source_id, "kind": src.kind}))
    else:
        click.echo(f"added {src.source_id}")


@knowledge.command("list")
@click.option("--kind", type=click.Choice(SOURCE_KINDS), default=None)
@click.option("--flag", type=click.Choice(FLAGS), default=None)
@format_option
@repo_option
@data_errors
def knowledge_list(kind, flag, fmt, repo_dir):
    """List cataloged sources."""
    sources = KnowledgeCatalog(repo_dir).list_sources(kind=kind, flag=flag)
    if fmt == "json":
        doc = {
            "schema": "knowledge-list/1",
            "sources": [
                {
                    "source_id": s.source_id,
                    "kind": s.kind,
                    "title": s.title,
                    "url": s.url,
                    "author": s.author,
                    "flags": {f: bool(s.flags.get(f, False)) for f in FLAGS},
                    "notes": s.notes,
                }
                for s in sources
            ],
        }
        click.echo(_dump(doc))
    else:
        for s in sources:
            on = ",".join(f for f in FLAGS if s.flags.get(f, False)) or "-"
            click.echo(f"{s.source_id:<24} {s.kind:<9} flags={on}  {s.title}")
        if not sources:
            click.echo("(no sources)")


def _target_from_options(notebook, cell, node) -> LinkTarget:
    if node is not None:
        return LinkTarget.snapshot(node)
    if notebook is not None and cell is not None:
        return LinkTarget.cell(notebook, cell)
    raise click.UsageError("specify either --node, or both --notebook and --cell")


@knowledge.command("link")
@click.argument("slug")
@click.option("--notebook", default=None)
@click.option("--cell", default=None)
@click.option("--node", default=None)
@click.option("--rationale", default="")
@format_option
@repo_option
@data_errors
def knowledge_link(slug, notebook, cell, node, rationale, fmt, repo_dir):
    """Trace a source to a cell or snapshot."""
    target = _target_from_options(notebook, cell, node)
    KnowledgeCatalog(repo_dir).link(slug, target, rationale)
    if fmt == "json":
        click.echo(_dump({"schema": "knowledge-link/1", "source_id": slug}))
    else:
        click.echo(f"linked {slug}")


@knowledge.command("unlink")
@click.argument("slug")
@click.option("--notebook", default=None)
@click.option("--cell", default=None)
@click.option("--node", default=None)
@format_option
@repo_option
@data_errors
def knowledge_unlink(slug, notebook, cell, node, fmt, repo_dir):
    """Remove a trace link."""
    target = _target_from_options(notebook, cell, node)
    removed = KnowledgeCatalog(repo_dir).unlink(slug, target)
    if fmt == "json":
        click.echo(_dump({"schema": "knowledge-unlink/1", "source_id": slug, "removed": removed}))
    else:
        click.echo(f"removed {removed} link(s)")


@knowledge.command("score")
@click.argument("slug")
@format_option
@repo_option
@data_errors
def knowledge_score(slug, fmt, repo_dir):
    """Suitability score of a source under the shipped weights."""
    catalog = KnowledgeCatalog(repo_dir)
    src = catalog.get(slug)
    score = score_source(src)
    if fmt == "json":
        doc = {
            "schema": "suitability/1",
            "source_id": slug,
            "value": score.value,
            "breakdown": dict(sorted(score.breakdown.items())),
        }
        click.echo(_dump(doc))
    else:
        parts = ", ".join(f"{k}={v}" for k, v in sorted(score.breakdown.items())) or "no flags set"
        click.echo(f"{slug}: {score.value} ({parts})")


# --- service ------------------------------------------------------------------------


@main.command()
@click.option("--port", type=int, default=7333, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True, help="Bind address (non-loopback is unsafe).")
@click.option("--ui-dir", type=click.Path(), default=None, help="Static UI assets to serve at /.")
@click.option("--catalog", "catalog_path", type=click.Path(), default=None, help="Review catalog for /api/review.")
@repo_option
@data_errors
def serve(port, host, ui_dir, catalog_path, repo_dir):
    """Start the local JSON API (and the explorer UI when assets exist)."""
    import uvicorn

    from .service import create_app

    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = "frontend/dist"
    app = create_app(repo_dir, catalog_path=catalog_path, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
