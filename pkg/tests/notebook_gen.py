"""Seeded random notebook generator for fuzz and property tests."""

import random

from protoml.model import Cell, Notebook
from protoml.util import hash_json

NAMES = [
    "df", "data", "model", "x2", "y2", "train", "test", "result",
    "scores", "alpha", "beta", "clf", "features", "labels", "total",
]
FUNCS = ["load_data", "transform", "fit_model", "evaluate", "summarize", "clean_rows"]
MD_SNIPPETS = [
    "## Exploration",
    "Notes on the data preparation step and what worked.",
    "### Modeling choices\nTried a few estimators here.",
]


def _statement(rng: random.Random, pool: list[str]) -> str:
    kind = rng.randrange(7)
    target = rng.choice(NAMES)
    if kind == 0:
        return f"{target} = {rng.choice(FUNCS)}({', '.join(rng.sample(pool, min(len(pool), rng.randrange(3))))})"
    if kind == 1 and pool:
        return f"{target} = {rng.choice(pool)} + {rng.randrange(10)}"
    if kind == 2 and pool:
        return f"{target} += {rng.choice(pool)}" if target in pool else f"{target} = {rng.choice(pool)}"
    if kind == 3:
        return f"import mod_{rng.randrange(4)} as m{rng.randrange(4)}"
    if kind == 4 and pool:
        return f"for item in {rng.choice(pool)}:\n    {target} = item"
    if kind == 5 and pool:
        return f"print({rng.choice(pool)})"
    return f"{target} = {rng.randrange(100)}"


def random_code_source(rng: random.Random, defined: list[str]) -> str:
    statements = []
    pool = list(defined) or ["seed_value"]
    for _ in range(rng.randrange(1, 4)):
        statements.append(_statement(rng, pool))
    return "\n".join(statements)


def random_notebook(rng: random.Random, max_cells: int = 8, executed: bool = True) -> Notebook:
    cells = []
    defined: list[str] = []
    count = 1
    for i in range(rng.randrange(1, max_cells + 1)):
        if rng.random() < 0.2:
            cells.append(Cell(f"md{i}", "markdown", rng.choice(MD_SNIPPETS)))
            continue
        source = random_code_source(rng, defined)
        defined.extend(n for n in NAMES if n in source)
        execution_count = None
        outputs_digest = None
        if executed and rng.random() < 0.8:
            execution_count = count
            count += 1
            if rng.random() < 0.3:
                outputs_digest = hash_json([{"text": f"out-{rng.randrange(100)}"}])
        cells.append(Cell(f"c{i}", "code", source, execution_count, outputs_digest))
    return Notebook(tuple(cells), (4, 5), hash_json({"gen": rng.randrange(1000)}))


def mutate_notebook(rng: random.Random, nb: Notebook) -> Notebook:
    """A structurally plausible edit: change/delete/insert/reorder/re-execute."""
    cells = list(nb.cells)
    op = rng.randrange(5)
    if op == 0 and cells:  # edit a cell's source
        i = rng.randrange(len(cells))
        c = cells[i]
        if c.kind == "code":
            cells[i] = Cell(c.cell_id, c.kind, c.source + f"\nextra_{rng.randrange(10)} = 1", c.execution_count, c.outputs_digest)
        else:
            cells[i] = Cell(c.cell_id, c.kind, c.source + " (edited)")
    elif op == 1 and len(cells) > 1:  # delete
        cells.pop(rng.randrange(len(cells)))
    elif op == 2:  # insert
        cells.insert(rng.randrange(len(cells) + 1), Cell(f"new{rng.randrange(10**6)}", "code", f"inserted_{rng.randrange(10)} = 2"))
    elif op == 3 and len(cells) > 1:  # reorder
        i = rng.randrange(len(cells))
        c = cells.pop(i)
        cells.insert(rng.randrange(len(cells) + 1), c)
    else:  # bump an execution count
        code_positions = [i for i, c in enumerate(cells) if c.kind == "code"]
        if code_positions:
            i = rng.choice(code_positions)
            c = cells[i]
            prev = c.execution_count or 0
            cells[i] = Cell(c.cell_id, c.kind, c.source, prev + rng.randrange(1, 4), hash_json([rng.randrange(50)]))
    return Notebook(tuple(cells), nb.format_version, nb.metadata_digest)
