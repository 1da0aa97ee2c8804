#!/usr/bin/env python3
"""Regenerate the committed .ipynb fixtures under tests/fixtures/."""

import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def code(cell_id, source, count=None, outputs=None):
    return {
        "id": cell_id,
        "cell_type": "code",
        "metadata": {},
        "source": source,
        "execution_count": count,
        "outputs": outputs or [],
    }


def md(cell_id, source):
    return {"id": cell_id, "cell_type": "markdown", "metadata": {}, "source": source}


def write(name, cells, metadata=None, nbformat=4, minor=5):
    doc = {
        "cells": cells,
        "metadata": metadata or {},
        "nbformat": nbformat,
        "nbformat_minor": minor,
    }
    path = FIXTURES / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def main():
    write(
        "simple.ipynb",
        [
            md(
                "intro",
                "# Churn prototype\n\nThis notebook predicts customer churn from monthly usage data using logistic regression.",
            ),
            code("imports", "import pandas as pd\nimport numpy as np", 1),
            code("load", 'df = pd.read_csv("data/train.csv")', 2),
            code("explore", "summary = df.describe()\nprint(summary)", 3),
            code(
                "features",
                'clean = df.dropna()\nX = clean.drop("churn", axis=1)\ny = clean["churn"]',
                4,
            ),
            code("model", "model = LogisticRegression()\nmodel.fit(X, y)", 5),
            code("eval", "preds = model.predict(X)\nacc = np.mean(preds == y)\nprint(acc)", 6),
            code("viz", 'df["churn"].value_counts().plot(kind="bar")', 7),
        ],
    )

    write(
        "bad.ipynb",
        [
            code("b0", "x = 1", 5),
            code("b1", "y = shuffle(x)", 2),
            code("b2", ""),
        ],
    )

    write("empty.ipynb", [])
    write("markdown_only.ipynb", [md("m0", "# Only prose\n\nNothing executable here.")])
    write(
        "no_ids.ipynb",
        [
            {"cell_type": "code", "metadata": {}, "source": "a = 1", "execution_count": 1, "outputs": []},
            {"cell_type": "code", "metadata": {}, "source": "b = a", "execution_count": 2, "outputs": []},
        ],
    )
    write(
        "outputs.ipynb",
        [
            code(
                "out1",
                "print('hello')",
                1,
                outputs=[{"output_type": "stream", "name": "stdout", "text": ["hello\n"]}],
            )
        ],
    )
    write(
        "seeded.ipynb",
        [
            md("s-intro", "# Sampling study\n\nThis notebook draws random samples and fixes the seed for reproducibility."),
            code("s0", "import random", 1),
            code("s1", "random.seed(7)\npicks = random.sample(population, 3)\nprint(picks)", 2),
        ],
    )
    write("old_format.ipynb", [], nbformat=3, minor=0)

    (FIXTURES / "corrupt.ipynb").write_text("{this is not json", encoding="utf-8")
    print(f"wrote {FIXTURES / 'corrupt.ipynb'}")

    write(
        "corpus/nb_a.ipynb",
        [
            md("a-intro", "## Loading"),
            code("a-load", 'df = pd.read_csv("train.csv")', 1),
            code("a-fit", "model.fit(df)", 2),
        ],
    )
    write(
        "corpus/nb_b.ipynb",
        [
            code("b-score", "scores = model.score(test_data)", 1),
            code("b-plot", "plt.plot(scores)", 2),
        ],
    )
    write(
        "corpus/nb_c.ipynb",
        [code("c-load", 'df2 = pd.read_parquet("big.parquet")', 1)],
    )


if __name__ == "__main__":
    main()
