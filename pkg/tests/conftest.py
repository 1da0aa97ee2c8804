import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from protoml.model import parse_notebook

FIXTURES = Path(__file__).parent / "fixtures"


def code_cell(source, count=None, outputs=None, cell_id=None):
    raw = {"cell_type": "code", "metadata": {}, "source": source, "execution_count": count, "outputs": outputs or []}
    if cell_id is not None:
        raw["id"] = cell_id
    return raw


def md_cell(source, cell_id=None):
    raw = {"cell_type": "markdown", "metadata": {}, "source": source}
    if cell_id is not None:
        raw["id"] = cell_id
    return raw


def ipynb_bytes(cells, nbformat=4, nbformat_minor=5, metadata=None):
    doc = {
        "cells": cells,
        "metadata": metadata if metadata is not None else {},
        "nbformat": nbformat,
        "nbformat_minor": nbformat_minor,
    }
    return json.dumps(doc).encode("utf-8")


def load_fixture(name):
    return parse_notebook((FIXTURES / name).read_bytes())


@pytest.fixture
def fixtures_dir():
    return FIXTURES


class TickingClock:
    """Deterministic clock: one second per call."""

    def __init__(self, start="2026-01-01T00:00:00+00:00"):
        self.now = datetime.fromisoformat(start)

    def __call__(self):
        current = self.now
        self.now = current + timedelta(seconds=1)
        return current


@pytest.fixture
def clock():
    return TickingClock()


FIXED_NOW = datetime(2026, 1, 1, tzinfo=timezone.utc)


def fixed_clock():
    return FIXED_NOW
