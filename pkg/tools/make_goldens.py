#!/usr/bin/env python3
"""Regenerate the committed CLI golden files under tests/fixtures/goldens/.

The same command sequence is replayed by the acceptance suite, which
byte-compares CLI output against these files.
"""

import json
import sys
import tempfile
from pathlib import Path

from click.testing import CliRunner

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from golden_scenario import golden_outputs  # noqa: E402

GOLDENS = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "goldens"


def main():
    GOLDENS.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        outputs = golden_outputs(Path(tmp))
    for name, text in outputs.items():
        path = GOLDENS / name
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
