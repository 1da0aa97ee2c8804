"""Shared low-level helpers: canonical JSON, hashing, atomic writes, clocks."""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

HEX64_RE = re.compile(r"^[0-9a-f]{64}$")

Clock = Callable[[], datetime]


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def canonical_json(obj: Any) -> str:
    """Serialize with sorted keys, no insignificant whitespace, raw UTF-8.

    This is the byte-exact form used for hashing and for every file the
    toolkit persists. No trailing newline.
    """
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_json_bytes(obj: Any) -> bytes:
    return canonical_json(obj).encode("utf-8")


def hash_json(obj: Any) -> str:
    return sha256_hex(canonical_json_bytes(obj))


def atomic_write(path: str | Path, data: bytes) -> None:
    """Write via a temp file + rename so readers never observe partial files."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def system_clock() -> datetime:
    return datetime.now(timezone.utc)


def env_clock() -> datetime:
    """System clock, unless PROTOML_NOW pins a fixed RFC 3339 instant.

    The override exists so CI runs and golden-file comparisons can produce
    byte-identical timestamps; see README.
    """
    pinned = os.environ.get("PROTOML_NOW")
    if pinned:
        dt = datetime.fromisoformat(pinned.replace("Z", "+00:00"))
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return dt
    return system_clock()


def rfc3339(dt: datetime) -> str:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).isoformat()
