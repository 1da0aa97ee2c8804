"""Single-writer lock shared by the snapshot store and the knowledge catalog.

One lock file per repo directory, created with O_EXCL and holding the owner
pid. A second writer gets StoreLocked instead of blocking. A lock whose pid
is no longer alive on this host is considered stale and stolen.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import StoreLocked

LOCK_NAME = "lock"


def _pid_alive(pid: int) -> bool:
    try:
        os.kill(pid, 0)
    except ProcessLookupError:
        return False
    except PermissionError:
        return True
    return True


class RepoLock:
    """Context manager guarding mutations of a repo directory."""

    def __init__(self, repo_dir: str | Path):
        self.path = Path(repo_dir) / LOCK_NAME
        self._held = False

    def acquire(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        for _ in range(2):  # second try after stealing a stale lock
            try:
                fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            except FileExistsError:
                if self._steal_if_stale():
                    continue
                raise StoreLocked(f"repo is locked by another writer: {self.path}") from None
            with os.fdopen(fd, "w") as fh:
                fh.write(str(os.getpid()))
            self._held = True
            return
        raise StoreLocked(f"repo is locked by another writer: {self.path}")

    def _steal_if_stale(self) -> bool:
        try:
            pid = int(self.path.read_text().strip() or "0")
        except (OSError, ValueError):
            return False
        if pid and _pid_alive(pid):
            return False
        try:
            self.path.unlink()
        except OSError:
            return False
        return True

    def release(self) -> None:
        if self._held:
            try:
                self.path.unlink()
            except OSError:
                pass
            self._held = False

    def __enter__(self) -> "RepoLock":
        self.acquire()
        return self

    def __exit__(self, *exc) -> None:
        self.release()
