"""In-memory and on-disk caches for expensive Betti tables.

The disk cache is content-addressed: the key is the SHA-256 of the
ideal's canonical text plus the field tag, so identical requests across
runs (or across service workers sharing a directory) reuse each other's
results.  Writers race benignly: everyone writes identical bytes.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path

_ENV_CACHE_DIR = "CHARBETTI_CACHE_DIR"


class TableCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        if directory is None:
            directory = os.environ.get(_ENV_CACHE_DIR) or None
        self.directory = Path(directory) if directory else None
        self._memory: dict[tuple[str, str], dict] = {}
        self._lock = threading.Lock()

    def _path(self, sha: str, tag: str) -> Path:
        assert self.directory is not None
        return self.directory / "tables" / f"{sha}.{tag}.json"

    def get(self, sha: str, tag: str) -> dict | None:
        with self._lock:
            hit = self._memory.get((sha, tag))
        if hit is not None:
            return hit
        if self.directory is not None:
            path = self._path(sha, tag)
            if path.is_file():
                data = json.loads(path.read_text(encoding="utf-8"))
                with self._lock:
                    self._memory[(sha, tag)] = data
                return data
        return None

    def put(self, sha: str, tag: str, payload: dict) -> None:
        with self._lock:
            self._memory[(sha, tag)] = payload
        if self.directory is not None:
            path = self._path(sha, tag)
            path.parent.mkdir(parents=True, exist_ok=True)
            text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(text)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    def clear_memory(self) -> None:
        with self._lock:
            self._memory.clear()


# process-wide default cache (memory only unless the env var points at a
# directory); the service installs its own configured instance
DEFAULT_TABLE_CACHE = TableCache()
