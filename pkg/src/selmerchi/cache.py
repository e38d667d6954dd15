"""Persistent JSON cache of per-prime local data.

One file per (minimal-model coefficients, q) pair, keyed by a canonical hash
and stamped with a schema version so format changes invalidate cleanly.
Writes go through a single lock and an atomic rename; reads are lock-free.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path

from .curves import WeierstrassCurve
from .local import LocalData, local_data

SCHEMA_VERSION = 1
ENV_VAR = "SELMERCHI_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "selmerchi"


class LocalDataCache:
    """Directory-backed store; pass directory=None to disable caching."""

    def __init__(self, directory: str | Path | None):
        self.directory = Path(directory) if directory is not None else None
        self._lock = threading.Lock()

    @staticmethod
    def _key(minimal: WeierstrassCurve, q: int) -> str:
        coeffs = ",".join(str(a) for a in minimal.ainvs())
        material = f"v{SCHEMA_VERSION}|{coeffs}|{q}"
        return hashlib.sha256(material.encode()).hexdigest()

    def _path(self, minimal: WeierstrassCurve, q: int) -> Path:
        return self.directory / f"{self._key(minimal, q)}.json"

    def get(self, minimal: WeierstrassCurve, q: int) -> LocalData | None:
        if self.directory is None:
            return None
        path = self._path(minimal, q)
        try:
            payload = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        if payload.get("schema") != SCHEMA_VERSION:
            return None
        return LocalData.from_dict(payload["local_data"])

    def put(self, minimal: WeierstrassCurve, q: int, data: LocalData) -> None:
        if self.directory is None:
            return
        payload = {
            "schema": SCHEMA_VERSION,
            "key": {
                "a_invariants": [str(a) for a in minimal.ainvs()],
                "q": q,
            },
            "local_data": data.to_dict(),
        }
        with self._lock:
            self.directory.mkdir(parents=True, exist_ok=True)
            path = self._path(minimal, q)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(payload, sort_keys=True))
            os.replace(tmp, path)

    def get_or_compute(self, minimal: WeierstrassCurve, q: int) -> LocalData:
        hit = self.get(minimal, q)
        if hit is not None:
            return hit
        data = local_data(minimal, q)
        self.put(minimal, q, data)
        return data
