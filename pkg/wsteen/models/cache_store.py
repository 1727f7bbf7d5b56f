"""Persistent, content-addressed cache for bases and verification reports."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from typing import Any, Dict, List, Optional

from wsteen.models.milnor_dual import MONOMIAL_ORDER_VERSION
from wsteen.models.reports import SCHEMA_VERSION, CacheEntry

logger = logging.getLogger(__name__)

ARTIFACT_VERSION = "0.3.0"
DEFAULT_CACHE_DIR = ".wsteen-cache"


def cache_key(kind: str, preset: str, obj: str, bidegree: str = "", extra: str = "") -> str:
    """Hash of everything a cached value depends on, including both format versions."""
    material = json.dumps(
        [ARTIFACT_VERSION, SCHEMA_VERSION, MONOMIAL_ORDER_VERSION, kind, preset, obj, bidegree, extra],
        separators=(",", ":"),
    )
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


class ResultCache:
    """One JSON file per key under ``root``, plus an index of the latest report per suite."""

    def __init__(self, root: str = DEFAULT_CACHE_DIR):
        self._root = root
        self._index_path = os.path.join(root, "index.json")
        self._index: Dict[str, str] = {}
        self._load()

    @property
    def root(self) -> str:
        return self._root

    def _load(self):
        if os.path.exists(self._index_path):
            try:
                with open(self._index_path, "r", encoding="utf-8") as f:
                    self._index = dict(json.load(f))
            except Exception:
                self._index = {}
        else:
            self._index = {}

    def _write_json(self, path: str, data: Any) -> None:
        os.makedirs(self._root, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self._root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(data, f, indent=2, sort_keys=True)
            os.replace(tmp, path)
        except Exception:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise

    def _path(self, key: str) -> str:
        return os.path.join(self._root, f"{key}.json")

    def get(self, key: str) -> Optional[CacheEntry]:
        path = self._path(key)
        if not os.path.exists(path):
            logger.debug("cache miss %s", key[:12])
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                entry = CacheEntry(**json.load(f))
        except Exception:
            logger.debug("cache entry %s unreadable; ignoring", key[:12])
            return None
        if entry.key != key or entry.version != ARTIFACT_VERSION:
            return None
        logger.debug("cache hit %s", key[:12])
        return entry

    def put(self, key: str, kind: str, payload: Dict[str, Any]) -> CacheEntry:
        entry = CacheEntry(key=key, kind=kind, version=ARTIFACT_VERSION, payload=payload)
        self._write_json(self._path(key), entry.model_dump())
        return entry

    def remember(self, name: str, key: str) -> None:
        """Point ``name`` (for example ``verify:d-squared:qcl``) at a stored key."""
        self._index[name] = key
        self._write_json(self._index_path, self._index)

    def lookup(self, name: str) -> Optional[CacheEntry]:
        key = self._index.get(name)
        return self.get(key) if key else None

    def names(self) -> List[str]:
        return sorted(self._index)

    def clear(self) -> int:
        removed = 0
        if not os.path.isdir(self._root):
            return 0
        for name in os.listdir(self._root):
            if name.endswith(".json"):
                os.remove(os.path.join(self._root, name))
                removed += 1
        self._index = {}
        return removed
