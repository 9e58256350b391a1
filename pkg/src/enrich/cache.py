#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Persistent enrichment cache.

An append-only JSON-lines file, one provider answer per line::

    {"key": "<sha256 hex>", "feature": "skill_relevance", "response": "3"}

Only raw answers are stored; validation runs again on every hit, so a cache
written under an older schema can never inject out-of-domain values.
"""

import hashlib
import json
import logging
import threading
from pathlib import Path
from typing import Dict, Optional, Union

from utils import canonical_json, ensure_dir

logger = logging.getLogger(__name__)


def cache_key(feature: str, prompt: str, provider_id: str) -> str:
    """sha256 hex digest of (feature, prompt, provider id)."""
    material = canonical_json([feature, prompt, provider_id])
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


class EnrichmentCache:
    """Key -> raw provider answer; file-backed when ``path`` is given."""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path is not None else None
        self._entries: Dict[str, str] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.corrupt_lines = 0
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        try:
            with open(self.path, "r", encoding="utf-8") as f:
                lines = f.readlines()
        except (OSError, UnicodeDecodeError) as e:
            logger.warning("enrichment cache %s unreadable (%s); starting empty", self.path, e)
            return

        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
                self._entries[str(entry["key"])] = str(entry["response"])
            except (ValueError, KeyError, TypeError):
                self.corrupt_lines += 1
                logger.warning("skipping corrupt enrichment cache line %d in %s", number, self.path)
        logger.debug("loaded %d cached answers from %s", len(self._entries), self.path)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def get(self, key: str) -> Optional[str]:
        with self._lock:
            response = self._entries.get(key)
            if response is None:
                self.misses += 1
            else:
                self.hits += 1
            return response

    def put(self, key: str, feature: str, response: str):
        with self._lock:
            if self._entries.get(key) == response:
                return
            self._entries[key] = response
            if self.path is None:
                return
            ensure_dir(self.path.parent)
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(json.dumps({"key": key, "feature": feature, "response": response}) + "\n")

    def clear(self):
        with self._lock:
            self._entries.clear()
            if self.path is not None and self.path.exists():
                self.path.unlink()
