#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Utility functions shared across foundercast.
"""

import enum
import hashlib
import json
import logging
import math
import os
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(verbosity: int = 0):
    """Install a single stream handler on the root logger.

    Args:
        verbosity: 0 for warnings only, 1 for info, 2 or more for debug
    """
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays, enums and tuples into plain JSON types."""
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Path):
        return str(value)
    return value


def canonical_json(value: Any) -> str:
    """Serialize deterministically (sorted keys, no whitespace)."""
    return json.dumps(
        to_jsonable(value), sort_keys=True, separators=(",", ":"), allow_nan=False
    )


def fingerprint(value: Any) -> str:
    """sha256 hex digest of the canonical JSON form of ``value``."""
    return hashlib.sha256(canonical_json(value).encode("utf-8")).hexdigest()


def file_fingerprint(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def derive_seed(seed: int, *keys: Any) -> int:
    """Derive an independent 32-bit seed from a base seed and a key path.

    The derivation only depends on the string form of the keys, so it is
    stable across processes and platforms.
    """
    material = ":".join([str(int(seed))] + [str(k) for k in keys])
    return int.from_bytes(hashlib.sha256(material.encode("utf-8")).digest()[:4], "big")


def save_json(path: Union[str, Path], data: Any, indent: Optional[int] = 2):
    """Write ``data`` as JSON, creating parent directories.

    Args:
        path: destination file
        data: JSON-compatible structure (numpy values and enums are converted)
        indent: indentation; ``None`` writes a compact single line
    """
    path = Path(path)
    ensure_dir(path.parent)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_jsonable(data), f, indent=indent, sort_keys=True, allow_nan=False)
        f.write("\n")


def load_json(path: Union[str, Path], defaults: Optional[dict] = None) -> Any:
    """Load JSON from ``path``; return ``defaults`` when given and the file is missing."""
    if defaults is not None and not os.path.exists(path):
        return defaults
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_text(path: Union[str, Path], text: str):
    path = Path(path)
    ensure_dir(path.parent)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def ensure_dir(path: Union[str, Path]) -> Path:
    path = Path(path)
    if str(path) and not path.exists():
        path.mkdir(parents=True, exist_ok=True)
    return path


def format_float(value: Optional[float]) -> str:
    """Shortest round-trip text for a float; empty string for absent values."""
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return ""
    return repr(float(value))
