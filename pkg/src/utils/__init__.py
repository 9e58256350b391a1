#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Utilities.

This module provides helpers used by every stage:
- Logging setup for the command line
- Deterministic hashing, fingerprints and derived seeds
- JSON and text file helpers
- The exception hierarchy
"""

from .utils import (
    configure_logging,
    to_jsonable,
    canonical_json,
    fingerprint,
    file_fingerprint,
    derive_seed,
    save_json,
    load_json,
    write_text,
    ensure_dir,
    format_float,
)
from .errors import *  # noqa: F401,F403
from .errors import __all__ as _error_names

__all__ = [
    "configure_logging",
    "to_jsonable",
    "canonical_json",
    "fingerprint",
    "file_fingerprint",
    "derive_seed",
    "save_json",
    "load_json",
    "write_text",
    "ensure_dir",
    "format_float",
] + list(_error_names)
