#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Command Line.

This module ties the stages into reproducible runs:
- generate, enrich, train, evaluate, sweep, sensitivity, ablate, predict
- Configuration precedence: defaults < JSON config file < flags
- Exit codes: 0 success, 1 usage error, 2 data error
"""

from .cli import EXIT_OK, EXIT_USAGE, EXIT_DATA, build_parser, resolve_config, run_command, main

__all__ = [
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_DATA",
    "build_parser",
    "resolve_config",
    "run_command",
    "main",
]
