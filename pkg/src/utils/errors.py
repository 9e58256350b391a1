#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Exception hierarchy for foundercast.

Errors that describe bad input data derive from :class:`DataError`; the CLI
maps those to exit code 2. Value-shaped errors also derive from
``ValueError`` so callers that only know the standard library can still
catch them.
"""

from typing import Iterable, Optional


class FoundercastError(Exception):
    """Base class for every error raised by foundercast."""


class DataError(FoundercastError):
    """Input data could not be used as given."""


class ParseError(DataError, ValueError):
    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class SchemaError(DataError):
    def __init__(self, message: str, missing: Iterable[str] = ()):
        self.missing = list(missing)
        if self.missing:
            message = f"{message}: {', '.join(self.missing)}"
        super().__init__(message)


class SchemaMismatchError(DataError):
    def __init__(self, expected: str, actual: str):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"Schema hash mismatch: artifact was trained on {expected}, data uses {actual}"
        )


class ArtifactError(DataError):
    """A pipeline artifact is malformed or of an unsupported version."""


class MissingOutcome(DataError, ValueError):
    """No outcome field present to derive a success label from."""


class SplitError(DataError, ValueError):
    pass


class SampleError(DataError, ValueError):
    pass


class GeneratorError(DataError):
    pass


class ProviderError(FoundercastError):
    """An enrichment provider could not produce an answer."""


class EmbedError(DataError):
    pass


class EncodeError(DataError, ValueError):
    def __init__(self, message: str, record_id: Optional[str] = None):
        self.record_id = record_id
        if record_id is not None:
            message = f"record {record_id}: {message}"
        super().__init__(message)


class UnknownCategory(EncodeError):
    pass


class FitError(FoundercastError):
    pass


class SingularError(FitError):
    pass


class ConvergenceError(FitError):
    def __init__(self, message: str, gradient_norm: float):
        self.gradient_norm = gradient_norm
        super().__init__(f"{message} (final gradient max-norm {gradient_norm:.3e})")


class ParamError(FoundercastError, ValueError):
    pass


class ShapeError(FoundercastError, ValueError):
    pass


class StateError(FoundercastError):
    """An operation needs a fitted model or pipeline."""


class RangeError(DataError, ValueError):
    pass


class MetricError(FoundercastError, ValueError):
    pass


class AblationError(FoundercastError):
    pass


__all__ = [
    "FoundercastError",
    "DataError",
    "ParseError",
    "SchemaError",
    "SchemaMismatchError",
    "ArtifactError",
    "MissingOutcome",
    "SplitError",
    "SampleError",
    "GeneratorError",
    "ProviderError",
    "EmbedError",
    "EncodeError",
    "UnknownCategory",
    "FitError",
    "SingularError",
    "ConvergenceError",
    "ParamError",
    "ShapeError",
    "StateError",
    "RangeError",
    "MetricError",
    "AblationError",
]
