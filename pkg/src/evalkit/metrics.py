#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Funding and classification metrics.
"""

import logging
from typing import NamedTuple, Optional

import numpy as np

from utils.errors import MetricError, ShapeError

logger = logging.getLogger(__name__)


class PrecisionRecall(NamedTuple):
    """``precision`` is ``None`` when nothing was predicted positive."""

    precision: Optional[float]
    recall: float
    tp: int
    fp: int
    fn: int

    @property
    def precision_defined(self) -> bool:
        return self.precision is not None

    @property
    def n_predicted_positive(self) -> int:
        return self.tp + self.fp


def _same_length(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise ShapeError(f"length mismatch: {a.shape[0] if a.ndim else a.shape} vs {b.shape[0] if b.ndim else b.shape}")


def mape(predicted, actual) -> float:
    """Mean absolute percentage error in percent: ``100/n * sum(|p - a| / a)``.

    Raises:
        MetricError: an actual value is not positive, or no values
        ShapeError: length mismatch
    """
    predicted = np.asarray(predicted, dtype=float).ravel()
    actual = np.asarray(actual, dtype=float).ravel()
    _same_length(predicted, actual)
    if actual.size == 0:
        raise MetricError("MAPE of an empty set is undefined")
    if not np.all(actual > 0):
        raise MetricError("MAPE needs every actual value > 0")
    return float(100.0 * np.mean(np.abs(predicted - actual) / actual))


def precision_recall(predicted, actual) -> PrecisionRecall:
    """Precision, recall and the confusion counts of boolean predictions.

    Raises:
        ShapeError: length mismatch
    """
    predicted = np.asarray(predicted, dtype=bool).ravel()
    actual = np.asarray(actual, dtype=bool).ravel()
    _same_length(predicted, actual)
    tp = int(np.sum(predicted & actual))
    fp = int(np.sum(predicted & ~actual))
    fn = int(np.sum(~predicted & actual))
    precision = tp / (tp + fp) if tp + fp else None
    recall = tp / (tp + fn) if tp + fn else 0.0
    return PrecisionRecall(precision, recall, tp, fp, fn)


def precision_multiple(precision: Optional[float], baseline_rate: float) -> Optional[float]:
    """Precision as a multiple of the random-classifier precision (the baseline rate).

    An undefined precision gives an undefined multiple.

    Raises:
        MetricError: ``baseline_rate <= 0``
    """
    if not baseline_rate > 0:
        raise MetricError(f"baseline rate must be > 0, got {baseline_rate}")
    if precision is None:
        return None
    return precision / baseline_rate


def baseline_rate(actual) -> float:
    """Fraction of positives, the expected precision of a random classifier."""
    actual = np.asarray(actual, dtype=bool).ravel()
    if actual.size == 0:
        raise MetricError("baseline rate of an empty set is undefined")
    return float(actual.mean())
