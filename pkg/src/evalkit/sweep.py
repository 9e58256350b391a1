#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Threshold sweep over the calibrated success probability.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from core import FittedPipeline, predict_dataset
from schema import Dataset
from utils.errors import ParamError
from .metrics import baseline_rate, precision_multiple, precision_recall

logger = logging.getLogger(__name__)

DEFAULT_GRID = tuple(round(0.50 + 0.05 * i, 2) for i in range(10))


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    precision: Optional[float]
    precision_multiple: Optional[float]
    recall: float
    n_predicted_positive: int

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "precision": self.precision,
            "precision_multiple": self.precision_multiple,
            "recall": self.recall,
            "n_predicted_positive": self.n_predicted_positive,
        }


def _check_grid(grid: Sequence[float]) -> List[float]:
    grid = [float(t) for t in grid]
    if not grid:
        raise ParamError("threshold grid is empty")
    bad = [t for t in grid if not 0 < t < 1]
    if bad:
        raise ParamError(f"thresholds must lie in (0, 1): {bad}")
    return grid


def sweep_probabilities(probabilities, actual, grid: Sequence[float] = DEFAULT_GRID) -> List[SweepRow]:
    """Sweep rows from one vector of success probabilities."""
    grid = _check_grid(grid)
    probabilities = np.asarray(probabilities, dtype=float)
    actual = np.asarray(actual, dtype=bool)
    base = baseline_rate(actual)
    rows = []
    for threshold in grid:
        pr = precision_recall(probabilities >= threshold, actual)
        multiple = precision_multiple(pr.precision, base) if base > 0 else None
        rows.append(SweepRow(threshold, pr.precision, multiple, pr.recall, pr.n_predicted_positive))
    return rows


def sweep_threshold(
    pipeline: FittedPipeline, dataset: Dataset, grid: Sequence[float] = DEFAULT_GRID
) -> List[SweepRow]:
    """Precision, multiple and recall at each threshold of ``grid``.

    Probabilities are predicted once; records that fail to encode are left out.
    """
    grid = _check_grid(grid)
    rows = [row for row in predict_dataset(pipeline, dataset) if row.ok]
    probabilities = [row.success_prob for row in rows]
    actual = [dataset.labels[row.id].success for row in rows]
    curve = sweep_probabilities(probabilities, actual, grid)
    logger.info("swept %d thresholds over %d records", len(curve), len(rows))
    return curve


def precision_plateau(curve: Sequence[SweepRow], tolerance: float = 0.02) -> Optional[Tuple[float, float]]:
    """Contiguous threshold interval around the precision peak staying within ``tolerance`` of it.

    Returns:
        ``(low, high)`` thresholds, or ``None`` when no row has a defined precision
    """
    rows = sorted(curve, key=lambda r: r.threshold)
    defined = [i for i, r in enumerate(rows) if r.precision is not None]
    if not defined:
        return None
    peak_index = max(defined, key=lambda i: (rows[i].precision, -i))
    peak = rows[peak_index].precision

    def close(i):
        return rows[i].precision is not None and rows[i].precision >= peak - tolerance

    low = high = peak_index
    while low - 1 >= 0 and close(low - 1):
        low -= 1
    while high + 1 < len(rows) and close(high + 1):
        high += 1
    return rows[low].threshold, rows[high].threshold


def sweep_frame(curve: Sequence[SweepRow]) -> pd.DataFrame:
    """Plot-ready table (threshold, precision, precision_multiple, recall, n_predicted_positive)."""
    return pd.DataFrame([row.to_dict() for row in curve], columns=list(SweepRow.__dataclass_fields__))
