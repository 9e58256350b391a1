#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Funding-class bucketing and the per-class success table.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from constants import BucketBy, FundingClass, UNSUCCESSFUL_FUNDING_RANGE
from utils.errors import RangeError

logger = logging.getLogger(__name__)

_EDGES = np.array([1e6, 1e7, 1e8, 1e9])
_ORDERED = FundingClass.ordered()


def classify_funding(amount: float) -> Tuple[FundingClass, bool]:
    """Funding class of a dollar amount plus a low-range flag.

    Bounds are lower-inclusive: $1,000,000 is "1M-10M" and $1,000,000,000
    is "1B+". Amounts under $100K fall in "100K-1M" with the flag set.

    Raises:
        RangeError: non-positive or non-finite amount
    """
    amount = float(amount)
    if not np.isfinite(amount) or amount <= 0:
        raise RangeError(f"Funding amount must be positive, got {amount}")
    index = int(np.searchsorted(_EDGES, amount, side="right"))
    return _ORDERED[index], amount < UNSUCCESSFUL_FUNDING_RANGE[0]


def funding_class(amount: float) -> FundingClass:
    return classify_funding(amount)[0]


@dataclass(frozen=True)
class ClassSuccessRow:
    funding_class: FundingClass
    n: int
    successes: int

    @property
    def success_probability(self) -> Optional[float]:
        return self.successes / self.n if self.n else None

    def to_dict(self) -> dict:
        return {
            "funding_class": self.funding_class.value,
            "n": self.n,
            "successes": self.successes,
            "success_probability": self.success_probability,
        }


def success_by_class(amounts, success) -> Dict[FundingClass, ClassSuccessRow]:
    """Empirical success fraction per funding class; every class is present."""
    amounts = np.asarray(amounts, dtype=float)
    success = np.asarray(success, dtype=bool)
    classes = [funding_class(a) for a in amounts]
    table = {}
    for fc in _ORDERED:
        mask = np.array([c is fc for c in classes], dtype=bool)
        table[fc] = ClassSuccessRow(fc, int(mask.sum()), int(success[mask].sum()) if mask.any() else 0)
    return table


def class_success_table(
    pipeline, dataset, by: Union[str, BucketBy] = BucketBy.PREDICTED
) -> Dict[FundingClass, ClassSuccessRow]:
    """Per-class (n, success probability) of a labeled dataset.

    Args:
        pipeline: fitted pipeline whose funding predictions place the records
        dataset: labeled dataset
        by: bucket on ``predicted`` funding (default) or on ``actual`` labels

    Records the pipeline cannot encode are left out.
    """
    by = BucketBy.from_string(by)
    if by is BucketBy.ACTUAL:
        return success_by_class(dataset.funding(), dataset.success())

    rows = [row for row in pipeline.predict(dataset.records) if row.ok]
    amounts = [row.funding for row in rows]
    success = [dataset.labels[row.id].success for row in rows]
    return success_by_class(amounts, success)


def class_table_rows(table: Dict[FundingClass, ClassSuccessRow]) -> List[dict]:
    return [table[fc].to_dict() for fc in _ORDERED]
