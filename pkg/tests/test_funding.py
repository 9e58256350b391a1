#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest

from constants import BucketBy, FundingClass
from core import class_success_table, class_table_rows, classify_funding, funding_class, success_by_class
from utils.errors import RangeError


@pytest.mark.parametrize(
    "amount, expected, low",
    [
        (50_000, FundingClass.UNDER_1M, True),
        (100_000, FundingClass.UNDER_1M, False),
        (999_999.99, FundingClass.UNDER_1M, False),
        (1_000_000, FundingClass.ONE_TO_TEN_M, False),
        (10_000_000, FundingClass.TEN_TO_HUNDRED_M, False),
        (500_000_000, FundingClass.HUNDRED_M_TO_1B, False),
        (1_000_000_000, FundingClass.OVER_1B, False),
        (5e12, FundingClass.OVER_1B, False),
    ],
)
def test_class_bounds_are_lower_inclusive(amount, expected, low):
    assert classify_funding(amount) == (expected, low)
    assert funding_class(amount) is expected


@pytest.mark.parametrize("amount", [0, -1.0, float("nan"), float("inf")])
def test_invalid_amounts(amount):
    with pytest.raises(RangeError):
        classify_funding(amount)


def test_class_names():
    assert FundingClass.from_string("$1B+") is FundingClass.OVER_1B
    assert FundingClass.from_string("10m-100m") is FundingClass.TEN_TO_HUNDRED_M
    assert [fc.value for fc in FundingClass.ordered()] == ["100K-1M", "1M-10M", "10M-100M", "100M-1B", "1B+"]
    assert FundingClass.ONE_TO_TEN_M.lower == 1e6
    with pytest.raises(ValueError) as info:
        FundingClass.from_string("seed")
    assert "Valid options" in str(info.value)


def test_success_by_class():
    table = success_by_class([2e5, 3e5, 2e6, 2e9, 3e9], [False, True, False, True, True])
    assert list(table) == FundingClass.ordered()
    assert table[FundingClass.UNDER_1M].success_probability == 0.5
    assert table[FundingClass.OVER_1B].success_probability == 1.0
    assert table[FundingClass.TEN_TO_HUNDRED_M].n == 0
    assert table[FundingClass.TEN_TO_HUNDRED_M].success_probability is None
    rows = class_table_rows(table)
    assert rows[1] == {"funding_class": "1M-10M", "n": 1, "successes": 0, "success_probability": 0.0}


def test_class_table_of_a_pipeline(split, pipeline):
    subset = split.eval_subsets[0]
    predicted = class_success_table(pipeline, subset)
    actual = class_success_table(pipeline, subset, by=BucketBy.ACTUAL)
    assert sum(row.n for row in predicted.values()) == len(subset)
    assert sum(row.n for row in actual.values()) == len(subset)
    assert sum(row.successes for row in actual.values()) == int(subset.success().sum())
    assert actual[FundingClass.UNDER_1M].successes == 0
    assert actual[FundingClass.OVER_1B].success_probability in (None, 1.0)
