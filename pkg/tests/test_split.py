#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest

from constants import SplitSpec
from schema import split_dataset
from utils.errors import SplitError


def test_default_spec_matches_desk_scale():
    spec = SplitSpec()
    assert (spec.train_size, spec.eval_subset_count, spec.eval_subset_size) == (8659, 3, 722)
    assert spec.total == 10825
    assert SplitSpec.scaled(10825) == spec


def test_partitions_are_disjoint_and_sized(dataset):
    spec = SplitSpec(train_size=1200, eval_subset_count=3, eval_subset_size=200, seed=3)
    split = split_dataset(dataset, spec)
    parts = [split.train] + split.eval_subsets
    assert [len(p) for p in parts] == [1200, 200, 200, 200]
    seen = set()
    for part in parts:
        assert seen.isdisjoint(part.ids)
        seen.update(part.ids)


def test_stratified_rates_within_one_record(dataset):
    split = split_dataset(dataset, SplitSpec.scaled(len(dataset), seed=5))
    rate = dataset.success_rate
    for part in [split.train] + split.eval_subsets:
        positives = int(part.success().sum())
        assert abs(positives - rate * len(part)) <= 1.0


def test_partitions_keep_dataset_order(dataset):
    split = split_dataset(dataset, SplitSpec.scaled(len(dataset), seed=5))
    position = {record_id: i for i, record_id in enumerate(dataset.ids)}
    for part in [split.train] + split.eval_subsets:
        indices = [position[i] for i in part.ids]
        assert indices == sorted(indices)


def test_split_is_seeded(dataset):
    a = split_dataset(dataset, SplitSpec.scaled(len(dataset), seed=1))
    b = split_dataset(dataset, SplitSpec.scaled(len(dataset), seed=1))
    c = split_dataset(dataset, SplitSpec.scaled(len(dataset), seed=2))
    assert a.fingerprint == b.fingerprint
    assert a.fingerprint != c.fingerprint


def test_unstratified_split(dataset):
    spec = SplitSpec(train_size=500, eval_subset_count=2, eval_subset_size=100, stratified=False)
    split = split_dataset(dataset, spec)
    assert len(split.train) == 500
    assert len(split.eval_subsets) == 2


def test_spec_larger_than_dataset(dataset):
    with pytest.raises(SplitError):
        split_dataset(dataset, SplitSpec())
