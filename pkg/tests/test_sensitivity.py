#!/usr/bin/env python
# -*- coding: utf-8 -*-

from dataclasses import replace

import numpy as np
import pytest

from conftest import fast_config
from constants import BoostingParams, ForestParams, MetaMode
from core import fit_pipeline
from evalkit import (
    SensitivityTable,
    outlier_mask,
    outlier_resample,
    rank_correlation,
    sensitivity,
    sensitivity_stability,
    source_feature,
)
from learners import LogisticModel
from utils.errors import ParamError, SampleError, StateError


def small_config(**changes):
    return fast_config(
        gbt=BoostingParams(n_trees=15, max_depth=3, learning_rate=0.2, min_samples_leaf=5, subsample=0.8),
        rf=ForestParams(n_trees=8, max_depth=5, min_samples_leaf=3),
        embedding_dim=8,
        **changes,
    )


def test_shares_cover_the_schema_and_sum_to_one(schema, pipeline):
    table = sensitivity(pipeline)
    assert len(table) == len(schema)
    assert set(table.ranking) == set(schema.names)
    assert sum(share for _, share in table.rows) == pytest.approx(1.0, abs=1e-12)
    shares = [share for _, share in table.rows]
    assert shares == sorted(shares, reverse=True)
    assert all(share >= 0 for share in shares)


def test_planted_features_dominate_without_embeddings(split, truth):
    table = sensitivity(fit_pipeline(split.train, fast_config(embedding_provider="none")))
    assert table.share("description") == 0.0
    strongest = [name for name, _ in truth.importance[:2]]
    assert set(strongest) <= set(table.ranking[:4])


def test_rescaled_continuous_feature_keeps_the_table(split, pipeline):
    def rescaled(record):
        value = record.values.get("years_of_experience")
        return replace(record, values={**record.values, "years_of_experience": None if value is None else 8.0 * value})

    train = split.train.with_records([rescaled(r) for r in split.train.records])
    refit = fit_pipeline(train, pipeline.config)
    assert sensitivity(refit) == sensitivity(pipeline)


def test_average_meta_mode_weighs_channels_equally(split):
    pipeline = fit_pipeline(split.train, small_config(meta_mode=MetaMode.AVERAGE))
    table = sensitivity(pipeline)
    assert table.share("description") == 0.0
    assert sum(share for _, share in table.rows) == pytest.approx(1.0, abs=1e-12)


def test_source_feature():
    assert source_feature("description__emb12") == "description"
    assert source_feature("number_of_founders") == "number_of_founders"


def test_rank_correlation():
    a = SensitivityTable((("x", 0.5), ("y", 0.3), ("z", 0.2)))
    b = SensitivityTable((("z", 0.5), ("y", 0.3), ("x", 0.2)))
    assert rank_correlation(a, a) == 1.0
    assert rank_correlation(a, b) == pytest.approx(-1.0)
    assert a.ratio("x", "z") == pytest.approx(2.5)
    assert SensitivityTable.from_dict(a.to_dict()) == a


def test_identical_resamples_agree(dataset):
    result = sensitivity_stability(small_config(), dataset, outlier_fractions=[0.0, 0.0], sample_size=800, seed=4)
    assert result.runs == [(0.0, 0), (0.0, 0)]
    assert result.tables[0] == result.tables[1]
    np.testing.assert_array_equal(result.tau, np.ones((2, 2)))
    assert result.mean_tau == 1.0
    assert result.to_dict()["mean_tau"] == 1.0


@pytest.mark.parametrize("fractions, repeats", [([0.3], 1), ([-0.1], 1), ([0.0], 0)])
def test_stability_parameters(dataset, fractions, repeats):
    with pytest.raises(ParamError):
        sensitivity_stability(small_config(), dataset, outlier_fractions=fractions, repeats=repeats)


def test_outlier_pools_are_per_class_deciles(dataset):
    extreme = outlier_mask(dataset)
    success = dataset.success()
    for mask in (success, ~success):
        assert extreme[mask].sum() == 2 * int(round(0.1 * mask.sum()))
    funding = dataset.funding()
    negatives = ~success
    assert funding[negatives & ~extreme].max() <= funding[negatives & extreme].max()


def test_outlier_resample(dataset):
    rng = np.random.default_rng(0)
    sample = outlier_resample(dataset, 0.1, 200, rng)
    assert len(sample) == 200
    outliers = {dataset.records[i].id for i in np.flatnonzero(outlier_mask(dataset))}
    assert sum(record_id in outliers for record_id in sample.ids) == 20
    assert 0 < sample.success().sum() < 200
    with pytest.raises(SampleError):
        outlier_resample(dataset, 0.0, len(dataset), rng)


def test_unfitted_pipeline(pipeline):
    with pytest.raises(StateError):
        sensitivity(replace(pipeline, calibrator=LogisticModel()))
