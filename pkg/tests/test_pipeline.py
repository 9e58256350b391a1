#!/usr/bin/env python
# -*- coding: utf-8 -*-

from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from conftest import fast_config
from constants import BoostingParams, ForestParams, FundingClass, GeneratorConfig, MetaMode
from core import (
    GBT_CHANNEL,
    PREDICTION_COLUMNS,
    assign_folds,
    fit_pipeline,
    pipeline_hash,
    predict,
    predict_dataset,
    prediction_rows,
    predictions_frame,
    save_predictions,
)
from core.core import _fit_channel
from encode import encode_dataset
from learners import LogisticModel
from schema import FounderRecord
from synth import generate_dataset
from utils import derive_seed
from utils.errors import FitError, ParamError, SchemaMismatchError, StateError


def tiny_config(**changes):
    return fast_config(
        gbt=BoostingParams(n_trees=10, max_depth=2, learning_rate=0.2, min_samples_leaf=5, subsample=0.8),
        rf=ForestParams(n_trees=5, max_depth=4, min_samples_leaf=3),
        embedding_dim=8,
        **changes,
    )


@pytest.fixture(scope="module")
def small():
    return generate_dataset(GeneratorConfig(n_records=400, seed=3))


def test_out_of_fold_predictions_come_from_models_that_never_saw_the_row(split, pipeline):
    config, trace = pipeline.config, pipeline.trace
    assert trace.ids == tuple(split.train.ids)
    assert trace.channels == ("gbt", "rf")
    X = encode_dataset(split.train, pipeline.encoder_state, pipeline.provider).tabular
    y = np.log10(split.train.funding())
    column = trace.channels.index(GBT_CHANNEL)
    for k in range(config.oof_folds):
        held_out = trace.folds == k
        model = _fit_channel(GBT_CHANNEL, X[~held_out], y[~held_out], config, derive_seed(config.seed, GBT_CHANNEL, k))
        np.testing.assert_array_equal(model.predict(X[held_out]), trace.base[held_out, column])


def test_folds_are_stratified():
    success = np.zeros(100, dtype=bool)
    success[::10] = True
    folds = assign_folds(success, 5, seed=1)
    for k in range(5):
        assert (success & (folds == k)).sum() == 2
        assert (~success & (folds == k)).sum() == 18
    np.testing.assert_array_equal(folds, assign_folds(success, 5, seed=1))
    assert not np.array_equal(folds, assign_folds(success, 5, seed=2))


def test_fit_is_deterministic(small):
    first = fit_pipeline(small, tiny_config())
    assert pipeline_hash(first) == pipeline_hash(fit_pipeline(small, tiny_config()))
    threaded = fit_pipeline(small, tiny_config(n_jobs=2))
    assert threaded.config.n_jobs == 2
    assert pipeline_hash(first) == pipeline_hash(threaded)
    assert pipeline_hash(first) != pipeline_hash(fit_pipeline(small, tiny_config(seed=12)))


def test_prediction_rows():
    (row,) = prediction_rows(["a"], [6.7], [0.8], 0.8)
    assert row.predicted_success is True
    assert row.funding == pytest.approx(10 ** 6.7)
    assert row.funding_class is FundingClass.ONE_TO_TEN_M
    assert not row.low_range

    (row,) = prediction_rows(["b"], [4.5], [0.79], 0.8)
    assert row.predicted_success is False
    assert row.funding_class is FundingClass.UNDER_1M
    assert row.low_range

    low, high = prediction_rows(["c", "d"], [-3.0, 400.0], [0.1, 0.99], 0.5)
    assert low.funding == 1.0
    assert high.funding == 1e300
    assert high.funding_class is FundingClass.OVER_1B


def test_predictions_cover_every_record(split, pipeline):
    records = split.eval_subsets[0].records
    rows = pipeline.predict(records)
    assert [r.id for r in rows] == [r.id for r in records]
    for row in rows:
        assert row.ok
        assert row.funding >= 1.0
        assert 0.0 <= row.success_prob <= 1.0
        assert row.predicted_success == (row.success_prob >= pipeline.threshold)
    assert all(r.predicted_success for r in pipeline.predict(records, threshold=0.0))


def test_success_probability_increases_with_funding(split, pipeline):
    assert pipeline.calibrator.coefficient > 0
    rows = sorted(pipeline.predict(split.eval_subsets[1].records), key=lambda r: r.funding)
    probabilities = [r.success_prob for r in rows]
    assert probabilities == sorted(probabilities)


def test_failing_record_does_not_stop_the_batch(split, pipeline):
    records = list(split.eval_subsets[0].records[:5])
    broken = FounderRecord("broken", {**records[0].values, "education_level": "Kindergarten"}, records[0].raw_text)
    rows = predict(pipeline, records[:2] + [broken] + records[2:])
    assert [r.id for r in rows] == [r.id for r in records[:2]] + ["broken"] + [r.id for r in records[2:]]
    assert not rows[2].ok
    assert "Kindergarten" in rows[2].error
    assert all(r.ok for i, r in enumerate(rows) if i != 2)


def test_schema_mismatch_is_refused(split, pipeline):
    subset = split.eval_subsets[0]
    narrowed = subset.with_schema(subset.schema.without(names=["serial_founder"]))
    with pytest.raises(SchemaMismatchError):
        predict_dataset(pipeline, narrowed)


def test_unfitted_calibrator_is_refused(split, pipeline):
    with pytest.raises(StateError):
        predict(replace(pipeline, calibrator=LogisticModel()), split.eval_subsets[0].records)


def test_training_set_checks(small):
    positives = [r.id for r in small.records if small.labels[r.id].success]
    negatives = [r.id for r in small.records if not small.labels[r.id].success]
    with pytest.raises(FitError):
        fit_pipeline(small.subset(negatives), tiny_config())
    with pytest.raises(ParamError):
        fit_pipeline(small.subset(positives[:2] + negatives[:50]), tiny_config())
    textual_only = small.with_schema(small.schema.without(branches=["categorical", "continuous", "boolean"]))
    with pytest.raises(FitError):
        fit_pipeline(textual_only, tiny_config())


def test_single_base_learner(small):
    pipeline = fit_pipeline(small, tiny_config(use_gbt=False))
    assert pipeline.gbt is None
    assert pipeline.channels == ["rf"]
    assert pipeline.meta_columns[0] == "rf"
    assert all(row.ok for row in pipeline.predict(small.records[:20]))


def test_average_meta_mode(small):
    pipeline = fit_pipeline(small, tiny_config(meta_mode=MetaMode.AVERAGE))
    assert pipeline.meta is None
    matrix = encode_dataset(small, pipeline.encoder_state, pipeline.provider)
    expected = (pipeline.gbt.predict(matrix.tabular) + pipeline.rf.predict(matrix.tabular)) / 2
    np.testing.assert_allclose(pipeline.log_funding(matrix), expected, rtol=0, atol=1e-12)


def test_predictions_file(tmp_path, split, pipeline):
    rows = pipeline.predict(split.eval_subsets[2].records)
    assert list(predictions_frame(rows).columns) == PREDICTION_COLUMNS
    path = tmp_path / "out" / "predictions.csv"
    save_predictions(rows, path)
    frame = pd.read_csv(path, float_precision="round_trip")
    assert frame["id"].astype(str).tolist() == [r.id for r in rows]
    assert set(frame["predicted_success"]) <= {0, 1}
    np.testing.assert_array_equal(frame["success_prob"].to_numpy(), [r.success_prob for r in rows])
