#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest

from conftest import fast_config
from constants import AblationSuite, BoostingParams, ForestParams, GeneratorConfig, MetaMode, SplitSpec
from evalkit import FULL, AblationVariant, run_ablation, run_variants, suite_variants
from evalkit.ablation import AblationRow
from synth import generate_dataset
from utils.errors import AblationError, ParamError


def tiny_config(**changes):
    return fast_config(
        gbt=BoostingParams(n_trees=10, max_depth=2, learning_rate=0.2, min_samples_leaf=5, subsample=0.8),
        rf=ForestParams(n_trees=5, max_depth=4, min_samples_leaf=3),
        embedding_dim=8,
        **changes,
    )


@pytest.fixture(scope="module")
def small():
    return generate_dataset(GeneratorConfig(n_records=600, seed=21))


@pytest.mark.parametrize(
    "suite, names",
    [
        (AblationSuite.LLM_FEATURES, ["without_llm_features"]),
        (AblationSuite.EMBEDDINGS, ["embeddings_mock", "embeddings_none"]),
        (AblationSuite.MODEL_COMPONENTS, ["without_gbt", "without_rf", "without_meta"]),
        (
            AblationSuite.FEATURE_CATEGORIES,
            ["without_categorical", "without_continuous", "without_boolean", "without_textual"],
        ),
    ],
)
def test_suite_variants(suite, names):
    assert [v.name for v in suite_variants(suite)] == names
    assert [v.name for v in suite_variants(suite.value)] == names


def test_unknown_suite():
    with pytest.raises(ValueError):
        suite_variants("hyperparameters")


def test_variant_schemas(schema):
    reduced = suite_variants("llm_features")[0].schema_for(schema)
    assert reduced.counts()["llm_derived"] == 0
    assert len(reduced) == schema.counts()["deterministic"]
    with pytest.raises(AblationError):
        AblationVariant("nothing", drop_branches=("categorical", "continuous", "boolean", "textual")).schema_for(schema)
    with pytest.raises(AblationError):
        AblationVariant("text_only", drop_branches=("categorical", "continuous", "boolean")).schema_for(schema)


def test_variant_configs():
    config = tiny_config()
    assert AblationVariant("no_rf", use_rf=False).config_for(config, 5).use_rf is False
    assert AblationVariant("avg", meta_mode=MetaMode.AVERAGE).config_for(config, 5).meta_mode is MetaMode.AVERAGE
    assert AblationVariant("none", embedding_provider="none").config_for(config, 5).embedding_provider == "none"
    with pytest.raises(AblationError):
        AblationVariant("bare", use_gbt=False, use_rf=False).config_for(config, 5)
    with pytest.raises(AblationError):
        AblationVariant("no_gbt", use_gbt=False).config_for(tiny_config(use_rf=False), 5)


def test_embeddings_suite(small):
    result = run_ablation("embeddings", small, tiny_config())
    assert result.suite == "embeddings"
    assert result.full.variant == FULL
    assert [row.variant for row in result.rows] == ["embeddings_mock", "embeddings_none"]
    for row in result.rows:
        assert row.n == result.full.n
        assert row.split_fingerprint == result.full.split_fingerprint
        assert row.delta_recall == pytest.approx(row.recall - result.full.recall)
        full_multiple = result.full.precision_multiple or 0.0
        assert row.delta_multiple == pytest.approx((row.precision_multiple or 0.0) - full_multiple)
    assert result.to_dict()["rows"][1]["variant"] == "embeddings_none"


def test_ablation_is_deterministic(small):
    variants = [AblationVariant("without_meta", meta_mode=MetaMode.AVERAGE)]
    first = run_variants(small, variants, tiny_config(), suite="model_components")
    second = run_variants(small, variants, tiny_config(), suite="model_components", n_jobs=2)
    assert first.to_dict() == second.to_dict()


def test_ablation_needs_an_evaluation_subset(small):
    with pytest.raises(ParamError):
        run_variants(small, [], tiny_config(), split_spec=SplitSpec(500, 0, 0))


def test_undefined_precision_row():
    row = AblationRow("v", n=10, baseline_rate=0.1, precision=None, precision_multiple=None, recall=0.0)
    assert not row.precision_defined
    assert row.to_dict()["precision_defined"] is False
