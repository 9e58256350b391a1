#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Shared fixtures: small generated datasets and a fast pipeline configuration.

The session-scoped pipeline is fitted once and reused by every test that
only reads it.
"""

import numpy as np
import pytest

from constants import BoostingParams, ForestParams, GeneratorConfig, PipelineConfig, SplitSpec
from core import fit_pipeline
from schema import FounderRecord, default_schema, split_dataset
from synth import generate_with_truth


def fast_config(**changes) -> PipelineConfig:
    """Pipeline small enough to fit in a few seconds."""
    config = PipelineConfig(
        gbt=BoostingParams(n_trees=30, max_depth=3, learning_rate=0.1, min_samples_leaf=5, subsample=0.8),
        rf=ForestParams(n_trees=20, max_depth=6, min_samples_leaf=3),
        oof_folds=3,
        embedding_dim=16,
        seed=11,
    )
    return config.with_overrides(**changes) if changes else config


@pytest.fixture(scope="session")
def schema():
    return default_schema()


@pytest.fixture(scope="session")
def generated(schema):
    """(dataset, truth) of 2,000 default-generator records."""
    return generate_with_truth(GeneratorConfig(n_records=2000, seed=7), schema)


@pytest.fixture(scope="session")
def dataset(generated):
    return generated[0]


@pytest.fixture(scope="session")
def truth(generated):
    return generated[1]


@pytest.fixture(scope="session")
def split(dataset):
    return split_dataset(dataset, SplitSpec.scaled(len(dataset), seed=7))


@pytest.fixture(scope="session")
def pipeline(split):
    return fit_pipeline(split.train, fast_config())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def make_record():
    """Factory for hand-written records."""

    def build(record_id="r1", text="", **values):
        return FounderRecord(record_id, values, {"description": text})

    return build
