#!/usr/bin/env python
# -*- coding: utf-8 -*-

import json

import pytest

from core import ARTIFACT_VERSION, load_pipeline, pipeline_hash, pipeline_to_dict, save_pipeline
from utils.errors import ArtifactError, SchemaMismatchError


def test_round_trip_predicts_identically(tmp_path, dataset, pipeline):
    path = tmp_path / "pipeline.json"
    digest = save_pipeline(pipeline, path)
    loaded = load_pipeline(path)
    assert digest == pipeline_hash(loaded) == pipeline_hash(pipeline)
    records = dataset.records[:1000]
    for before, after in zip(pipeline.predict(records), loaded.predict(records)):
        assert before == after
    assert loaded.trace.meta.tolist() == pipeline.trace.meta.tolist()


def test_version_and_format_are_checked(tmp_path, pipeline):
    data = pipeline_to_dict(pipeline)
    path = tmp_path / "future.json"
    path.write_text(json.dumps({**data, "version": ARTIFACT_VERSION + 1}))
    with pytest.raises(ArtifactError) as info:
        load_pipeline(path)
    assert "version" in str(info.value)

    path.write_text(json.dumps({**data, "format": "something-else"}))
    with pytest.raises(ArtifactError):
        load_pipeline(path)

    path.write_text(json.dumps({key: value for key, value in data.items() if key != "models"}))
    with pytest.raises(ArtifactError):
        load_pipeline(path)


def test_tampered_schema_is_detected(tmp_path, pipeline):
    data = pipeline_to_dict(pipeline)
    data["schema"]["features"][0]["name"] = "renamed_feature"
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(data))
    with pytest.raises(SchemaMismatchError):
        load_pipeline(path)


def test_unreadable_artifacts(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ArtifactError):
        load_pipeline(broken)
    with pytest.raises(FileNotFoundError):
        load_pipeline(tmp_path / "missing.json")
