#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import pytest

from constants import FeatureBranch
from encode import (
    EmbeddingProvider,
    HashingEmbeddingProvider,
    NullEmbeddingProvider,
    encode_categorical,
    encode_dataset,
    encode_education,
    encode_records,
    fit_encoder,
    fit_standardizer,
    apply_standardizer,
    embed_text,
    make_embedding_provider,
    tokenize,
)
from encode.encoders import EncoderState
from schema import Dataset, FeatureDecl, FeatureSchema, FounderRecord, Label
from utils.errors import EmbedError, EncodeError, FitError, SchemaMismatchError, UnknownCategory


@pytest.mark.parametrize(
    "label, value",
    [
        ("Associate Degree or less", 0),
        ("Bachelor's Degree", 1),
        ("Master's Degree", 2),
        ("Doctoral Degree or more", 3),
        ("master's degree", 2),
    ],
)
def test_education_mapping(label, value):
    assert encode_education(label) == value


@pytest.mark.parametrize(
    "label, value",
    [("No alignment", 0), ("Weak Alignment", 1), ("Moderate Alignment", 2), ("Strong Alignment", 3)],
)
def test_domain_expertise_mapping(schema, label, value):
    assert encode_categorical(schema.get("domain_expertise"), label) == value


def test_unknown_category():
    with pytest.raises(UnknownCategory) as info:
        encode_education("High School")
    assert "Valid options" in str(info.value)


def test_standardizer():
    mean, std = fit_standardizer([1.0, 2.0, 3.0, 4.0])
    assert mean == 2.5
    assert std == pytest.approx(np.sqrt(1.25), abs=1e-15)
    assert apply_standardizer((mean, std), 2.5) == 0.0
    assert apply_standardizer(fit_standardizer([7.0, 7.0]), 123.0) == 0.0
    with pytest.raises(FitError):
        fit_standardizer([])
    with pytest.raises(EncodeError):
        apply_standardizer((0.0, 1.0), float("inf"))


def test_training_columns_are_z_scored(split):
    provider = make_embedding_provider("mock", 16)
    state = fit_encoder(split.train, provider)
    matrix = encode_dataset(split.train, state, provider)
    n_cat = len(state.categorical)
    for j, (name, _, std) in enumerate(state.continuous):
        column = matrix.tabular[:, n_cat + j]
        assert abs(column.mean()) < 1e-9
        if std > 0:
            assert abs(column.std() - 1.0) < 1e-9
        else:
            assert np.all(column == 0.0)


def test_column_layout(split, schema):
    provider = make_embedding_provider("mock", 8)
    state = fit_encoder(split.train, provider)
    matrix = encode_dataset(split.eval_subsets[0], state, provider)
    n_tab = (len(schema.by_branch(FeatureBranch.CATEGORICAL)) + len(schema.by_branch(FeatureBranch.CONTINUOUS))
             + len(schema.by_branch(FeatureBranch.BOOLEAN)))
    assert matrix.tabular.shape == (len(split.eval_subsets[0]), n_tab)
    assert matrix.embeddings.shape[1] == 8
    assert matrix.embedding_columns[0] == "description__emb0"
    assert matrix.columns == state.columns


def test_encoding_held_out_data_leaves_state_unchanged(split):
    provider = make_embedding_provider("mock", 16)
    state = fit_encoder(split.train, provider)
    before = state.fingerprint()
    for subset in split.eval_subsets:
        encode_dataset(subset, state, provider)
    assert state.fingerprint() == before
    assert EncoderState.from_dict(state.to_dict()) == state


def _tiny_dataset():
    schema = FeatureSchema((
        FeatureDecl("stage", FeatureBranch.CATEGORICAL, categorical_levels=(("seed", 0), ("series_a", 1), ("series_b", 2))),
        FeatureDecl("age", FeatureBranch.CONTINUOUS),
        FeatureDecl("remote", FeatureBranch.BOOLEAN),
        FeatureDecl("pitch", FeatureBranch.TEXTUAL),
    ))
    records = [
        FounderRecord("a", {"stage": 1, "age": 30.0, "remote": 1}, {"pitch": "robots"}),
        FounderRecord("b", {"stage": "series_a", "age": 40.0, "remote": 0}, {"pitch": "robots for farms"}),
        FounderRecord("c", {"stage": 2, "age": 50.0, "remote": None}, {"pitch": ""}),
    ]
    labels = {"a": Label(1e6, False), "b": Label(2e6, False), "c": Label(9e8, True)}
    return Dataset(schema, records, labels)


def test_missing_values_are_imputed():
    data = _tiny_dataset()
    provider = NullEmbeddingProvider()
    state = fit_encoder(data, provider)
    assert dict(state.categorical) == {"stage": 1}
    missing = FounderRecord("m", {}, {})
    matrix = encode_records([missing], data.schema, state, provider)
    assert matrix.tabular.tolist() == [[1.0, 0.0, 0.0]]
    assert matrix.embeddings.shape == (1, 0)


def test_declared_unknown_level_is_used_for_missing_values():
    decl = FeatureDecl("sector", FeatureBranch.CATEGORICAL, categorical_levels=(("unknown", 0), ("ai", 1)))
    data = Dataset(FeatureSchema((decl,)), [FounderRecord("a", {"sector": 1}), FounderRecord("b", {"sector": 1})])
    state = fit_encoder(data, NullEmbeddingProvider())
    assert dict(state.categorical) == {"sector": 0}


def test_bad_records_are_collected_or_raised():
    data = _tiny_dataset()
    provider = HashingEmbeddingProvider(4)
    state = fit_encoder(data, provider)
    bad = FounderRecord("bad", {"stage": "ipo"}, {})
    good = data.records[0]
    matrix = encode_records([good, bad], data.schema, state, provider, collect_errors=True)
    assert matrix.ids == ("a",)
    assert "bad" in matrix.errors
    with pytest.raises(UnknownCategory) as info:
        encode_records([bad], data.schema, state, provider)
    assert info.value.record_id == "bad"


def test_schema_mismatch():
    data = _tiny_dataset()
    provider = NullEmbeddingProvider()
    state = fit_encoder(data, provider)
    other = data.schema.without(names=["remote"])
    with pytest.raises(SchemaMismatchError):
        encode_records(data.records, other, state, provider)


def test_continuous_feature_without_values():
    data = _tiny_dataset()
    empty = data.with_records([FounderRecord(r.id, {**r.values, "age": None}, r.raw_text) for r in data.records])
    with pytest.raises(FitError):
        fit_encoder(empty, NullEmbeddingProvider())


def test_hashing_embedding():
    provider = HashingEmbeddingProvider(32)
    vector = provider.embed("Machine learning for farms")
    assert vector.shape == (32,)
    assert np.linalg.norm(vector) == pytest.approx(1.0)
    assert np.array_equal(vector, HashingEmbeddingProvider(32).embed("machine LEARNING for farms!"))
    assert np.all(provider.embed("") == 0.0)
    rows = provider.embed_many(["a b", "a b", "c"])
    assert np.array_equal(rows[0], rows[1])


def test_embedding_provider_selection():
    assert make_embedding_provider("mock", 12).dim == 12
    narrow = make_embedding_provider("mock-8")
    assert (narrow.dim, narrow.provider_id) == (8, "mock-8")
    assert make_embedding_provider("none").dim == 0


def test_tokenize():
    assert tokenize("AI-first, founder's tools") == ["ai", "first", "founder's", "tools"]


class _Broken(EmbeddingProvider):
    provider_id = "broken"
    dim = 3

    def __init__(self, output):
        self.output = output

    def embed(self, text):
        if isinstance(self.output, Exception):
            raise self.output
        return self.output


def test_embed_text_checks_provider_output():
    vector = embed_text("Soil sensors", HashingEmbeddingProvider(16))
    assert vector.shape == (16,)
    assert embed_text("anything", _Broken([0.0, 1.0, 2.0])).tolist() == [0.0, 1.0, 2.0]
    for output in ([1.0, 2.0], [0.0, float("nan"), 1.0], RuntimeError("timeout")):
        with pytest.raises(EmbedError):
            embed_text("anything", _Broken(output))
