#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest

from constants import FeatureBranch, FeatureOrigin
from schema import (
    DOMAIN_EXPERTISE_LEVELS,
    EDUCATION_LEVELS,
    SKILL_RELEVANCE_LEVELS,
    FeatureDecl,
    FeatureSchema,
    default_schema,
    load_schema,
    save_schema,
)
from utils.errors import ParamError, SchemaError


def test_default_schema_counts(schema):
    counts = schema.counts()
    assert counts["total"] == 63
    assert counts["deterministic"] == 38
    assert counts["llm_derived"] == 25
    assert counts["textual"] == 1
    for name in ("education_level", "domain_expertise", "skill_relevance", "category_list",
                 "number_of_founders", "previous_startups", "description"):
        assert name in schema


def test_llm_features_are_categorical_or_boolean(schema):
    for decl in schema.llm_derived:
        assert decl.branch in (FeatureBranch.CATEGORICAL, FeatureBranch.BOOLEAN)
        assert decl.prompt


def test_education_and_expertise_levels():
    assert dict(EDUCATION_LEVELS) == {
        "Associate Degree or less": 0,
        "Bachelor's Degree": 1,
        "Master's Degree": 2,
        "Doctoral Degree or more": 3,
    }
    assert dict(DOMAIN_EXPERTISE_LEVELS) == {
        "No alignment": 0,
        "Weak Alignment": 1,
        "Moderate Alignment": 2,
        "Strong Alignment": 3,
    }
    assert [v for _, v in SKILL_RELEVANCE_LEVELS] == [0, 1, 2, 3, 4]


def test_level_lookup_is_case_insensitive(schema):
    decl = schema.get("domain_expertise")
    assert decl.level_value("strong alignment") == 3
    assert decl.level_value("2") == 2
    assert decl.level_value(7) is None
    assert decl.level_value("very strong") is None
    assert schema.get("serial_founder").level_value("true") == 1


def test_categorical_levels_must_be_consecutive():
    with pytest.raises(SchemaError):
        FeatureDecl("bad", FeatureBranch.CATEGORICAL, categorical_levels=(("a", 0), ("b", 2)))
    with pytest.raises(SchemaError):
        FeatureDecl("single", FeatureBranch.CATEGORICAL, categorical_levels=(("a", 0),))


def test_llm_derived_continuous_is_rejected():
    with pytest.raises(SchemaError):
        FeatureDecl("score", FeatureBranch.CONTINUOUS, FeatureOrigin.LLM_DERIVED)


def test_duplicate_names_are_rejected():
    decl = FeatureDecl("x", FeatureBranch.CONTINUOUS)
    with pytest.raises(SchemaError) as info:
        FeatureSchema((decl, decl))
    assert info.value.missing == ["x"]


def test_without_drops_branches_and_origins(schema):
    deterministic = schema.without(origins=[FeatureOrigin.LLM_DERIVED])
    assert len(deterministic) == 38
    no_text = schema.without(branches=["textual"])
    assert "description" not in no_text
    assert len(schema.without(names=["category_list"])) == 62


def test_schema_file_round_trip(schema, tmp_path):
    path = tmp_path / "schema.json"
    save_schema(schema, path)
    loaded = load_schema(path)
    assert loaded.hash == schema.hash
    assert loaded.names == schema.names


def test_malformed_schema_file(tmp_path):
    path = tmp_path / "schema.json"
    path.write_text('{"features": [{"branch": "continuous"}]}')
    with pytest.raises(SchemaError):
        load_schema(path)


def test_default_schema_bounds():
    assert len(default_schema(8, 2)) == 10
    with pytest.raises(ParamError):
        default_schema(n_llm_derived=99)


def test_hash_depends_on_content(schema):
    assert schema.hash != schema.without(names=["description"]).hash
    assert schema.hash == default_schema().hash
