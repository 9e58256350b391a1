#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import pytest

from constants import CLASS_SUCCESS_PROBABILITIES, EnrichmentStatus, FundingClass, GeneratorConfig, UNSUCCESSFUL_FUNDING_RANGE
from core import success_by_class
from enrich import MockEnrichmentProvider, enrich_dataset
from schema import label_success
from synth import FUNDING_CAP, generate_dataset, generate_with_truth, planted_importance, sampler_for, write_truth
from utils import load_json
from utils.errors import GeneratorError, ParamError


def test_generation_is_deterministic(schema):
    config = GeneratorConfig(n_records=300, seed=4)
    assert generate_dataset(config, schema).fingerprint() == generate_dataset(config, schema).fingerprint()


def test_output_does_not_depend_on_workers(schema):
    config = GeneratorConfig(n_records=300, seed=4, block_size=64)
    serial = generate_dataset(config, schema, n_jobs=1)
    parallel = generate_dataset(config, schema, n_jobs=2)
    assert serial.fingerprint() == parallel.fingerprint()


def test_seed_changes_output(schema):
    a = generate_dataset(GeneratorConfig(n_records=300, seed=1), schema)
    b = generate_dataset(GeneratorConfig(n_records=300, seed=2), schema)
    assert a.fingerprint() != b.fingerprint()


def test_positive_rate_within_tolerance(dataset, truth):
    assert abs(dataset.success_rate - 0.085) <= 0.007
    assert truth.realized_rate == pytest.approx(dataset.success_rate)


def test_labels_agree_with_outcomes(dataset):
    low, high = UNSUCCESSFUL_FUNDING_RANGE
    for record in dataset.records:
        label = dataset.labels[record.id]
        assert label_success(record.total_raised, record.ipo_valuation, record.acquisition_price) == label.success
        if not label.success:
            assert low <= label.funding <= high
        else:
            assert label.funding <= FUNDING_CAP
    assert dataset.violations == {}


def test_planted_importance_ranking():
    ranking = planted_importance(GeneratorConfig())
    names = [name for name, _ in ranking]
    assert names[:2] == ["category_list", "number_of_founders"]
    assert sum(share for _, share in ranking) == pytest.approx(1.0, abs=1e-12)
    shares = dict(ranking)
    ratio = shares["number_of_founders"] / shares["education_level"]
    assert 8.0 < ratio < 12.0


def test_planted_importance_matches_least_squares_oracle(schema):
    config = GeneratorConfig(n_records=3000, seed=9, noise_sigma=0.0)
    dataset, truth = generate_with_truth(config, schema)
    names = list(config.signal_weights)
    rows = [
        r for r in dataset.records
        if dataset.labels[r.id].success and dataset.labels[r.id].funding < FUNDING_CAP
    ]
    X = np.array([[float(r.values[n]) for n in names] for r in rows])
    y = np.log10([dataset.labels[r.id].funding for r in rows])
    design = np.column_stack([np.ones(len(rows)), X])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    assert coef[0] == pytest.approx(truth.offset, abs=1e-6)

    raw = {}
    for name, weight in zip(names, coef[1:]):
        decl = schema.get(name)
        raw[name] = abs(weight) * sampler_for(name, decl.branch, len(decl.levels)).std
    oracle = sorted(raw, key=lambda n: (-raw[n], n))
    assert oracle == [name for name, _ in truth.importance]


def test_latent_class_frequencies_follow_planted_probabilities(dataset, truth):
    table = success_by_class(10.0 ** truth.latent, dataset.success())
    for fc in FundingClass:
        row = table[fc]
        if row.n >= 300:
            assert abs(row.success_probability - CLASS_SUCCESS_PROBABILITIES[fc]) <= 0.05


def test_raw_profiles_enrich_back_to_planted_values(schema):
    planted = generate_dataset(GeneratorConfig(n_records=200, seed=3), schema)
    raw = generate_dataset(GeneratorConfig(n_records=200, seed=3, emit_llm_values=False), schema)
    assert all(raw.records[0].values[d.name] is None for d in schema.llm_derived)

    enriched, summary = enrich_dataset(raw, MockEnrichmentProvider())
    assert summary.count(EnrichmentStatus.REJECTED) == 0
    assert enriched.fingerprint() == planted.fingerprint()


def test_unreachable_positive_rate(schema):
    with pytest.raises(GeneratorError):
        generate_dataset(GeneratorConfig(n_records=100, positive_rate=0.005), schema)


def test_weight_on_unknown_feature(schema):
    with pytest.raises(GeneratorError):
        generate_dataset(GeneratorConfig(n_records=100, signal_weights={"moon_phase": 1.0}), schema)


def test_config_validation():
    with pytest.raises(ParamError):
        GeneratorConfig(noise_sigma=-0.1)
    with pytest.raises(ParamError):
        GeneratorConfig(positive_rate=1.0)
    decreasing = dict(CLASS_SUCCESS_PROBABILITIES)
    decreasing[FundingClass.OVER_1B] = 0.5
    with pytest.raises(ParamError):
        GeneratorConfig(class_success_probs=decreasing)


def test_config_round_trip():
    config = GeneratorConfig(n_records=10, seed=3)
    assert GeneratorConfig.from_dict(config.to_dict()) == config


def test_truth_sidecar(truth, tmp_path):
    write_truth(truth, tmp_path / "truth.json")
    data = load_json(tmp_path / "truth.json")
    assert data["offset"] == truth.offset
    assert "latent" not in data
    assert data["importance"][0][0] == "category_list"
