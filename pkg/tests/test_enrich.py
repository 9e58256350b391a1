#!/usr/bin/env python
# -*- coding: utf-8 -*-

import json

import httpx
import pytest

from constants import EnrichmentStatus
from enrich import (
    EnrichmentCache,
    ExternalEnrichmentProvider,
    MockEnrichmentProvider,
    NullEnrichmentProvider,
    build_prompt,
    cache_key,
    cached_enrich,
    enrich_dataset,
    enrich_record,
    make_enrichment_provider,
    score_text,
    validate_enrichment,
)
from schema import DOMAIN_EXPERTISE_LEVELS, Dataset, FounderRecord
from utils.errors import ParamError, ProviderError


class CountingProvider(MockEnrichmentProvider):
    def __init__(self):
        self.calls = 0

    def complete(self, feature, prompt, allowed):
        self.calls += 1
        return super().complete(feature, prompt, allowed)


def _profile(text, record_id="p1"):
    return FounderRecord(record_id, {}, {"profile_text": text, "description": "A startup."})


def test_validate_accepts_labels_and_integers(schema):
    decl = schema.get("domain_expertise")
    assert validate_enrichment(decl, "Strong Alignment").parsed_value == 3
    assert validate_enrichment(decl, " moderate alignment. ").parsed_value == 2
    assert validate_enrichment(decl, "1").parsed_value == 1


def test_validate_never_clamps(schema):
    decl = schema.get("skill_relevance")
    result = validate_enrichment(decl, "7")
    assert result.status is EnrichmentStatus.REJECTED
    assert result.parsed_value is None
    assert result.raw_response == "7"
    assert validate_enrichment(decl, "extremely relevant").status is EnrichmentStatus.REJECTED


def test_validate_rejects_deterministic_features(schema):
    with pytest.raises(ParamError):
        validate_enrichment(schema.get("founder_age"), "3")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("Ten years in fintech, 10 years of payments work.", "Strong Alignment"),
        ("Solid experience in retail logistics.", "Moderate Alignment"),
        ("Some exposure to hospital software.", "Weak Alignment"),
        ("No industry overlap with the product.", "No alignment"),
        ("", "No alignment"),
        ("Domain expertise: Moderate Alignment. Deep expertise elsewhere.", "Moderate Alignment"),
    ],
)
def test_domain_expertise_keyword_rules(text, expected):
    assert score_text("domain_expertise", DOMAIN_EXPERTISE_LEVELS, text) == expected


def test_mock_provider_reads_only_the_profile(schema):
    decl = schema.get("mentions_revenue")
    prompt = build_prompt(decl, "We have paying customers.")
    assert MockEnrichmentProvider().complete(decl.name, prompt, decl.levels) == "yes"
    prompt = build_prompt(decl, "Pre-launch.")
    assert MockEnrichmentProvider().complete(decl.name, prompt, decl.levels) == "no"


def test_enrich_record_fills_every_llm_feature(schema):
    results = enrich_record(_profile("Technical depth: high. Promoted twice at Google."), schema,
                            MockEnrichmentProvider())
    assert list(results) == [d.name for d in schema.llm_derived]
    assert all(r.ok for r in results.values())
    assert results["technical_depth"].parsed_value == 3
    assert results["career_progression_upward"].parsed_value == 1
    assert results["top_company_alumni_signal"].parsed_value == 1


def test_provider_errors_do_not_abort(schema):
    record = _profile("anything")
    results = enrich_record(record, schema, NullEnrichmentProvider())
    assert {r.status for r in results.values()} == {EnrichmentStatus.PROVIDER_ERROR}


def test_cache_avoids_second_call(schema, dataset, tmp_path):
    small = dataset.subset(dataset.ids[:20])
    path = tmp_path / "cache.jsonl"
    first = CountingProvider()
    enriched, summary = enrich_dataset(small, first, EnrichmentCache(path))
    assert first.calls == summary.provider_calls > 0
    assert summary.cache_hits == 0

    second = CountingProvider()
    again, summary = enrich_dataset(small, second, EnrichmentCache(path))
    assert second.calls == 0
    assert summary.provider_calls == 0
    assert again.fingerprint() == enriched.fingerprint()


def test_identical_prompts_are_asked_once(schema):
    records = [_profile("Technical depth: low.", "a"), _profile("Technical depth: low.", "b")]
    provider = CountingProvider()
    enrich_dataset(Dataset(schema, records), provider, features=["technical_depth"])
    assert provider.calls == 1


def test_cached_enrich_reuses_answers(schema):
    record = _profile("Technical depth: medium.")
    cache = EnrichmentCache()
    provider = CountingProvider()
    first = cached_enrich(record, schema, provider, cache, features=["technical_depth"])
    second = cached_enrich(record, schema, provider, cache, features=["technical_depth"])
    assert provider.calls == 1
    assert not first["technical_depth"].from_cache
    assert second["technical_depth"].from_cache
    assert second["technical_depth"].parsed_value == first["technical_depth"].parsed_value
    assert (cache.hits, len(cache)) == (1, 1)


def test_corrupt_cache_lines_are_skipped(tmp_path):
    path = tmp_path / "cache.jsonl"
    key = cache_key("f", "p", "mock")
    path.write_text("not json\n" + json.dumps({"key": key, "feature": "f", "response": "3"}) + "\n")
    cache = EnrichmentCache(path)
    assert cache.corrupt_lines == 1
    assert cache.get(key) == "3"


def test_cache_key_depends_on_provider():
    assert cache_key("f", "p", "mock") != cache_key("f", "p", "external:gpt")


def test_results_do_not_depend_on_workers(dataset):
    small = dataset.subset(dataset.ids[:30])
    serial, _ = enrich_dataset(small, MockEnrichmentProvider(), n_jobs=1)
    threaded, _ = enrich_dataset(small, MockEnrichmentProvider(), n_jobs=4)
    assert serial.fingerprint() == threaded.fingerprint()


def test_external_provider_over_http(schema):
    seen = []

    def handler(request):
        body = json.loads(request.content)
        seen.append(body)
        return httpx.Response(200, json={"answer": "Strong Alignment"})

    provider = ExternalEnrichmentProvider("https://llm.example/v1/enrich", api_key="secret",
                                          transport=httpx.MockTransport(handler))
    results = enrich_record(_profile("text"), schema, provider, features=["domain_expertise"])
    provider.close()
    assert results["domain_expertise"].parsed_value == 3
    assert seen[0]["feature"] == "domain_expertise"
    assert "Strong Alignment" in seen[0]["allowed"]


def test_external_provider_retries_three_times(schema):
    attempts = []

    def handler(request):
        attempts.append(request)
        return httpx.Response(503)

    provider = ExternalEnrichmentProvider("https://llm.example/v1/enrich", transport=httpx.MockTransport(handler))
    with pytest.raises(ProviderError):
        provider.complete("domain_expertise", "prompt", DOMAIN_EXPERTISE_LEVELS)
    assert len(attempts) == 3

    results = enrich_record(_profile("text"), schema, provider, features=["domain_expertise"])
    assert results["domain_expertise"].status is EnrichmentStatus.PROVIDER_ERROR


@pytest.mark.parametrize("payload", [["x"], "Strong Alignment", 3])
def test_external_provider_rejects_non_object_bodies(schema, payload):
    attempts = []

    def handler(request):
        attempts.append(request)
        return httpx.Response(200, json=payload)

    provider = ExternalEnrichmentProvider("https://llm.example/v1/enrich", transport=httpx.MockTransport(handler))
    results = enrich_record(_profile("text"), schema, provider, features=["domain_expertise"])
    provider.close()
    assert results["domain_expertise"].status is EnrichmentStatus.PROVIDER_ERROR
    assert len(attempts) == 3


def test_external_provider_needs_endpoint(monkeypatch):
    monkeypatch.delenv("FOUNDERCAST_LLM_ENDPOINT", raising=False)
    with pytest.raises(ProviderError):
        make_enrichment_provider("external")


def test_provider_selection():
    assert isinstance(make_enrichment_provider("mock"), MockEnrichmentProvider)
    assert isinstance(make_enrichment_provider("none"), NullEnrichmentProvider)
    with pytest.raises(ValueError):
        make_enrichment_provider("gpt")
