#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Enrichment: profile text -> validated values for LLM-derived features.
"""

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from joblib import Parallel, delayed

from constants import EnrichmentStatus, FeatureOrigin
from schema import Dataset, FeatureDecl, FeatureSchema, FounderRecord
from utils.errors import ParamError, ProviderError
from .cache import EnrichmentCache, cache_key
from .providers import PROFILE_MARKER, EnrichmentProvider

logger = logging.getLogger(__name__)

_STRIP = " \t\r\n.\"'`"


@dataclass(frozen=True)
class EnrichmentResult:
    feature: str
    raw_response: Optional[str]
    parsed_value: Optional[int]
    status: EnrichmentStatus
    detail: str = ""
    from_cache: bool = False

    @property
    def ok(self) -> bool:
        return self.status is EnrichmentStatus.OK


@dataclass
class EnrichmentSummary:
    """Batch counters: statuses per feature, provider calls and cache hits."""

    records: int = 0
    provider_calls: int = 0
    cache_hits: int = 0
    by_feature: Dict[str, Dict[str, int]] = field(default_factory=dict)

    def count(self, status: EnrichmentStatus) -> int:
        return sum(counts.get(status.value, 0) for counts in self.by_feature.values())

    def to_dict(self) -> dict:
        return {
            "records": self.records,
            "provider_calls": self.provider_calls,
            "cache_hits": self.cache_hits,
            "totals": {s.value: self.count(s) for s in EnrichmentStatus},
            "by_feature": self.by_feature,
        }


def validate_enrichment(feature: FeatureDecl, raw_response: str) -> EnrichmentResult:
    """Parse a raw answer against the feature's declared domain.

    Accepts an integer literal or a declared level label (case-insensitive);
    anything else, including integers outside the domain, is rejected with
    the raw answer preserved. Values are never clamped.
    """
    if feature.origin is not FeatureOrigin.LLM_DERIVED:
        raise ParamError(f"{feature.name} is not an LLM-derived feature")

    text = str(raw_response).strip(_STRIP)
    value = feature.level_value(text) if text else None
    if value is None:
        return EnrichmentResult(
            feature.name,
            raw_response,
            None,
            EnrichmentStatus.REJECTED,
            f"not in declared domain {list(feature.values)}",
        )
    return EnrichmentResult(feature.name, raw_response, value, EnrichmentStatus.OK)


def build_prompt(feature: FeatureDecl, text: str) -> str:
    """Prompt for one feature; the profile follows :data:`PROFILE_MARKER`."""
    question = feature.prompt or f"Assess the founder's {feature.description or feature.name}."
    answers = ", ".join(f"{label} ({value})" for label, value in feature.levels)
    return (
        f"Feature: {feature.name}\n"
        f"Question: {question}\n"
        f"Answer with exactly one of: {answers}\n"
        f"{PROFILE_MARKER}\n"
        f"{text}"
    )


def _targets(schema: FeatureSchema, features: Optional[Iterable[str]]) -> List[FeatureDecl]:
    if features is None:
        return schema.llm_derived
    return [schema.get(name) for name in features if schema.get(name).origin is FeatureOrigin.LLM_DERIVED]


def _ask(
    provider: EnrichmentProvider,
    feature: FeatureDecl,
    prompt: str,
    cache: Optional[EnrichmentCache],
) -> Tuple[Optional[str], str, bool]:
    """(raw answer or None, error detail, from cache)."""
    key = cache_key(feature.name, prompt, provider.provider_id)
    if cache is not None:
        cached = cache.get(key)
        if cached is not None:
            return cached, "", True
    try:
        raw = provider.complete(feature.name, prompt, feature.levels)
    except ProviderError as e:
        return None, str(e), False
    if cache is not None:
        cache.put(key, feature.name, raw)
    return raw, "", False


def _result(feature: FeatureDecl, answer: Tuple[Optional[str], str, bool]) -> EnrichmentResult:
    raw, detail, from_cache = answer
    if raw is None:
        return EnrichmentResult(
            feature.name, None, None, EnrichmentStatus.PROVIDER_ERROR, detail, from_cache
        )
    result = validate_enrichment(feature, raw)
    if not result.ok:
        logger.warning("rejected %s answer %r", feature.name, raw)
    return EnrichmentResult(
        result.feature, result.raw_response, result.parsed_value, result.status,
        result.detail, from_cache,
    )


def enrich_record(
    record: FounderRecord,
    schema: FeatureSchema,
    provider: EnrichmentProvider,
    features: Optional[Iterable[str]] = None,
    cache: Optional[EnrichmentCache] = None,
) -> Dict[str, EnrichmentResult]:
    """One result per LLM-derived feature, in schema order.

    Provider failures become ``provider_error`` results; they never abort.
    Use :func:`apply_enrichment` to write the ok results into the record.
    """
    results = {}
    for feature in _targets(schema, features):
        prompt = build_prompt(feature, record.text_for(feature.name))
        results[feature.name] = _result(feature, _ask(provider, feature, prompt, cache))
    return results


def cached_enrich(
    record: FounderRecord,
    schema: FeatureSchema,
    provider: EnrichmentProvider,
    cache: EnrichmentCache,
    features: Optional[Iterable[str]] = None,
) -> Dict[str, EnrichmentResult]:
    """:func:`enrich_record` behind a persistent cache."""
    return enrich_record(record, schema, provider, features=features, cache=cache)


def apply_enrichment(record: FounderRecord, results: Dict[str, EnrichmentResult]) -> FounderRecord:
    """Record with ok values written; other features are left untouched."""
    updates = {name: r.parsed_value for name, r in results.items() if r.ok}
    return record.with_values(updates) if updates else record


def enrich_dataset(
    dataset: Dataset,
    provider: EnrichmentProvider,
    cache: Optional[EnrichmentCache] = None,
    features: Optional[Iterable[str]] = None,
    n_jobs: int = 1,
) -> Tuple[Dataset, EnrichmentSummary]:
    """Enrich every record.

    Identical (feature, prompt) pairs are asked once per batch; calls run in
    a thread pool of ``n_jobs`` workers and are merged back by record and
    feature, so the output does not depend on ``n_jobs``.
    """
    cache = cache if cache is not None else EnrichmentCache()
    targets = _targets(dataset.schema, features)

    prompts: Dict[Tuple[str, str], FeatureDecl] = {}
    per_record = []
    for record in dataset.records:
        keys = []
        for feature in targets:
            key = (feature.name, build_prompt(feature, record.text_for(feature.name)))
            prompts.setdefault(key, feature)
            keys.append(key)
        per_record.append(keys)

    unique = list(prompts)
    answers = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_ask)(provider, prompts[key], key[1], cache) for key in unique
    )
    resolved = {key: _result(prompts[key], answer) for key, answer in zip(unique, answers)}

    summary = EnrichmentSummary(records=len(dataset))
    counts: Dict[str, Counter] = defaultdict(Counter)
    records = []
    for record, keys in zip(dataset.records, per_record):
        results = {key[0]: resolved[key] for key in keys}
        for name, result in results.items():
            counts[name][result.status.value] += 1
        records.append(apply_enrichment(record, results))

    for answer in answers:
        if answer[2]:
            summary.cache_hits += 1
        else:
            summary.provider_calls += 1
    summary.by_feature = {
        f.name: {s.value: counts[f.name].get(s.value, 0) for s in EnrichmentStatus}
        for f in targets
    }
    logger.info(
        "enriched %d records: %d provider calls, %d cache hits, %d rejected, %d provider errors",
        len(dataset), summary.provider_calls, summary.cache_hits,
        summary.count(EnrichmentStatus.REJECTED), summary.count(EnrichmentStatus.PROVIDER_ERROR),
    )
    return dataset.with_records(records), summary
