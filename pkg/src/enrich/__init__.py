#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Enrichment.

This module turns unstructured profile text into the schema's LLM-derived
features:
- A provider contract with a deterministic keyword mock, a disabled provider
  and an HTTP adapter
- Validation of raw answers against the declared domain
- A persistent JSON-lines answer cache
"""

from .keywords import KEYWORD_RULES, feature_label, cue_phrase, generic_cue, score_text
from .providers import (
    PROFILE_MARKER,
    EnrichmentProvider,
    MockEnrichmentProvider,
    NullEnrichmentProvider,
    ExternalEnrichmentProvider,
    make_enrichment_provider,
)
from .cache import EnrichmentCache, cache_key
from .enrich import (
    EnrichmentResult,
    EnrichmentSummary,
    validate_enrichment,
    build_prompt,
    enrich_record,
    cached_enrich,
    apply_enrichment,
    enrich_dataset,
)

__all__ = [
    "KEYWORD_RULES",
    "feature_label",
    "cue_phrase",
    "generic_cue",
    "score_text",
    "PROFILE_MARKER",
    "EnrichmentProvider",
    "MockEnrichmentProvider",
    "NullEnrichmentProvider",
    "ExternalEnrichmentProvider",
    "make_enrichment_provider",
    "EnrichmentCache",
    "cache_key",
    "EnrichmentResult",
    "EnrichmentSummary",
    "validate_enrichment",
    "build_prompt",
    "enrich_record",
    "cached_enrich",
    "apply_enrichment",
    "enrich_dataset",
]
