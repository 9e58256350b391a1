#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Enrichment providers.

A provider answers one question about one profile: given the feature name,
the prompt and the declared answer domain, it returns a raw answer string
or raises :class:`ProviderError`. Validation happens in the caller.

The external provider talks JSON over HTTP and reads its configuration from
the environment:

- ``FOUNDERCAST_LLM_ENDPOINT``: URL receiving ``POST`` requests
- ``FOUNDERCAST_LLM_API_KEY``: bearer token (optional, never logged)
- ``FOUNDERCAST_LLM_MODEL``: model name forwarded in the request
"""

import logging
import os
from abc import ABC, abstractmethod
from typing import Optional, Sequence, Tuple, Union
from urllib.parse import urlsplit

import httpx

from constants import ProviderKind
from utils.errors import ProviderError
from .keywords import score_text

logger = logging.getLogger(__name__)

PROFILE_MARKER = "### PROFILE ###"

ENDPOINT_ENV = "FOUNDERCAST_LLM_ENDPOINT"
API_KEY_ENV = "FOUNDERCAST_LLM_API_KEY"
MODEL_ENV = "FOUNDERCAST_LLM_MODEL"

MAX_ATTEMPTS = 3

Levels = Sequence[Tuple[str, int]]


class EnrichmentProvider(ABC):
    """Answers enrichment questions; implementations must be total."""

    provider_id: str = "abstract"

    @abstractmethod
    def complete(self, feature: str, prompt: str, allowed: Levels) -> str:
        """Raw answer for ``feature``.

        Args:
            feature: feature name
            prompt: full prompt text, profile after :data:`PROFILE_MARKER`
            allowed: declared ``(label, value)`` answer domain

        Raises:
            ProviderError: the provider could not answer
        """

    def close(self):
        pass

    def __repr__(self):
        return f"{type(self).__name__}({self.provider_id!r})"


class MockEnrichmentProvider(EnrichmentProvider):
    """Pure keyword-rule provider; reads only the profile part of the prompt."""

    provider_id = "mock-keywords-v1"

    def complete(self, feature: str, prompt: str, allowed: Levels) -> str:
        _, marker, profile = prompt.partition(PROFILE_MARKER)
        if not marker:
            profile = prompt
        return score_text(feature, allowed, profile)


class NullEnrichmentProvider(EnrichmentProvider):
    """Provider that never answers; every feature ends as a provider error."""

    provider_id = "none"

    def complete(self, feature: str, prompt: str, allowed: Levels) -> str:
        raise ProviderError("enrichment disabled (provider 'none')")


class ExternalEnrichmentProvider(EnrichmentProvider):
    """HTTP adapter with a fixed three-attempt policy.

    Request body: ``{"model", "feature", "prompt", "allowed": [labels]}``;
    response body: ``{"answer": "<text>"}``.
    """

    def __init__(
        self,
        endpoint: str,
        api_key: Optional[str] = None,
        model: str = "default",
        timeout: float = 30.0,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.provider_id = f"external:{model}"
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self._client = httpx.Client(headers=headers, timeout=timeout, transport=transport)

    @classmethod
    def from_env(cls, transport: Optional[httpx.BaseTransport] = None) -> "ExternalEnrichmentProvider":
        endpoint = os.environ.get(ENDPOINT_ENV)
        if not endpoint:
            raise ProviderError(f"{ENDPOINT_ENV} is not set")
        return cls(
            endpoint,
            api_key=os.environ.get(API_KEY_ENV),
            model=os.environ.get(MODEL_ENV, "default"),
            transport=transport,
        )

    def complete(self, feature: str, prompt: str, allowed: Levels) -> str:
        payload = {
            "model": self.model,
            "feature": feature,
            "prompt": prompt,
            "allowed": [label for label, _ in allowed],
        }
        last_error = None
        for attempt in range(1, MAX_ATTEMPTS + 1):
            try:
                response = self._client.post(self.endpoint, json=payload)
                response.raise_for_status()
                body = response.json()
                if not isinstance(body, dict):
                    raise ProviderError("response is not a JSON object")
                answer = body.get("answer")
                if answer is None:
                    raise ProviderError("response has no 'answer' field")
                return str(answer)
            except (httpx.HTTPError, ValueError, ProviderError) as e:
                last_error = e
                logger.warning(
                    "enrichment request to %s failed (attempt %d/%d): %s",
                    _safe_url(self.endpoint), attempt, MAX_ATTEMPTS, type(e).__name__,
                )
        raise ProviderError(f"{MAX_ATTEMPTS} attempts failed: {last_error}")

    def close(self):
        self._client.close()


def _safe_url(url: str) -> str:
    parts = urlsplit(url)
    return f"{parts.scheme}://{parts.hostname or ''}{parts.path}"


def make_enrichment_provider(kind: Union[str, ProviderKind]) -> EnrichmentProvider:
    """Provider for a ``--provider`` selection."""
    kind = ProviderKind.from_string(kind)
    if kind is ProviderKind.MOCK:
        return MockEnrichmentProvider()
    if kind is ProviderKind.NONE:
        return NullEnrichmentProvider()
    return ExternalEnrichmentProvider.from_env()
