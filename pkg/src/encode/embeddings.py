#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Text embedding providers.

``mock`` is a deterministic hashed bag-of-tokens projection: lowercase
tokens are hashed with sha256 into a signed bucket of a ``dim``-wide vector,
which is then unit-normalized. Empty text embeds to the zero vector.
``mock-<dim>`` selects the same projection at another width and ``none``
disables the embedding block (width 0).

The external provider reads ``FOUNDERCAST_EMBEDDING_ENDPOINT`` and
``FOUNDERCAST_EMBEDDING_API_KEY`` from the environment.
"""

import hashlib
import logging
import os
import re
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Sequence

import httpx
import numpy as np

from constants import ProviderKind
from utils.errors import EmbedError, ParamError

logger = logging.getLogger(__name__)

ENDPOINT_ENV = "FOUNDERCAST_EMBEDDING_ENDPOINT"
API_KEY_ENV = "FOUNDERCAST_EMBEDDING_API_KEY"

MAX_ATTEMPTS = 3

_TOKEN = re.compile(r"[a-z0-9']+")


def tokenize(text: str) -> List[str]:
    return _TOKEN.findall(text.lower())


class EmbeddingProvider(ABC):
    """Maps text to a fixed-width real vector."""

    provider_id: str = "abstract"
    dim: int = 0

    @abstractmethod
    def embed(self, text: str) -> np.ndarray:
        pass

    def embed_many(self, texts: Sequence[str]) -> np.ndarray:
        """Row per text; identical texts are embedded once."""
        seen: Dict[str, np.ndarray] = {}
        rows = np.zeros((len(texts), self.dim))
        for i, text in enumerate(texts):
            if text not in seen:
                seen[text] = embed_text(text, self)
            rows[i] = seen[text]
        return rows

    def __repr__(self):
        return f"{type(self).__name__}({self.provider_id!r}, dim={self.dim})"


class HashingEmbeddingProvider(EmbeddingProvider):
    def __init__(self, dim: int = 64, provider_id: Optional[str] = None):
        if dim < 1:
            raise ParamError(f"Invalid embedding dim: {dim}. Must be >= 1")
        self.dim = dim
        self.provider_id = provider_id or f"mock-{dim}"

    def embed(self, text: str) -> np.ndarray:
        vector = np.zeros(self.dim)
        for token in tokenize(text):
            digest = hashlib.sha256(token.encode("utf-8")).digest()
            index = int.from_bytes(digest[:4], "big") % self.dim
            vector[index] += 1.0 if digest[4] & 1 else -1.0
        norm = np.linalg.norm(vector)
        return vector / norm if norm > 0 else vector


class NullEmbeddingProvider(EmbeddingProvider):
    provider_id = "none"
    dim = 0

    def embed(self, text: str) -> np.ndarray:
        return np.zeros(0)


class ExternalEmbeddingProvider(EmbeddingProvider):
    """HTTP adapter: ``{"input": text, "dim": d}`` -> ``{"embedding": [...]}``."""

    def __init__(
        self,
        endpoint: str,
        dim: int,
        api_key: Optional[str] = None,
        timeout: float = 30.0,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        self.endpoint = endpoint
        self.dim = dim
        self.provider_id = "external"
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self._client = httpx.Client(headers=headers, timeout=timeout, transport=transport)

    @classmethod
    def from_env(cls, dim: int, transport: Optional[httpx.BaseTransport] = None):
        endpoint = os.environ.get(ENDPOINT_ENV)
        if not endpoint:
            raise EmbedError(f"{ENDPOINT_ENV} is not set")
        return cls(endpoint, dim, api_key=os.environ.get(API_KEY_ENV), transport=transport)

    def embed(self, text: str) -> np.ndarray:
        last_error = None
        for attempt in range(1, MAX_ATTEMPTS + 1):
            try:
                response = self._client.post(self.endpoint, json={"input": text, "dim": self.dim})
                response.raise_for_status()
                return np.asarray(response.json()["embedding"], dtype=float)
            except (httpx.HTTPError, ValueError, KeyError, TypeError) as e:
                last_error = e
                logger.warning(
                    "embedding request failed (attempt %d/%d): %s",
                    attempt, MAX_ATTEMPTS, type(e).__name__,
                )
        raise EmbedError(f"{MAX_ATTEMPTS} attempts failed: {last_error}")

    def close(self):
        self._client.close()


def embed_text(text: str, provider: EmbeddingProvider) -> np.ndarray:
    """Embed one text, checking width and finiteness.

    Raises:
        EmbedError: provider failure or a malformed vector
    """
    try:
        vector = np.asarray(provider.embed(text or ""), dtype=float)
    except EmbedError:
        raise
    except Exception as e:
        raise EmbedError(f"{provider.provider_id} failed: {e}") from e
    if vector.shape != (provider.dim,):
        raise EmbedError(
            f"{provider.provider_id} returned shape {vector.shape}, expected ({provider.dim},)"
        )
    if not np.all(np.isfinite(vector)):
        raise EmbedError(f"{provider.provider_id} returned non-finite values")
    return vector


def make_embedding_provider(provider_id: str, dim: int = 64) -> EmbeddingProvider:
    """Provider for an id: ``mock``, ``mock-<dim>``, ``none`` or ``external``."""
    key = str(provider_id).strip().lower()
    match = re.fullmatch(r"mock-(\d+)", key)
    if match:
        return HashingEmbeddingProvider(int(match.group(1)))
    kind = ProviderKind.from_string(key)
    if kind is ProviderKind.MOCK:
        return HashingEmbeddingProvider(dim, provider_id="mock")
    if kind is ProviderKind.NONE:
        return NullEmbeddingProvider()
    return ExternalEmbeddingProvider.from_env(dim)
