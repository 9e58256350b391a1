#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Encoding.

This module turns records into numeric matrices:
- Ordinal integer maps for categorical features
- Z-score standardization fitted on training data
- Boolean passthrough
- Text embeddings through a pluggable provider
"""

from .embeddings import (
    EmbeddingProvider,
    HashingEmbeddingProvider,
    NullEmbeddingProvider,
    ExternalEmbeddingProvider,
    embed_text,
    make_embedding_provider,
    tokenize,
)
from .encoders import (
    UNKNOWN_LEVEL,
    EncoderState,
    FeatureMatrix,
    encode_categorical,
    encode_education,
    fit_standardizer,
    apply_standardizer,
    fit_encoder,
    encode_records,
    encode_dataset,
)

__all__ = [
    "EmbeddingProvider",
    "HashingEmbeddingProvider",
    "NullEmbeddingProvider",
    "ExternalEmbeddingProvider",
    "embed_text",
    "make_embedding_provider",
    "tokenize",
    "UNKNOWN_LEVEL",
    "EncoderState",
    "FeatureMatrix",
    "encode_categorical",
    "encode_education",
    "fit_standardizer",
    "apply_standardizer",
    "fit_encoder",
    "encode_records",
    "encode_dataset",
]
