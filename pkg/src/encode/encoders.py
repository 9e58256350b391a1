#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Four-branch feature encoding.

Column layout of a :class:`FeatureMatrix` (schema order within each group):

1. categorical features as ordinal integers
2. continuous features as training-fitted z-scores
3. boolean features as 0/1
4. one embedding block of ``embedding_dim`` columns per textual feature

Absent values are imputed: categorical -> a declared ``unknown`` level if the
feature has one, else the training mode; continuous -> the training mean
(z-score 0); boolean -> 0.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from constants import FeatureBranch
from schema import EDUCATION_LEVELS, Dataset, FeatureDecl, FeatureSchema, FounderRecord
from utils import fingerprint
from utils.errors import EmbedError, EncodeError, FitError, SchemaMismatchError, UnknownCategory
from .embeddings import EmbeddingProvider, embed_text

logger = logging.getLogger(__name__)

UNKNOWN_LEVEL = "unknown"

_EDUCATION = FeatureDecl("education_level", FeatureBranch.CATEGORICAL, categorical_levels=EDUCATION_LEVELS)


def encode_categorical(feature: FeatureDecl, label: Union[str, int]) -> int:
    """Declared integer of a categorical level label (or integer literal).

    Raises:
        UnknownCategory: label not declared for the feature
    """
    if feature.branch is not FeatureBranch.CATEGORICAL:
        raise EncodeError(f"{feature.name} is not categorical")
    value = feature.level_value(label)
    if value is None:
        raise UnknownCategory(
            f"Invalid {feature.name}: {label!r}. Valid options: {[l for l, _ in feature.levels]}"
        )
    return value


def encode_education(label: Union[str, int]) -> int:
    """Education level label -> integer (Associate or less 0 ... Doctoral or more 3)."""
    return encode_categorical(_EDUCATION, label)


def fit_standardizer(train_values: Sequence[float]) -> Tuple[float, float]:
    """Mean and population standard deviation (divide by n).

    Raises:
        FitError: empty or non-finite input
    """
    values = np.asarray(list(train_values), dtype=float)
    if values.size == 0:
        raise FitError("cannot fit a standardizer on no values")
    if not np.all(np.isfinite(values)):
        raise FitError("standardizer input contains non-finite values")
    mean = float(values.mean())
    return mean, float(np.sqrt(np.mean((values - mean) ** 2)))


def apply_standardizer(state: Tuple[float, float], value: float) -> float:
    """``(value - mean) / std``; 0 for a constant training column."""
    mean, std = state
    if value is None or not math.isfinite(value):
        raise EncodeError(f"cannot standardize non-finite value {value!r}")
    if std == 0:
        return 0.0
    return (value - mean) / std


@dataclass(frozen=True)
class EncoderState:
    """Training-fitted encoding parameters; never changed by application."""

    schema_hash: str
    categorical: Tuple[Tuple[str, int], ...]
    continuous: Tuple[Tuple[str, float, float], ...]
    boolean: Tuple[str, ...]
    textual: Tuple[str, ...]
    embedding_provider_id: str
    embedding_dim: int

    @property
    def tabular_columns(self) -> List[str]:
        return (
            [name for name, _ in self.categorical]
            + [name for name, _, _ in self.continuous]
            + list(self.boolean)
        )

    @property
    def embedding_columns(self) -> List[str]:
        return [f"{name}__emb{j}" for name in self.textual for j in range(self.embedding_dim)]

    @property
    def columns(self) -> List[str]:
        return self.tabular_columns + self.embedding_columns

    def to_dict(self) -> dict:
        return {
            "schema_hash": self.schema_hash,
            "categorical": {name: impute for name, impute in self.categorical},
            "means": {name: mean for name, mean, _ in self.continuous},
            "stds": {name: std for name, _, std in self.continuous},
            "continuous": [name for name, _, _ in self.continuous],
            "boolean": list(self.boolean),
            "textual": list(self.textual),
            "embedding_provider_id": self.embedding_provider_id,
            "embedding_dim": self.embedding_dim,
            "categorical_order": [name for name, _ in self.categorical],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EncoderState":
        return cls(
            schema_hash=data["schema_hash"],
            categorical=tuple((n, int(data["categorical"][n])) for n in data["categorical_order"]),
            continuous=tuple(
                (n, float(data["means"][n]), float(data["stds"][n])) for n in data["continuous"]
            ),
            boolean=tuple(data["boolean"]),
            textual=tuple(data["textual"]),
            embedding_provider_id=data["embedding_provider_id"],
            embedding_dim=int(data["embedding_dim"]),
        )

    def fingerprint(self) -> str:
        return fingerprint(self.to_dict())


@dataclass(frozen=True)
class FeatureMatrix:
    """Encoded records: tabular block for the base learners, embeddings for the meta-model."""

    ids: Tuple[str, ...]
    tabular: np.ndarray
    embeddings: np.ndarray
    tabular_columns: Tuple[str, ...]
    embedding_columns: Tuple[str, ...]
    errors: Dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def columns(self) -> List[str]:
        return list(self.tabular_columns) + list(self.embedding_columns)

    @property
    def full(self) -> np.ndarray:
        return np.hstack([self.tabular, self.embeddings])


def _imputation(decl: FeatureDecl, present: List[int]) -> int:
    for label, value in decl.levels:
        if label.lower() == UNKNOWN_LEVEL:
            return value
    if not present:
        return min(decl.values)
    counts = Counter(present)
    top = max(counts.values())
    return min(v for v, c in counts.items() if c == top)


def _categorical_code(decl: FeatureDecl, value: Any) -> Optional[int]:
    if value is None:
        return None
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        if not decl.has_value(int(value)):
            raise UnknownCategory(f"Invalid {decl.name}: {value}. Valid options: {list(decl.values)}")
        return int(value)
    return encode_categorical(decl, value)


def fit_encoder(train: Dataset, provider: EmbeddingProvider) -> EncoderState:
    """Fit imputation values and z-score parameters on training records only.

    Raises:
        FitError: a continuous feature has no value in the training set
        UnknownCategory: an undeclared categorical level in the training set
    """
    schema = train.schema
    categorical = []
    for decl in schema.by_branch(FeatureBranch.CATEGORICAL):
        present = []
        for record in train.records:
            try:
                code = _categorical_code(decl, record.values.get(decl.name))
            except UnknownCategory as e:
                raise UnknownCategory(str(e), record.id) from None
            if code is not None:
                present.append(code)
        categorical.append((decl.name, _imputation(decl, present)))

    continuous = []
    for decl in schema.by_branch(FeatureBranch.CONTINUOUS):
        values = [
            float(v) for v in (r.values.get(decl.name) for r in train.records)
            if v is not None and math.isfinite(float(v))
        ]
        if not values:
            raise FitError(f"continuous feature {decl.name} has no values in the training set")
        mean, std = fit_standardizer(values)
        continuous.append((decl.name, mean, std))

    state = EncoderState(
        schema_hash=schema.hash,
        categorical=tuple(categorical),
        continuous=tuple(continuous),
        boolean=tuple(d.name for d in schema.by_branch(FeatureBranch.BOOLEAN)),
        textual=tuple(d.name for d in schema.by_branch(FeatureBranch.TEXTUAL)),
        embedding_provider_id=provider.provider_id,
        embedding_dim=provider.dim,
    )
    logger.debug("fitted encoder %s on %d records", state.fingerprint()[:12], len(train))
    return state


def _embed(text: str, provider: EmbeddingProvider, seen: Dict[str, np.ndarray]) -> np.ndarray:
    if text not in seen:
        seen[text] = embed_text(text, provider)
    return seen[text]


def _encode_tabular(
    record: FounderRecord, state: EncoderState, decls: Dict[str, FeatureDecl]
) -> np.ndarray:
    row = []
    for name, impute in state.categorical:
        code = _categorical_code(decls[name], record.values.get(name))
        row.append(float(impute if code is None else code))
    for name, mean, std in state.continuous:
        value = record.values.get(name)
        if value is None:
            row.append(0.0)
            continue
        try:
            row.append(apply_standardizer((mean, std), float(value)))
        except (TypeError, ValueError) as e:
            raise EncodeError(f"{name}: {e}") from None
    for name in state.boolean:
        value = record.values.get(name)
        if value is None:
            row.append(0.0)
        elif value in (0, 1):
            row.append(float(value))
        else:
            raise EncodeError(f"{name}: not a boolean: {value!r}")
    return np.asarray(row, dtype=float)


def encode_records(
    records: Sequence[FounderRecord],
    schema: FeatureSchema,
    state: EncoderState,
    provider: EmbeddingProvider,
    collect_errors: bool = False,
) -> FeatureMatrix:
    """Encode records with a fitted state.

    Args:
        records: records to encode
        schema: the schema the state was fitted on
        state: fitted encoder state
        provider: embedding provider matching ``state``
        collect_errors: record failures in ``FeatureMatrix.errors`` and leave
            the failed records out instead of raising

    Raises:
        SchemaMismatchError: ``schema`` differs from the fitted one
        EncodeError: a record cannot be encoded (message carries its id)
    """
    if schema.hash != state.schema_hash:
        raise SchemaMismatchError(state.schema_hash, schema.hash)
    if provider.provider_id != state.embedding_provider_id or provider.dim != state.embedding_dim:
        raise EncodeError(
            f"embedding provider {provider.provider_id}/{provider.dim} does not match "
            f"fitted {state.embedding_provider_id}/{state.embedding_dim}"
        )

    decls = {decl.name: decl for decl in schema}
    ids, rows, blocks, errors = [], [], [], {}
    seen: Dict[str, np.ndarray] = {}
    for record in records:
        try:
            row = _encode_tabular(record, state, decls)
            vectors = [_embed(record.text_for(name), provider, seen) for name in state.textual]
        except (EncodeError, EmbedError) as e:
            message = str(e)
            if not collect_errors:
                error_type = type(e) if isinstance(e, EncodeError) else EncodeError
                raise error_type(message, record.id) from e
            errors[record.id] = message
            continue
        ids.append(record.id)
        rows.append(row)
        blocks.append(np.concatenate(vectors) if vectors else np.zeros(0))

    if errors:
        logger.warning("%d of %d records could not be encoded", len(errors), len(records))
    width = len(state.tabular_columns)
    return FeatureMatrix(
        ids=tuple(ids),
        tabular=np.vstack(rows) if rows else np.zeros((0, width)),
        embeddings=np.vstack(blocks) if blocks else np.zeros((0, len(state.embedding_columns))),
        tabular_columns=tuple(state.tabular_columns),
        embedding_columns=tuple(state.embedding_columns),
        errors=errors,
    )


def encode_dataset(dataset: Dataset, state: EncoderState, provider: EmbeddingProvider) -> FeatureMatrix:
    """Encode every record of a dataset; any failure raises with the record id."""
    return encode_records(dataset.records, dataset.schema, state, provider)
