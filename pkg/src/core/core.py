#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Core foundercast components - the stacked funding/success pipeline.

Training (``fit_pipeline``):

1. fit the encoder on the training records
2. produce out-of-fold log10-funding predictions from each base learner
   (gradient-boosted trees and random forest, tabular block only)
3. fit the linear meta-model on ``[gbt_oof, rf_oof, embeddings]``; the
   meta-model is cross-fitted over the same folds so the calibrator only
   sees out-of-fold meta estimates
4. refit the base learners and the meta-model on the full training set
5. fit the logistic calibrator: meta estimate -> success

Prediction maps a record to a funding estimate ``10**meta`` (at least $1),
a success probability, a thresholded decision (``prob >= threshold``) and
a funding class.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from constants import FundingClass, MetaMode, PipelineConfig
from encode import (
    EmbeddingProvider,
    EncoderState,
    FeatureMatrix,
    encode_dataset,
    encode_records,
    fit_encoder,
    make_embedding_provider,
)
from learners import (
    GradientBoostedTrees,
    LinearModel,
    LogisticModel,
    RandomForest,
    fit_gbt,
    fit_linear,
    fit_logistic,
    fit_rf,
)
from schema import Dataset, FeatureSchema, FounderRecord
from utils import derive_seed, ensure_dir
from utils.errors import FitError, ParamError, SchemaMismatchError, StateError
from .funding import classify_funding

logger = logging.getLogger(__name__)

GBT_CHANNEL = "gbt"
RF_CHANNEL = "rf"

# log10 dollars; 10**MAX_LOG_FUNDING stays finite
MAX_LOG_FUNDING = 300.0

PREDICTION_COLUMNS = ["id", "predicted_funding_usd", "success_prob", "predicted_success", "funding_class"]


@dataclass(frozen=True)
class StackingTrace:
    """Out-of-fold bookkeeping of a fit, kept for leakage audits.

    ``folds[i]`` is the fold of training record ``ids[i]``; ``base[:, c]``
    is the out-of-fold prediction of channel ``channels[c]`` and ``meta``
    the out-of-fold meta estimate the calibrator was trained on.
    """

    ids: Tuple[str, ...]
    folds: np.ndarray
    channels: Tuple[str, ...]
    base: np.ndarray
    meta: np.ndarray

    def to_dict(self) -> dict:
        return {
            "ids": list(self.ids),
            "folds": self.folds.tolist(),
            "channels": list(self.channels),
            "base": self.base.tolist(),
            "meta": self.meta.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StackingTrace":
        channels = tuple(data["channels"])
        return cls(
            ids=tuple(data["ids"]),
            folds=np.asarray(data["folds"], dtype=int),
            channels=channels,
            base=np.asarray(data["base"], dtype=float).reshape(-1, len(channels)),
            meta=np.asarray(data["meta"], dtype=float),
        )


@dataclass(frozen=True)
class PredictionRow:
    id: str
    funding: Optional[float] = None
    success_prob: Optional[float] = None
    predicted_success: Optional[bool] = None
    funding_class: Optional[FundingClass] = None
    low_range: bool = False
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "predicted_funding_usd": self.funding,
            "success_prob": self.success_prob,
            "predicted_success": self.predicted_success,
            "funding_class": self.funding_class.value if self.funding_class else None,
            "low_range": self.low_range,
            "error": self.error,
        }


@dataclass(frozen=True)
class FittedPipeline:
    """Everything needed to predict; immutable once fitted."""

    config: PipelineConfig
    schema: FeatureSchema
    encoder_state: EncoderState
    gbt: Optional[GradientBoostedTrees]
    rf: Optional[RandomForest]
    meta: Optional[LinearModel]
    calibrator: LogisticModel
    threshold: float
    training_fingerprint: Dict[str, Any]
    trace: Optional[StackingTrace] = None
    _provider: Optional[EmbeddingProvider] = field(default=None, repr=False, compare=False)

    @property
    def channels(self) -> List[str]:
        names = []
        if self.gbt is not None:
            names.append(GBT_CHANNEL)
        if self.rf is not None:
            names.append(RF_CHANNEL)
        return names

    @property
    def meta_columns(self) -> List[str]:
        return self.channels + self.encoder_state.embedding_columns

    @property
    def provider(self) -> EmbeddingProvider:
        if self._provider is None:
            state = self.encoder_state
            object.__setattr__(
                self, "_provider", make_embedding_provider(state.embedding_provider_id, state.embedding_dim)
            )
        return self._provider

    def base_predictions(self, tabular: np.ndarray) -> np.ndarray:
        columns = []
        if self.gbt is not None:
            columns.append(self.gbt.predict(tabular))
        if self.rf is not None:
            columns.append(self.rf.predict(tabular))
        return np.column_stack(columns)

    def log_funding(self, matrix: FeatureMatrix) -> np.ndarray:
        """Meta estimate of log10 funding for encoded rows."""
        base = self.base_predictions(matrix.tabular)
        if self.meta is None:
            return base.mean(axis=1)
        return self.meta.predict(np.hstack([base, matrix.embeddings]))

    def predict(self, records: Sequence[FounderRecord], threshold: Optional[float] = None) -> List[PredictionRow]:
        return predict(self, records, threshold)


def assign_folds(success: np.ndarray, n_folds: int, seed: int) -> np.ndarray:
    """Fold index per row; positives and negatives are dealt round-robin separately."""
    success = np.asarray(success, dtype=bool)
    rng = np.random.default_rng(seed)
    folds = np.empty(success.shape[0], dtype=int)
    offset = 0
    for mask in (success, ~success):
        rows = np.flatnonzero(mask)
        rows = rows[rng.permutation(rows.size)]
        folds[rows] = (np.arange(rows.size) + offset) % n_folds
        offset += rows.size
    return folds


def _fit_channel(channel: str, X, y, config: PipelineConfig, seed: int, n_jobs: int = 1):
    if channel == GBT_CHANNEL:
        return fit_gbt(X, y, config.gbt, seed=seed)
    return fit_rf(X, y, config.rf, seed=seed, n_jobs=n_jobs)


def _oof_task(channel: str, fold: int, X, y, folds, config: PipelineConfig) -> Tuple[str, int, np.ndarray]:
    held_out = folds == fold
    model = _fit_channel(channel, X[~held_out], y[~held_out], config, derive_seed(config.seed, channel, fold))
    return channel, fold, model.predict(X[held_out])


def out_of_fold(
    X: np.ndarray, y: np.ndarray, folds: np.ndarray, channels: Sequence[str], config: PipelineConfig
) -> np.ndarray:
    """Out-of-fold predictions, one column per channel.

    Each row's value comes from a model trained on the other folds only.
    """
    n_folds = int(folds.max()) + 1
    results = Parallel(n_jobs=config.n_jobs, prefer="threads")(
        delayed(_oof_task)(channel, k, X, y, folds, config)
        for channel in channels
        for k in range(n_folds)
    )
    oof = np.zeros((X.shape[0], len(channels)))
    for channel, k, values in results:
        oof[folds == k, list(channels).index(channel)] = values
    return oof


def _check_training_set(train: Dataset, config: PipelineConfig):
    if not train.is_labeled:
        raise FitError("training set has unlabeled records")
    success = train.success()
    if success.all() or not success.any():
        raise FitError("training set needs both successful and unsuccessful records")
    funding = train.funding()
    if not np.all(funding > 0):
        raise FitError("funding labels must be positive")
    per_class = min(int(success.sum()), int((~success).sum()))
    if per_class < config.oof_folds:
        raise ParamError(
            f"{config.oof_folds}-fold stacking needs at least {config.oof_folds} records of each "
            f"class, minority class has {per_class}"
        )


def fit_pipeline(train: Dataset, config: Optional[PipelineConfig] = None) -> FittedPipeline:
    """Fit the stacked pipeline on a labeled training set.

    Raises:
        FitError: single-class training set, non-positive funding, no tabular
            features, or a calibrator that does not increase with funding
        ParamError: fewer records of a class than folds
    """
    config = config or PipelineConfig()
    _check_training_set(train, config)

    provider = make_embedding_provider(config.embedding_provider, config.embedding_dim)
    state = fit_encoder(train, provider)
    matrix = encode_dataset(train, state, provider)
    if matrix.tabular.shape[1] == 0:
        raise FitError("no tabular features left for the base learners")

    y = np.log10(train.funding())
    success = train.success()
    folds = assign_folds(success, config.oof_folds, derive_seed(config.seed, "folds"))
    channels = [c for c, on in ((GBT_CHANNEL, config.use_gbt), (RF_CHANNEL, config.use_rf)) if on]

    logger.info(
        "fitting %s on %d records (%d tabular, %d embedding columns, %d folds)",
        "+".join(channels), len(train), matrix.tabular.shape[1], matrix.embeddings.shape[1], config.oof_folds,
    )
    base_oof = out_of_fold(matrix.tabular, y, folds, channels, config)
    logger.info("out-of-fold base predictions done")

    meta = None
    if config.meta_mode is MetaMode.LINEAR:
        Z = np.hstack([base_oof, matrix.embeddings])
        meta_oof = np.zeros_like(y)
        for k in range(config.oof_folds):
            held_out = folds == k
            fold_meta = fit_linear(Z[~held_out], y[~held_out], config.linear_lambda)
            meta_oof[held_out] = fold_meta.predict(Z[held_out])
        meta = fit_linear(Z, y, config.linear_lambda)
    else:
        meta_oof = base_oof.mean(axis=1)

    calibrator = fit_logistic(meta_oof, success, config.logistic_lambda)
    if not calibrator.coefficient > 0:
        raise FitError(
            f"calibrator slope {calibrator.coefficient:.4g} is not positive; "
            "success does not increase with the funding estimate"
        )

    refit = Parallel(n_jobs=min(config.n_jobs, len(channels)) or 1, prefer="threads")(
        delayed(_fit_channel)(c, matrix.tabular, y, config, derive_seed(config.seed, c, "full"), config.n_jobs)
        for c in channels
    )
    models = dict(zip(channels, refit))
    logger.info("base learners refitted on the full training set")

    return FittedPipeline(
        config=config,
        schema=train.schema,
        encoder_state=state,
        gbt=models.get(GBT_CHANNEL),
        rf=models.get(RF_CHANNEL),
        meta=meta,
        calibrator=calibrator,
        threshold=config.threshold,
        training_fingerprint={"data": train.fingerprint(), "seed": config.seed},
        trace=StackingTrace(tuple(matrix.ids), folds, tuple(channels), base_oof, meta_oof),
        _provider=provider,
    )


def prediction_rows(
    ids: Sequence[str], log_funding, probabilities, threshold: float
) -> List[PredictionRow]:
    """Rows from meta estimates (log10 dollars) and success probabilities."""
    log_funding = np.clip(np.asarray(log_funding, dtype=float), 0.0, MAX_LOG_FUNDING)
    funding = np.power(10.0, log_funding)
    rows = []
    for record_id, amount, prob in zip(ids, funding, np.asarray(probabilities, dtype=float)):
        fc, low = classify_funding(amount)
        rows.append(
            PredictionRow(
                id=record_id,
                funding=float(amount),
                success_prob=float(prob),
                predicted_success=bool(prob >= threshold),
                funding_class=fc,
                low_range=low,
            )
        )
    return rows


def predict(
    pipeline: FittedPipeline, records: Sequence[FounderRecord], threshold: Optional[float] = None
) -> List[PredictionRow]:
    """Predict funding, success probability, decision and class per record.

    Records that fail to encode get a row with ``error`` set; the rest of the
    batch is still predicted. Rows come back in input order.

    Raises:
        SchemaMismatchError: records validated against another schema
        StateError: unfitted pipeline
    """
    if pipeline.calibrator is None or not pipeline.calibrator.is_fitted:
        raise StateError("pipeline is not fitted")
    threshold = pipeline.threshold if threshold is None else threshold
    matrix = encode_records(
        records, pipeline.schema, pipeline.encoder_state, pipeline.provider, collect_errors=True
    )
    rows = {}
    if len(matrix):
        log_funding = pipeline.log_funding(matrix)
        probabilities = pipeline.calibrator.predict(log_funding)
        rows = {row.id: row for row in prediction_rows(matrix.ids, log_funding, probabilities, threshold)}
    return [rows.get(r.id) or PredictionRow(id=r.id, error=matrix.errors.get(r.id, "not encoded")) for r in records]


def predictions_frame(rows: Sequence[PredictionRow]) -> pd.DataFrame:
    frame = pd.DataFrame(
        [
            {
                "id": row.id,
                "predicted_funding_usd": row.funding,
                "success_prob": row.success_prob,
                "predicted_success": None if row.predicted_success is None else int(row.predicted_success),
                "funding_class": row.funding_class.value if row.funding_class else None,
                "error": row.error,
            }
            for row in rows
        ],
        columns=PREDICTION_COLUMNS + ["error"],
    )
    if not frame["error"].notna().any():
        frame = frame.drop(columns="error")
    return frame


def save_predictions(rows: Sequence[PredictionRow], path: Union[str, Path]):
    """Write predictions as CSV (``id, predicted_funding_usd, success_prob, predicted_success, funding_class``)."""
    path = Path(path)
    ensure_dir(path.parent)
    predictions_frame(rows).to_csv(path, index=False, lineterminator="\n", float_format="%r")
    logger.info("wrote %d predictions to %s", len(rows), path)


def predict_dataset(
    pipeline: FittedPipeline, dataset: Dataset, threshold: Optional[float] = None
) -> List[PredictionRow]:
    """:func:`predict` over a dataset whose schema must be the training schema.

    Raises:
        SchemaMismatchError: the dataset's schema hash differs from the pipeline's
    """
    if dataset.schema.hash != pipeline.encoder_state.schema_hash:
        raise SchemaMismatchError(pipeline.encoder_state.schema_hash, dataset.schema.hash)
    return predict(pipeline, dataset.records, threshold)
