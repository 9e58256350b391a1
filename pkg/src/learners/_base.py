#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Base class and shared helpers for the learners.

Every learner is a plain class with ``fit``/``predict``, an ``is_fitted``
flag, a serializable ``to_dict``/``from_dict`` pair and a ``kind`` tag used
to rebuild it from an artifact.
"""

import logging
from typing import Any, Dict, Type

import numpy as np

from utils.errors import FitError, ParamError, ShapeError, StateError

logger = logging.getLogger(__name__)

# kind -> class, filled by subclasses
_MODEL_REGISTRY: Dict[str, Type["Model"]] = {}


class Model:
    """Common bookkeeping for fitted models."""

    kind = "model"

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        _MODEL_REGISTRY[cls.kind] = cls

    def __init__(self):
        self.n_features_in = None

    @property
    def is_fitted(self) -> bool:
        return self.n_features_in is not None

    def _check_fitted(self):
        if not self.is_fitted:
            raise StateError(f"{type(self).__name__} is not fitted")

    def _check_input(self, X) -> np.ndarray:
        self._check_fitted()
        X = np.asarray(X, dtype=float)
        if X.ndim == 1 and self.n_features_in == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2 or X.shape[1] != self.n_features_in:
            raise ShapeError(
                f"{type(self).__name__} expects {self.n_features_in} input columns, "
                f"got shape {X.shape}"
            )
        return X

    def predict(self, X) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Model":
        raise NotImplementedError


def check_training_data(X, y, min_samples: int = 2):
    """Validate a training pair and return float arrays.

    Raises:
        FitError: too few rows, non-finite values, or mismatched lengths
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2:
        raise ShapeError(f"expected a 2-D input matrix, got shape {X.shape}")
    if X.shape[0] != y.shape[0]:
        raise ShapeError(f"{X.shape[0]} input rows but {y.shape[0]} targets")
    if X.shape[0] < min_samples:
        raise FitError(f"need at least {min_samples} samples, got {X.shape[0]}")
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
        raise FitError("training data contains non-finite values")
    return X, y


def model_from_dict(data: Dict[str, Any]) -> Model:
    """Rebuild any learner from its ``to_dict`` form."""
    kind = data.get("kind")
    if kind not in _MODEL_REGISTRY:
        raise ValueError(
            f"Invalid model kind: {kind}. Valid options: {sorted(_MODEL_REGISTRY)}"
        )
    return _MODEL_REGISTRY[kind].from_dict(data)


def predict(model: Model, X) -> np.ndarray:
    """Predictions of any learner; the logistic model returns probabilities.

    Raises:
        ShapeError: input width differs from the fitted width
        StateError: unfitted model
    """
    return model.predict(X)


def model_importance(model: Model) -> np.ndarray:
    """Per-input-column importance normalized to sum 1.

    Trees use the total squared-error reduction of their splits, the linear
    model ``|coefficient| * input std``. All-zero raw importance gives a
    uniform vector.

    Raises:
        StateError: unfitted model
    """
    if not hasattr(model, "raw_importance"):
        raise ParamError(f"{type(model).__name__} does not expose feature importance")
    model._check_fitted()
    raw = np.asarray(model.raw_importance(), dtype=float)
    total = raw.sum()
    if not total > 0:
        return np.full(raw.shape, 1.0 / raw.size) if raw.size else raw
    return raw / total
