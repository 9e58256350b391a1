#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Ridge linear regression with an unpenalized intercept.

Inputs and targets are centered, which removes the intercept from the
system; the normal equations ``(XᵀX + λI) β = Xᵀy`` are then solved with a
Cholesky factorization and ``b = mean(y) - mean(X) β``.
"""

import logging
from typing import Any, Dict

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from utils.errors import ParamError, SingularError
from ._base import Model, check_training_data

logger = logging.getLogger(__name__)

# Relative pivot size below which an unregularized system counts as singular.
_PIVOT_TOLERANCE = 1e-10


class LinearModel(Model):
    kind = "linear"

    def __init__(self, ridge_lambda: float = 1e-6):
        super().__init__()
        if ridge_lambda < 0:
            raise ParamError(f"Invalid ridge_lambda: {ridge_lambda}. Must be >= 0")
        self.ridge_lambda = ridge_lambda
        self.intercept = 0.0
        self.coefficients = np.zeros(0)
        self.input_std = np.zeros(0)

    def fit(self, X, y) -> "LinearModel":
        X, y = check_training_data(X, y, min_samples=1)
        x_mean = X.mean(axis=0)
        y_mean = float(y.mean())
        Xc = X - x_mean
        gram = Xc.T @ Xc
        p = gram.shape[0]
        if p:
            gram[np.diag_indices(p)] += self.ridge_lambda
            scale = max(float(np.max(np.diag(gram))), 1.0)
            try:
                factor = cho_factor(gram, lower=False, check_finite=False)
            except LinAlgError as e:
                raise SingularError(f"normal equations are not positive definite: {e}") from None
            pivots = np.abs(np.diag(factor[0])) ** 2
            if self.ridge_lambda == 0 and pivots.min() < _PIVOT_TOLERANCE * scale:
                raise SingularError("normal equations are singular; use ridge_lambda > 0")
            coefficients = cho_solve(factor, Xc.T @ (y - y_mean), check_finite=False)
        else:
            coefficients = np.zeros(0)

        self.coefficients = np.asarray(coefficients, dtype=float)
        self.intercept = y_mean - float(x_mean @ self.coefficients)
        self.input_std = X.std(axis=0)
        self.n_features_in = X.shape[1]
        return self

    def predict(self, X) -> np.ndarray:
        X = self._check_input(X)
        return X @ self.coefficients + self.intercept

    def raw_importance(self) -> np.ndarray:
        return np.abs(self.coefficients) * self.input_std

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "ridge_lambda": self.ridge_lambda,
            "n_features_in": self.n_features_in,
            "intercept": self.intercept,
            "coefficients": self.coefficients.tolist(),
            "input_std": self.input_std.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LinearModel":
        model = cls(data["ridge_lambda"])
        model.n_features_in = data["n_features_in"]
        model.intercept = float(data["intercept"])
        model.coefficients = np.asarray(data["coefficients"], dtype=float)
        model.input_std = np.asarray(data["input_std"], dtype=float)
        return model


def fit_linear(X, y, ridge_lambda: float = 1e-6) -> LinearModel:
    """Fit ridge regression.

    Raises:
        SingularError: ``ridge_lambda == 0`` and the inputs are collinear
    """
    return LinearModel(ridge_lambda).fit(X, y)
