#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
L2-regularized logistic regression on a single input, solved by damped
Newton iterations.

The input is standardized internally. With ``z = (x - mean) / std`` the
model is ``p = sigmoid(b + w z)`` and the objective maximized is::

    sum_i [y_i log p_i + (1 - y_i) log(1 - p_i)] - (λ / 2) w²

The intercept is not penalized. Each Newton step is backtracked until the
objective increases (Armijo condition), so accepted steps never lower it.
"""

import logging
from typing import Any, Dict, Tuple

import numpy as np
from scipy.special import expit, log_expit

from utils.errors import ConvergenceError, FitError, ParamError, ShapeError
from ._base import Model

logger = logging.getLogger(__name__)

GRADIENT_TOLERANCE = 1e-8
MAX_ITERATIONS = 100
_ARMIJO = 1e-4
_MAX_HALVINGS = 50


class LogisticObjective:
    """Penalized log-likelihood of ``theta = (intercept, slope)`` on standardized inputs.

    Args:
        z: standardized input
        y: 0/1 labels
        ridge_lambda: penalty on the slope
    """

    def __init__(self, z: np.ndarray, y: np.ndarray, ridge_lambda: float):
        self.design = np.column_stack([np.ones_like(z), z])
        self.y = y
        self.ridge_lambda = ridge_lambda
        self._penalty = np.array([0.0, ridge_lambda])

    def value(self, theta: np.ndarray) -> float:
        eta = self.design @ theta
        loglik = np.sum(self.y * log_expit(eta) + (1 - self.y) * log_expit(-eta))
        return float(loglik - 0.5 * self.ridge_lambda * theta[1] ** 2)

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        p = expit(self.design @ theta)
        return self.design.T @ (self.y - p) - self._penalty * theta

    def hessian(self, theta: np.ndarray) -> np.ndarray:
        """Hessian of the objective (negative definite)."""
        p = expit(self.design @ theta)
        weights = p * (1 - p)
        return -(self.design.T * weights) @ self.design - np.diag(self._penalty)


class LogisticModel(Model):
    kind = "logistic"

    def __init__(self, ridge_lambda: float = 1e-3):
        super().__init__()
        if not ridge_lambda > 0:
            raise ParamError(f"Invalid ridge_lambda: {ridge_lambda}. Must be > 0")
        self.ridge_lambda = ridge_lambda
        self.intercept = 0.0
        self.coefficient = 0.0
        self.input_mean = 0.0
        self.input_std = 1.0
        self.n_iterations = 0

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.coefficient])

    def _standardize(self, x: np.ndarray) -> np.ndarray:
        return (x - self.input_mean) / self.input_std

    def fit(self, x, y) -> "LogisticModel":
        x = np.asarray(x, dtype=float).ravel()
        y = np.asarray(y, dtype=float).ravel()
        if x.shape != y.shape:
            raise ShapeError(f"{x.shape[0]} inputs but {y.shape[0]} labels")
        if not np.all(np.isfinite(x)):
            raise FitError("calibrator input contains non-finite values")
        if not np.all((y == 0) | (y == 1)):
            raise FitError("labels must be 0/1")
        if y.size == 0 or y.min() == y.max():
            raise FitError("logistic fit needs both classes present")

        self.input_mean = float(x.mean())
        std = float(x.std())
        self.input_std = std if std > 0 else 1.0
        objective = LogisticObjective(self._standardize(x), y, self.ridge_lambda)

        rate = y.mean()
        theta = np.array([np.log(rate / (1 - rate)), 0.0])
        value = objective.value(theta)
        gradient = objective.gradient(theta)
        for iteration in range(1, MAX_ITERATIONS + 1):
            if np.max(np.abs(gradient)) < GRADIENT_TOLERANCE:
                break
            step = np.linalg.solve(objective.hessian(theta), -gradient)
            slope = float(gradient @ step)
            t = 1.0
            for _ in range(_MAX_HALVINGS):
                candidate = theta + t * step
                candidate_value = objective.value(candidate)
                if candidate_value >= value + _ARMIJO * t * slope:
                    break
                t *= 0.5
            else:
                # no increasing step at machine precision: optimum reached
                break
            theta, value = candidate, candidate_value
            gradient = objective.gradient(theta)
            logger.debug("newton %d: objective %.12g, |grad| %.3e", iteration, value, np.max(np.abs(gradient)))
        self.n_iterations = iteration

        norm = float(np.max(np.abs(gradient)))
        if not norm < GRADIENT_TOLERANCE and not self._stalled(objective, theta):
            raise ConvergenceError(f"logistic fit did not converge in {MAX_ITERATIONS} iterations", norm)

        self.intercept, self.coefficient = float(theta[0]), float(theta[1])
        self.n_features_in = 1
        return self

    @staticmethod
    def _stalled(objective: LogisticObjective, theta: np.ndarray) -> bool:
        # gradient at rounding level relative to the problem size
        scale = max(float(objective.y.size), 1.0)
        return float(np.max(np.abs(objective.gradient(theta)))) < 1e-12 * scale

    def decision_function(self, x) -> np.ndarray:
        self._check_fitted()
        x = np.asarray(x, dtype=float).ravel()
        return self.intercept + self.coefficient * self._standardize(x)

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 2:
            if x.shape[1] != 1:
                raise ShapeError(f"LogisticModel expects 1 input column, got shape {x.shape}")
            x = x[:, 0]
        elif x.ndim != 1:
            raise ShapeError(f"LogisticModel expects 1 input column, got shape {x.shape}")
        return expit(self.decision_function(x))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "ridge_lambda": self.ridge_lambda,
            "n_features_in": self.n_features_in,
            "intercept": self.intercept,
            "coefficient": self.coefficient,
            "input_mean": self.input_mean,
            "input_std": self.input_std,
            "n_iterations": self.n_iterations,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LogisticModel":
        model = cls(data["ridge_lambda"])
        model.n_features_in = data["n_features_in"]
        model.intercept = float(data["intercept"])
        model.coefficient = float(data["coefficient"])
        model.input_mean = float(data["input_mean"])
        model.input_std = float(data["input_std"])
        model.n_iterations = int(data["n_iterations"])
        return model


def fit_logistic(x, y, ridge_lambda: float = 1e-3) -> LogisticModel:
    """Fit the 1-D logistic calibrator.

    Raises:
        FitError: a single class in ``y``
        ConvergenceError: gradient max-norm still >= 1e-8 after 100 iterations
    """
    return LogisticModel(ridge_lambda).fit(x, y)
