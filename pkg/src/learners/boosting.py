#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Squared-loss gradient-boosted regression trees.

Each round fits a :class:`RegressionTree` to the current residuals on a
row subsample drawn without replacement and adds ``learning_rate`` times
its output::

    F_0(x) = mean(y)
    F_m(x) = F_{m-1}(x) + learning_rate * tree_m(x)
"""

import logging
from typing import Any, Dict, List, Optional

import numpy as np

from constants import BoostingParams
from ._base import Model, check_training_data
from .tree import RegressionTree

logger = logging.getLogger(__name__)


class GradientBoostedTrees(Model):
    kind = "gradient_boosted_trees"

    def __init__(self, params: Optional[BoostingParams] = None, seed: int = 0):
        super().__init__()
        self.params = params or BoostingParams()
        self.seed = seed
        self.initial_prediction = 0.0
        self.trees: List[RegressionTree] = []

    @property
    def learning_rate(self) -> float:
        return self.params.learning_rate

    def fit(self, X, y) -> "GradientBoostedTrees":
        X, y = check_training_data(X, y)
        params = self.params
        rng = np.random.default_rng(self.seed)
        n = X.shape[0]
        n_rows = max(1, int(round(params.subsample * n)))

        self.initial_prediction = float(y.mean())
        current = np.full(n, self.initial_prediction)
        self.trees = []
        for m in range(params.n_trees):
            residual = y - current
            if n_rows < n:
                rows = np.sort(rng.choice(n, size=n_rows, replace=False))
            else:
                rows = np.arange(n)
            tree = RegressionTree(params.max_depth, params.min_samples_leaf)
            tree.fit(X[rows], residual[rows])
            current = current + params.learning_rate * tree.predict(X)
            self.trees.append(tree)
            if logger.isEnabledFor(logging.DEBUG) and (m + 1) % 50 == 0:
                logger.debug("boosting round %d: train mse %.6g", m + 1, np.mean((y - current) ** 2))

        self.n_features_in = X.shape[1]
        return self

    def predict(self, X) -> np.ndarray:
        X = self._check_input(X)
        out = np.full(X.shape[0], self.initial_prediction)
        for tree in self.trees:
            out += self.learning_rate * tree.predict(X)
        return out

    def staged_predict(self, X):
        """Predictions after each round, starting from the initial constant."""
        X = self._check_input(X)
        out = np.full(X.shape[0], self.initial_prediction)
        yield out.copy()
        for tree in self.trees:
            out += self.learning_rate * tree.predict(X)
            yield out.copy()

    def raw_importance(self) -> np.ndarray:
        importance = np.zeros(self.n_features_in)
        for tree in self.trees:
            importance += tree.raw_importance()
        return importance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "params": vars(self.params).copy(),
            "seed": self.seed,
            "n_features_in": self.n_features_in,
            "initial_prediction": self.initial_prediction,
            "trees": [tree.to_dict() for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GradientBoostedTrees":
        model = cls(BoostingParams(**data["params"]), seed=data["seed"])
        model.n_features_in = data["n_features_in"]
        model.initial_prediction = float(data["initial_prediction"])
        model.trees = [RegressionTree.from_dict(t) for t in data["trees"]]
        return model


def fit_gbt(X, y, params: Optional[BoostingParams] = None, seed: int = 0) -> GradientBoostedTrees:
    """Fit gradient-boosted trees.

    Raises:
        ParamError: invalid boosting parameters (raised by :class:`BoostingParams`)
        FitError: fewer than two rows or non-finite data
    """
    return GradientBoostedTrees(params, seed).fit(X, y)
