#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Random-forest regression.

Every tree gets its own seed spawned from the forest seed, so a forest is a
deterministic function of (data, params, seed) whatever ``n_jobs`` is.
"""

import logging
from typing import Any, Dict, List, Optional

import numpy as np
from joblib import Parallel, delayed

from constants import ForestParams
from ._base import Model, check_training_data
from .tree import RegressionTree

logger = logging.getLogger(__name__)


def _fit_one(X: np.ndarray, y: np.ndarray, params: ForestParams, seed: int) -> RegressionTree:
    rng = np.random.default_rng(seed)
    n = X.shape[0]
    rows = rng.integers(0, n, size=n) if params.bootstrap else np.arange(n)
    tree = RegressionTree(params.max_depth, params.min_samples_leaf, params.max_features)
    return tree.fit(X[rows], y[rows], rng=rng)


class RandomForest(Model):
    kind = "random_forest"

    def __init__(self, params: Optional[ForestParams] = None, seed: int = 0, n_jobs: int = 1):
        super().__init__()
        self.params = params or ForestParams()
        self.seed = seed
        self.n_jobs = n_jobs
        self.tree_seeds: List[int] = []
        self.trees: List[RegressionTree] = []

    def fit(self, X, y) -> "RandomForest":
        X, y = check_training_data(X, y)
        children = np.random.SeedSequence(self.seed).spawn(self.params.n_trees)
        self.tree_seeds = [int(child.generate_state(1)[0]) for child in children]
        self.trees = Parallel(n_jobs=self.n_jobs, prefer="threads")(
            delayed(_fit_one)(X, y, self.params, s) for s in self.tree_seeds
        )
        self.n_features_in = X.shape[1]
        logger.debug("fitted forest of %d trees on %d rows", len(self.trees), X.shape[0])
        return self

    def predict(self, X) -> np.ndarray:
        X = self._check_input(X)
        total = np.zeros(X.shape[0])
        for tree in self.trees:
            total += tree.predict(X)
        return total / len(self.trees)

    def raw_importance(self) -> np.ndarray:
        importance = np.zeros(self.n_features_in)
        for tree in self.trees:
            importance += tree.raw_importance()
        return importance / max(len(self.trees), 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "params": vars(self.params).copy(),
            "seed": self.seed,
            "tree_seeds": list(self.tree_seeds),
            "n_features_in": self.n_features_in,
            "trees": [tree.to_dict() for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RandomForest":
        model = cls(ForestParams(**data["params"]), seed=data["seed"])
        model.tree_seeds = list(data["tree_seeds"])
        model.n_features_in = data["n_features_in"]
        model.trees = [RegressionTree.from_dict(t) for t in data["trees"]]
        return model


def fit_rf(
    X, y, params: Optional[ForestParams] = None, seed: int = 0, n_jobs: int = 1
) -> RandomForest:
    """Fit a random forest.

    Raises:
        ParamError: ``n_trees < 1`` (raised by :class:`ForestParams`)
    """
    return RandomForest(params, seed, n_jobs).fit(X, y)
