#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Exact CART regression tree (squared error).

Split search sorts every candidate column once per node and scans all
boundaries between distinct adjacent values with cumulative sums of the
centered targets::

    gain = S_L**2 / n_L + S_R**2 / n_R - S**2 / n

which is the reduction in sum of squared errors. The best boundary of a
column is the first maximum (lowest threshold); across columns the lowest
column index wins ties. Thresholds are midpoints between the two adjacent
values and rows with ``x <= threshold`` go left.

Trees are stored as flat node arrays (``feature == -1`` marks a leaf).
"""

import logging
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from utils.errors import ParamError
from ._base import Model, check_training_data

logger = logging.getLogger(__name__)

# Splits must remove more than this fraction of the node's squared error.
GAIN_TOLERANCE = 1e-12

LEAF = -1


def _threshold(low: float, high: float) -> float:
    mid = 0.5 * (low + high)
    return low if mid >= high else mid


def best_split(values, targets, min_samples_leaf: int = 1) -> Optional[Tuple[float, float]]:
    """Best squared-error split of one column.

    Args:
        values: feature column
        targets: real targets, same length
        min_samples_leaf: minimum rows on each side

    Returns:
        ``(threshold, sse_gain)``, or ``None`` when no boundary gives a
        positive gain with both children large enough
    """
    x = np.asarray(values, dtype=float).reshape(-1, 1)
    y = np.asarray(targets, dtype=float)
    found = _search(x, y, np.arange(1), min_samples_leaf)
    if found is None:
        return None
    _, threshold, gain = found
    return threshold, gain


def _search(
    X: np.ndarray, y: np.ndarray, features: np.ndarray, min_samples_leaf: int
) -> Optional[Tuple[int, float, float]]:
    """(feature, threshold, gain) of the best split over ``features`` (ascending)."""
    n = y.shape[0]
    if n < 2 * min_samples_leaf or n < 2 or np.ptp(y) == 0:
        return None

    centered = y - y.mean()
    sse = float(np.dot(centered, centered))
    Xf = X[:, features]
    order = np.argsort(Xf, axis=0, kind="stable")
    xs = np.take_along_axis(Xf, order, axis=0)
    left_sum = np.cumsum(centered[order], axis=0)[:-1]
    total = centered.sum()
    n_left = np.arange(1, n, dtype=float)[:, None]
    n_right = n - n_left

    with np.errstate(divide="ignore", invalid="ignore"):
        gains = left_sum ** 2 / n_left + (total - left_sum) ** 2 / n_right - total ** 2 / n
    valid = xs[1:] > xs[:-1]
    valid &= (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
    gains = np.where(valid, gains, -np.inf)

    positions = np.argmax(gains, axis=0)
    column_gains = gains[positions, np.arange(len(features))]
    j = int(np.argmax(column_gains))
    gain = float(column_gains[j])
    if not gain > GAIN_TOLERANCE * sse:
        return None
    pos = int(positions[j])
    return int(features[j]), _threshold(float(xs[pos, j]), float(xs[pos + 1, j])), gain


class RegressionTree(Model):
    """CART regression tree with depth and leaf-size limits.

    Args:
        max_depth: maximum depth (0 = a single leaf)
        min_samples_leaf: minimum training rows per leaf
        max_features: fraction of columns drawn per split (1.0 = all)
    """

    kind = "regression_tree"

    def __init__(self, max_depth: int = 4, min_samples_leaf: int = 1, max_features: float = 1.0):
        super().__init__()
        if max_depth < 0:
            raise ParamError(f"Invalid max_depth: {max_depth}. Must be >= 0")
        if min_samples_leaf < 1:
            raise ParamError(f"Invalid min_samples_leaf: {min_samples_leaf}. Must be >= 1")
        if not 0 < max_features <= 1:
            raise ParamError(f"Invalid max_features: {max_features}. Must be in (0, 1]")
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.feature = np.zeros(0, dtype=int)
        self.threshold = np.zeros(0)
        self.left = np.zeros(0, dtype=int)
        self.right = np.zeros(0, dtype=int)
        self.value = np.zeros(0)
        self.gain = np.zeros(0)
        self.n_samples = np.zeros(0, dtype=int)
        self.depth = 0

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def fit(self, X, y, rng: Optional[np.random.Generator] = None) -> "RegressionTree":
        X, y = check_training_data(X, y, min_samples=1)
        p = X.shape[1]
        n_draw = p if self.max_features >= 1 else max(1, int(round(self.max_features * p)))
        if n_draw < p and rng is None:
            rng = np.random.default_rng(0)

        nodes = {"feature": [], "threshold": [], "left": [], "right": [], "value": [], "gain": [], "n": []}

        def add_node(value: float, n: int) -> int:
            for key, item in (("feature", LEAF), ("threshold", 0.0), ("left", LEAF), ("right", LEAF),
                              ("value", value), ("gain", 0.0), ("n", n)):
                nodes[key].append(item)
            return len(nodes["value"]) - 1

        def candidates() -> np.ndarray:
            if n_draw >= p:
                return np.arange(p)
            return np.sort(rng.choice(p, size=n_draw, replace=False))

        def grow(rows: np.ndarray, depth: int) -> int:
            target = y[rows]
            node = add_node(float(target.mean()), len(rows))
            self.depth = max(self.depth, depth)
            if depth >= self.max_depth:
                return node
            features = candidates()
            found = _search(X[rows], target, features, self.min_samples_leaf)
            if found is None and len(features) < p:
                rest = np.setdiff1d(np.arange(p), features)
                found = _search(X[rows], target, rest, self.min_samples_leaf)
            if found is None:
                return node
            feature, threshold, gain = found
            goes_left = X[rows, feature] <= threshold
            nodes["feature"][node] = feature
            nodes["threshold"][node] = threshold
            nodes["gain"][node] = gain
            nodes["left"][node] = grow(rows[goes_left], depth + 1)
            nodes["right"][node] = grow(rows[~goes_left], depth + 1)
            return node

        self.depth = 0
        grow(np.arange(X.shape[0]), 0)
        self.feature = np.asarray(nodes["feature"], dtype=int)
        self.threshold = np.asarray(nodes["threshold"], dtype=float)
        self.left = np.asarray(nodes["left"], dtype=int)
        self.right = np.asarray(nodes["right"], dtype=int)
        self.value = np.asarray(nodes["value"], dtype=float)
        self.gain = np.asarray(nodes["gain"], dtype=float)
        self.n_samples = np.asarray(nodes["n"], dtype=int)
        self.n_features_in = p
        return self

    def apply(self, X) -> np.ndarray:
        """Leaf index reached by every row."""
        X = self._check_input(X)
        node = np.zeros(X.shape[0], dtype=int)
        active = np.arange(X.shape[0])
        while active.size:
            current = node[active]
            split = self.feature[current]
            internal = split != LEAF
            active, current, split = active[internal], current[internal], split[internal]
            if not active.size:
                break
            goes_left = X[active, split] <= self.threshold[current]
            node[active] = np.where(goes_left, self.left[current], self.right[current])
        return node

    def predict(self, X) -> np.ndarray:
        return self.value[self.apply(X)]

    def raw_importance(self) -> np.ndarray:
        importance = np.zeros(self.n_features_in)
        internal = self.feature != LEAF
        np.add.at(importance, self.feature[internal], self.gain[internal])
        return importance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "max_features": self.max_features,
            "n_features_in": self.n_features_in,
            "depth": self.depth,
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "gain": self.gain.tolist(),
            "n_samples": self.n_samples.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RegressionTree":
        tree = cls(data["max_depth"], data["min_samples_leaf"], data["max_features"])
        tree.n_features_in = data["n_features_in"]
        tree.depth = data["depth"]
        tree.feature = np.asarray(data["feature"], dtype=int)
        tree.threshold = np.asarray(data["threshold"], dtype=float)
        tree.left = np.asarray(data["left"], dtype=int)
        tree.right = np.asarray(data["right"], dtype=int)
        tree.value = np.asarray(data["value"], dtype=float)
        tree.gain = np.asarray(data["gain"], dtype=float)
        tree.n_samples = np.asarray(data["n_samples"], dtype=int)
        return tree


def fit_tree(
    X, y, max_depth: int = 4, min_samples_leaf: int = 1,
    max_features: float = 1.0, seed: Optional[int] = None,
) -> RegressionTree:
    rng = np.random.default_rng(seed) if seed is not None else None
    return RegressionTree(max_depth, min_samples_leaf, max_features).fit(X, y, rng=rng)
