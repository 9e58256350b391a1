#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Feature sensitivity of a fitted pipeline and its stability under outliers.

The meta-model's channel weights (``|coefficient| * OOF channel std``) are
normalized over its input channels. The gradient-boosted and forest channel
masses are spread over tabular features by each model's split-gain
importance; every embedding column's mass goes to the textual feature it
embeds.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.stats import kendalltau

from constants import PipelineConfig
from core import FittedPipeline, fit_pipeline
from learners import model_importance
from schema import Dataset
from utils import derive_seed
from utils.errors import ParamError, SampleError, StateError

logger = logging.getLogger(__name__)

EMBEDDING_MARKER = "__emb"

MAX_OUTLIER_FRACTION = 0.2


@dataclass(frozen=True)
class SensitivityTable:
    """(feature, share) rows, largest share first; shares sum to 1."""

    rows: Tuple[Tuple[str, float], ...]

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def shares(self) -> Dict[str, float]:
        return dict(self.rows)

    @property
    def ranking(self) -> List[str]:
        return [name for name, _ in self.rows]

    def share(self, feature: str) -> float:
        return self.shares[feature]

    def top(self, k: int = 10) -> List[Tuple[str, float]]:
        return list(self.rows[:k])

    def ratio(self, a: str, b: str) -> Optional[float]:
        """Share of ``a`` over share of ``b``; ``None`` when ``b`` has no share."""
        shares = self.shares
        return shares[a] / shares[b] if shares[b] > 0 else None

    def to_dict(self) -> dict:
        return {"rows": [{"feature": name, "share": share} for name, share in self.rows]}

    @classmethod
    def from_dict(cls, data: dict) -> "SensitivityTable":
        return cls(tuple((row["feature"], float(row["share"])) for row in data["rows"]))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=["feature", "share"])


def _normalized(raw: np.ndarray) -> np.ndarray:
    total = raw.sum()
    if not total > 0:
        return np.full(raw.shape, 1.0 / raw.size) if raw.size else raw
    return raw / total


def source_feature(column: str) -> str:
    """Feature an encoded column belongs to (embedding columns -> their textual feature)."""
    if EMBEDDING_MARKER in column:
        return column.rsplit(EMBEDDING_MARKER, 1)[0]
    return column


def sensitivity(pipeline: FittedPipeline) -> SensitivityTable:
    """Share of predictive weight per schema feature.

    Raises:
        StateError: unfitted pipeline
    """
    if pipeline is None or pipeline.calibrator is None or not pipeline.calibrator.is_fitted:
        raise StateError("sensitivity needs a fitted pipeline")

    state = pipeline.encoder_state
    channels = pipeline.channels
    if pipeline.meta is not None:
        channel_weights = _normalized(pipeline.meta.raw_importance())
    else:
        channel_weights = _normalized(
            np.concatenate([np.ones(len(channels)), np.zeros(len(state.embedding_columns))])
        )

    shares = {decl.name: 0.0 for decl in pipeline.schema}
    models = {"gbt": pipeline.gbt, "rf": pipeline.rf}
    for weight, channel in zip(channel_weights, channels):
        for column, part in zip(state.tabular_columns, model_importance(models[channel])):
            shares[column] += weight * part
    for weight, column in zip(channel_weights[len(channels):], state.embedding_columns):
        shares[source_feature(column)] += weight

    total = sum(shares.values())
    rows = sorted(((name, value / total) for name, value in shares.items()), key=lambda r: (-r[1], r[0]))
    return SensitivityTable(tuple(rows))


def rank_correlation(a: SensitivityTable, b: SensitivityTable, k: int = 10) -> float:
    """Kendall tau of two tables' shares over the union of their top-``k`` features."""
    names = sorted({name for name, _ in a.top(k)} | {name for name, _ in b.top(k)})
    x = [a.shares.get(name, 0.0) for name in names]
    y = [b.shares.get(name, 0.0) for name in names]
    if x == y:
        return 1.0
    tau = kendalltau(x, y)[0]
    return float(tau) if np.isfinite(tau) else 0.0


class StabilityResult(NamedTuple):
    runs: List[Tuple[float, int]]
    tables: List[SensitivityTable]
    tau: np.ndarray

    @property
    def mean_tau(self) -> float:
        n = len(self.tables)
        if n < 2:
            return 1.0
        off = self.tau[~np.eye(n, dtype=bool)]
        return float(off.mean())

    def top_features(self) -> List[str]:
        return [table.ranking[0] for table in self.tables]

    def to_dict(self) -> dict:
        return {
            "runs": [{"outlier_fraction": f, "repeat": r} for f, r in self.runs],
            "tables": [table.to_dict() for table in self.tables],
            "tau": self.tau.tolist(),
            "mean_tau": self.mean_tau,
        }


def outlier_mask(dataset: Dataset) -> np.ndarray:
    """Records in the bottom or top funding decile of their success class."""
    funding = dataset.funding()
    success = dataset.success()
    extreme = np.zeros(len(dataset), dtype=bool)
    for rows in (np.flatnonzero(success), np.flatnonzero(~success)):
        k = int(round(0.1 * rows.size))
        if k == 0:
            continue
        ranked = rows[np.argsort(funding[rows], kind="stable")]
        extreme[ranked[:k]] = True
        extreme[ranked[-k:]] = True
    return extreme


def outlier_resample(
    dataset: Dataset, fraction: float, size: int, rng: np.random.Generator
) -> Dataset:
    """Subset where ``fraction`` of the records come from the top/bottom funding deciles.

    Deciles are taken by funding rank within each success class (ties keep
    dataset order), so both pools hold both classes.

    Raises:
        SampleError: not enough records in a pool, or a single-class sample
    """
    extreme = outlier_mask(dataset)
    outliers = np.flatnonzero(extreme)
    middle = np.flatnonzero(~extreme)
    n_out = int(round(fraction * size))
    n_mid = size - n_out
    if n_out > outliers.size or n_mid > middle.size:
        raise SampleError(
            f"cannot draw {n_out} outlier and {n_mid} typical records "
            f"(pools of {outliers.size} and {middle.size})"
        )
    chosen = np.sort(
        np.concatenate([rng.choice(outliers, n_out, replace=False), rng.choice(middle, n_mid, replace=False)])
    )
    ids = [dataset.records[i].id for i in chosen]
    sample = dataset.subset(ids)
    drawn = sample.success()
    if drawn.all() or not drawn.any():
        raise SampleError("resample holds a single class")
    return sample


def _stability_run(config: PipelineConfig, dataset: Dataset, fraction: float, repeat: int,
                   size: int, seed: int) -> SensitivityTable:
    rng = np.random.default_rng(derive_seed(seed, "stability", repr(float(fraction)), repeat))
    sample = outlier_resample(dataset, fraction, size, rng)
    table = sensitivity(fit_pipeline(sample, config))
    logger.info("stability run fraction=%.2f repeat=%d: top feature %s", fraction, repeat, table.ranking[0])
    return table


def sensitivity_stability(
    config: PipelineConfig,
    dataset: Dataset,
    outlier_fractions: Sequence[float] = (0.0, 0.05, 0.10),
    repeats: int = 1,
    seed: int = 0,
    sample_size: Optional[int] = None,
    n_jobs: int = 1,
) -> StabilityResult:
    """Retrain on outlier-enriched resamples and compare the sensitivity rankings.

    One run per (fraction, repeat); runs with the same fraction, repeat and
    seed draw the same resample. ``sample_size`` defaults to half the dataset.

    Returns:
        the runs, their tables and the pairwise Kendall tau matrix over
        top-10 features

    Raises:
        ParamError: a fraction outside [0, 0.2] or ``repeats < 1``
        SampleError: an infeasible resample
    """
    fractions = [float(f) for f in outlier_fractions]
    bad = [f for f in fractions if not 0 <= f <= MAX_OUTLIER_FRACTION]
    if bad:
        raise ParamError(f"outlier fractions must lie in [0, {MAX_OUTLIER_FRACTION}]: {bad}")
    if repeats < 1:
        raise ParamError(f"Invalid repeats: {repeats}. Must be >= 1")
    if not dataset.is_labeled:
        raise SampleError("stability analysis needs a labeled dataset")
    size = sample_size or len(dataset) // 2

    runs = [(f, r) for f in fractions for r in range(repeats)]
    tables = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_stability_run)(config, dataset, f, r, size, seed) for f, r in runs
    )
    n = len(tables)
    tau = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            tau[i, j] = tau[j, i] = rank_correlation(tables[i], tables[j])
    return StabilityResult(runs, list(tables), tau)
