#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Train / evaluation partitioning.
"""

import logging
from typing import List, NamedTuple

import numpy as np

from constants import SplitSpec
from utils import fingerprint
from utils.errors import SplitError
from .dataset import Dataset

logger = logging.getLogger(__name__)


class Split(NamedTuple):
    train: Dataset
    eval_subsets: List[Dataset]

    @property
    def fingerprint(self) -> str:
        """Hash of the partition ids; equal for byte-identical splits."""
        return fingerprint(
            {"train": self.train.ids, "eval": [subset.ids for subset in self.eval_subsets]}
        )


def _allocate(sizes: List[int], positives: int, total: int) -> List[int]:
    """Largest-remainder allocation of ``positives`` proportional to ``sizes``."""
    exact = [size * positives / total for size in sizes]
    quotas = [int(np.floor(q)) for q in exact]
    leftover = positives - sum(quotas)
    order = sorted(range(len(sizes)), key=lambda i: (-(exact[i] - quotas[i]), i))
    for i in order[:leftover]:
        quotas[i] += 1
    return quotas


def split_dataset(dataset: Dataset, spec: SplitSpec) -> Split:
    """Partition a dataset into a training set and disjoint evaluation subsets.

    With ``spec.stratified`` each partition receives its proportional share
    of positives (largest remainder), so partition success rates stay within
    one record of the dataset rate. Records not needed by ``spec`` are left
    out. Every partition keeps the dataset's record order.

    Raises:
        SplitError: spec larger than the dataset, or a stratified split of
            unlabeled data
    """
    n = len(dataset)
    if spec.total > n:
        raise SplitError(
            f"Split needs {spec.total} records "
            f"({spec.train_size} + {spec.eval_subset_count}x{spec.eval_subset_size}), "
            f"dataset has {n}"
        )

    rng = np.random.default_rng(spec.seed)
    sizes = [spec.train_size] + [spec.eval_subset_size] * spec.eval_subset_count
    ids = np.array(dataset.ids, dtype=object)

    if spec.stratified:
        if not dataset.is_labeled:
            raise SplitError("Stratified split requires every record to be labeled")
        success = dataset.success()
        pos = ids[success][rng.permutation(int(success.sum()))]
        neg = ids[~success][rng.permutation(int((~success).sum()))]
        quotas = _allocate(sizes + [n - spec.total], len(pos), n)
        parts, p_at, n_at = [], 0, 0
        for size, quota in zip(sizes, quotas):
            chosen = list(pos[p_at:p_at + quota]) + list(neg[n_at:n_at + size - quota])
            p_at += quota
            n_at += size - quota
            parts.append(set(chosen))
    else:
        shuffled = ids[rng.permutation(n)]
        parts, at = [], 0
        for size in sizes:
            parts.append(set(shuffled[at:at + size]))
            at += size

    partitions = [dataset.subset([i for i in dataset.ids if i in part]) for part in parts]
    logger.info(
        "split %d records into train=%d and %d eval subsets of %d (stratified=%s)",
        n, spec.train_size, spec.eval_subset_count, spec.eval_subset_size, spec.stratified,
    )
    return Split(partitions[0], partitions[1:])
