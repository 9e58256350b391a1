#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Learners.

This module provides the four models of the stacked pipeline, written
directly on numpy/scipy:
- CART regression trees and the split search they share
- Gradient-boosted trees and random forests (base learners)
- Ridge linear regression (meta-model)
- L2-regularized logistic regression (success calibrator)
"""

from ._base import Model, check_training_data, model_from_dict, model_importance, predict
from .tree import RegressionTree, best_split, fit_tree
from .boosting import GradientBoostedTrees, fit_gbt
from .forest import RandomForest, fit_rf
from .linear import LinearModel, fit_linear
from .logistic import LogisticModel, LogisticObjective, fit_logistic

__all__ = [
    "Model",
    "check_training_data",
    "model_from_dict",
    "model_importance",
    "predict",
    "RegressionTree",
    "best_split",
    "fit_tree",
    "GradientBoostedTrees",
    "fit_gbt",
    "RandomForest",
    "fit_rf",
    "LinearModel",
    "fit_linear",
    "LogisticModel",
    "LogisticObjective",
    "fit_logistic",
]
