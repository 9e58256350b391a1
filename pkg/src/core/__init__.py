#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Core.

This module contains the stacked pipeline itself:
- fit_pipeline(): out-of-fold stacking, meta-model and calibration
- predict(): funding, success probability, decision and funding class
- Funding classes and the per-class success table
- The versioned pipeline artifact
"""

from .core import (
    GBT_CHANNEL,
    RF_CHANNEL,
    PREDICTION_COLUMNS,
    FittedPipeline,
    PredictionRow,
    StackingTrace,
    assign_folds,
    out_of_fold,
    fit_pipeline,
    predict,
    predict_dataset,
    prediction_rows,
    predictions_frame,
    save_predictions,
)
from .funding import (
    ClassSuccessRow,
    classify_funding,
    funding_class,
    success_by_class,
    class_success_table,
    class_table_rows,
)
from .artifact import (
    ARTIFACT_FORMAT,
    ARTIFACT_VERSION,
    pipeline_to_dict,
    pipeline_from_dict,
    pipeline_hash,
    save_pipeline,
    load_pipeline,
)

__all__ = [
    "GBT_CHANNEL",
    "RF_CHANNEL",
    "PREDICTION_COLUMNS",
    "FittedPipeline",
    "PredictionRow",
    "StackingTrace",
    "assign_folds",
    "out_of_fold",
    "fit_pipeline",
    "predict",
    "predict_dataset",
    "prediction_rows",
    "predictions_frame",
    "save_predictions",
    "ClassSuccessRow",
    "classify_funding",
    "funding_class",
    "success_by_class",
    "class_success_table",
    "class_table_rows",
    "ARTIFACT_FORMAT",
    "ARTIFACT_VERSION",
    "pipeline_to_dict",
    "pipeline_from_dict",
    "pipeline_hash",
    "save_pipeline",
    "load_pipeline",
]
