#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast - Stacked-ensemble rare-event prediction of startup success.

foundercast turns enriched founder profiles into a predicted funding amount and a
calibrated probability of success, and ships the synthetic generator and the
evaluation suite used to measure it.
"""

__title__ = "foundercast"
__version__ = "0.1.0"
__author__ = "Edoardo Balducci"
__license__ = "MIT"

from constants import (
    # Enums
    FeatureBranch,
    FeatureOrigin,
    FundingClass,
    MetaMode,
    BucketBy,
    AblationSuite,
    # Configuration classes
    BoostingParams,
    ForestParams,
    SplitSpec,
    GeneratorConfig,
    PipelineConfig,
    RunConfig,
)
from utils import configure_logging, FoundercastError
from schema import (
    FeatureDecl,
    FeatureSchema,
    FounderRecord,
    Label,
    Dataset,
    Split,
    default_schema,
    load_schema,
    load_dataset,
    save_dataset,
    split_dataset,
)
from synth import generate_dataset, generate_with_truth
from enrich import enrich_dataset, make_enrichment_provider
from encode import fit_encoder, encode_records, make_embedding_provider
from core import (
    FittedPipeline,
    PredictionRow,
    fit_pipeline,
    predict,
    predict_dataset,
    classify_funding,
    class_success_table,
    save_pipeline,
    load_pipeline,
)
from evalkit import (
    mape,
    precision_recall,
    precision_multiple,
    evaluate_pipeline,
    sweep_threshold,
    sensitivity,
    sensitivity_stability,
    run_ablation,
)

__all__ = [
    "__title__",
    "__version__",
    # Enums
    "FeatureBranch",
    "FeatureOrigin",
    "FundingClass",
    "MetaMode",
    "BucketBy",
    "AblationSuite",
    # Configuration classes
    "BoostingParams",
    "ForestParams",
    "SplitSpec",
    "GeneratorConfig",
    "PipelineConfig",
    "RunConfig",
    # Utilities
    "configure_logging",
    "FoundercastError",
    # Data
    "FeatureDecl",
    "FeatureSchema",
    "FounderRecord",
    "Label",
    "Dataset",
    "Split",
    "default_schema",
    "load_schema",
    "load_dataset",
    "save_dataset",
    "split_dataset",
    "generate_dataset",
    "generate_with_truth",
    "enrich_dataset",
    "make_enrichment_provider",
    "fit_encoder",
    "encode_records",
    "make_embedding_provider",
    # Pipeline
    "FittedPipeline",
    "PredictionRow",
    "fit_pipeline",
    "predict",
    "predict_dataset",
    "classify_funding",
    "class_success_table",
    "save_pipeline",
    "load_pipeline",
    # Evaluation
    "mape",
    "precision_recall",
    "precision_multiple",
    "evaluate_pipeline",
    "sweep_threshold",
    "sensitivity",
    "sensitivity_stability",
    "run_ablation",
]
