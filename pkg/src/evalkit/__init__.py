#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Evaluation Kit.

This module provides every measurement run on a fitted pipeline:
- MAPE, precision / recall and precision as a multiple of the baseline
- Threshold sweeps and the precision plateau
- Feature sensitivity and its stability under outlier resampling
- The four ablation suites
- Evaluation reports (JSON, text, CSV)
"""

from .metrics import PrecisionRecall, mape, precision_recall, precision_multiple, baseline_rate
from .sweep import DEFAULT_GRID, SweepRow, sweep_probabilities, sweep_threshold, precision_plateau, sweep_frame
from .sensitivity import (
    SensitivityTable,
    StabilityResult,
    sensitivity,
    sensitivity_stability,
    rank_correlation,
    outlier_mask,
    outlier_resample,
    source_feature,
)
from .report import (
    OVERALL,
    EvaluationRow,
    EvaluationReport,
    evaluation_row,
    evaluate_pipeline,
    load_report,
    render_text,
)
from .ablation import (
    FULL,
    DEFAULT_EMBEDDING_PROVIDERS,
    AblationVariant,
    AblationRow,
    AblationResult,
    suite_variants,
    run_variants,
    run_ablation,
)

__all__ = [
    "PrecisionRecall",
    "mape",
    "precision_recall",
    "precision_multiple",
    "baseline_rate",
    "DEFAULT_GRID",
    "SweepRow",
    "sweep_probabilities",
    "sweep_threshold",
    "precision_plateau",
    "sweep_frame",
    "SensitivityTable",
    "StabilityResult",
    "sensitivity",
    "sensitivity_stability",
    "rank_correlation",
    "outlier_mask",
    "outlier_resample",
    "source_feature",
    "OVERALL",
    "EvaluationRow",
    "EvaluationReport",
    "evaluation_row",
    "evaluate_pipeline",
    "load_report",
    "render_text",
    "FULL",
    "DEFAULT_EMBEDDING_PROVIDERS",
    "AblationVariant",
    "AblationRow",
    "AblationResult",
    "suite_variants",
    "run_variants",
    "run_ablation",
]
