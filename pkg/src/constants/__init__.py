#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Constants and Configuration Classes.

This module provides the enums and dataclass configurations shared across
the package so that stages exchange typed values instead of loose strings.
"""

from .constants import (
    # constants
    SUCCESS_THRESHOLD_USD,
    UNSUCCESSFUL_FUNDING_RANGE,
    TARGET_TRANSFORM,
    CLASS_SUCCESS_PROBABILITIES,
    DEFAULT_SIGNAL_WEIGHTS,
    # enums
    FeatureBranch,
    FeatureOrigin,
    EnrichmentStatus,
    ViolationKind,
    ProviderKind,
    AblationSuite,
    MetaMode,
    BucketBy,
    FundingClass,
    # configuration classes
    BoostingParams,
    ForestParams,
    SplitSpec,
    GeneratorConfig,
    PipelineConfig,
    RunConfig,
)

__all__ = [
    "SUCCESS_THRESHOLD_USD",
    "UNSUCCESSFUL_FUNDING_RANGE",
    "TARGET_TRANSFORM",
    "CLASS_SUCCESS_PROBABILITIES",
    "DEFAULT_SIGNAL_WEIGHTS",
    "FeatureBranch",
    "FeatureOrigin",
    "EnrichmentStatus",
    "ViolationKind",
    "ProviderKind",
    "AblationSuite",
    "MetaMode",
    "BucketBy",
    "FundingClass",
    "BoostingParams",
    "ForestParams",
    "SplitSpec",
    "GeneratorConfig",
    "PipelineConfig",
    "RunConfig",
]
