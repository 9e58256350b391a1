#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Schema and Data.

This module provides the data model shared by every stage:
- Feature declarations and the default 63-feature schema
- Founder records, labeled datasets and validation
- The CSV dataset format
- Train / evaluation splits
"""

from .schema import (
    FeatureDecl,
    FeatureSchema,
    BOOLEAN_LEVELS,
    EDUCATION_LEVELS,
    DOMAIN_EXPERTISE_LEVELS,
    SKILL_RELEVANCE_LEVELS,
    SCALE_LEVELS,
    CATEGORY_LEVELS,
    default_schema,
    load_schema,
    save_schema,
    humanize,
)
from .dataset import (
    ID_COLUMN,
    PROFILE_TEXT,
    TEXT_SUFFIX,
    FounderRecord,
    Label,
    Dataset,
    Violation,
    label_success,
    validate_record,
    validate_label,
    validate_dataset,
    load_dataset,
    save_dataset,
    dataset_frame,
)
from .split import Split, split_dataset

__all__ = [
    "FeatureDecl",
    "FeatureSchema",
    "BOOLEAN_LEVELS",
    "EDUCATION_LEVELS",
    "DOMAIN_EXPERTISE_LEVELS",
    "SKILL_RELEVANCE_LEVELS",
    "SCALE_LEVELS",
    "CATEGORY_LEVELS",
    "default_schema",
    "load_schema",
    "save_schema",
    "humanize",
    "ID_COLUMN",
    "PROFILE_TEXT",
    "TEXT_SUFFIX",
    "FounderRecord",
    "Label",
    "Dataset",
    "Violation",
    "label_success",
    "validate_record",
    "validate_label",
    "validate_dataset",
    "load_dataset",
    "save_dataset",
    "dataset_frame",
    "Split",
    "split_dataset",
]
