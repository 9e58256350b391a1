#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Synthetic Data.

This module generates planted-signal datasets calibrated to the funding
class success probabilities, together with their ground truth:
- Feature samplers with closed-form standard deviations
- Latent log10 funding with a solved intercept
- Rate-matched success labels and consistent outcome fields
"""

from .generator import (
    FUNDING_CAP,
    DEFAULT_TEMPLATES,
    SAMPLERS,
    Sampler,
    GroundTruth,
    sampler_for,
    solve_offset,
    planted_importance,
    generate_dataset,
    generate_with_truth,
    write_truth,
)

__all__ = [
    "FUNDING_CAP",
    "DEFAULT_TEMPLATES",
    "SAMPLERS",
    "Sampler",
    "GroundTruth",
    "sampler_for",
    "solve_offset",
    "planted_importance",
    "generate_dataset",
    "generate_with_truth",
    "write_truth",
]
