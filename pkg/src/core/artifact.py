#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Pipeline artifact: one versioned JSON document holding the schema, the
encoder state, every model block, the threshold and the training
fingerprint. Floats are written in their shortest round-trip form, so a
loaded pipeline predicts bit-identically to the one that was saved.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from constants import PipelineConfig
from encode import EncoderState
from learners import model_from_dict
from schema import FeatureSchema
from utils import fingerprint, load_json, save_json
from utils.errors import ArtifactError, SchemaMismatchError
from .core import FittedPipeline, StackingTrace

logger = logging.getLogger(__name__)

ARTIFACT_FORMAT = "foundercast.pipeline"
ARTIFACT_VERSION = 1

# config fields that change how a fit runs, never what it produces
EXECUTION_SETTINGS = ("n_jobs",)


def pipeline_to_dict(pipeline: FittedPipeline) -> Dict[str, Any]:
    return {
        "format": ARTIFACT_FORMAT,
        "version": ARTIFACT_VERSION,
        "schema": pipeline.schema.to_dict(),
        "schema_hash": pipeline.schema.hash,
        "config": pipeline.config.to_dict(),
        "encoder_state": pipeline.encoder_state.to_dict(),
        "models": {
            "gbt": pipeline.gbt.to_dict() if pipeline.gbt is not None else None,
            "rf": pipeline.rf.to_dict() if pipeline.rf is not None else None,
            "meta": pipeline.meta.to_dict() if pipeline.meta is not None else None,
            "calibrator": pipeline.calibrator.to_dict(),
        },
        "threshold": pipeline.threshold,
        "seed": pipeline.config.seed,
        "training_fingerprint": dict(pipeline.training_fingerprint),
        "trace": pipeline.trace.to_dict() if pipeline.trace is not None else None,
    }


def _model(block):
    return model_from_dict(block) if block is not None else None


def pipeline_from_dict(data: Dict[str, Any]) -> FittedPipeline:
    """Rebuild a pipeline from :func:`pipeline_to_dict` output.

    Raises:
        ArtifactError: unknown format/version or missing blocks
        SchemaMismatchError: stored schema does not match its recorded hash
    """
    if not isinstance(data, dict) or data.get("format") != ARTIFACT_FORMAT:
        raise ArtifactError(f"not a {ARTIFACT_FORMAT} artifact")
    if data.get("version") != ARTIFACT_VERSION:
        raise ArtifactError(
            f"Invalid artifact version: {data.get('version')}. Valid options: [{ARTIFACT_VERSION}]"
        )
    try:
        schema = FeatureSchema.from_dict(data["schema"])
        if schema.hash != data["schema_hash"]:
            raise SchemaMismatchError(data["schema_hash"], schema.hash)
        models = data["models"]
        return FittedPipeline(
            config=PipelineConfig.from_dict(data["config"]),
            schema=schema,
            encoder_state=EncoderState.from_dict(data["encoder_state"]),
            gbt=_model(models["gbt"]),
            rf=_model(models["rf"]),
            meta=_model(models["meta"]),
            calibrator=model_from_dict(models["calibrator"]),
            threshold=float(data["threshold"]),
            training_fingerprint=dict(data["training_fingerprint"]),
            trace=StackingTrace.from_dict(data["trace"]) if data.get("trace") else None,
        )
    except (KeyError, TypeError) as e:
        raise ArtifactError(f"malformed artifact: missing or invalid {e}") from None


def _hashed_content(data: Dict[str, Any]) -> Dict[str, Any]:
    config = {k: v for k, v in data["config"].items() if k not in EXECUTION_SETTINGS}
    return {**data, "config": config}


def pipeline_hash(pipeline: FittedPipeline) -> str:
    """sha256 of the canonical artifact without execution settings; equal for identical fits."""
    return fingerprint(_hashed_content(pipeline_to_dict(pipeline)))


def save_pipeline(pipeline: FittedPipeline, path: Union[str, Path]) -> str:
    """Write the artifact and return its hash."""
    data = pipeline_to_dict(pipeline)
    save_json(path, data, indent=None)
    digest = fingerprint(_hashed_content(data))
    logger.info("wrote pipeline artifact %s (%s)", path, digest[:12])
    return digest


def load_pipeline(path: Union[str, Path]) -> FittedPipeline:
    """Load an artifact written by :func:`save_pipeline`.

    Raises:
        FileNotFoundError: no file at ``path``
        ArtifactError: not valid JSON or not a pipeline artifact
    """
    try:
        data = load_json(path)
    except json.JSONDecodeError as e:
        raise ArtifactError(f"{path}: not valid JSON ({e})") from None
    pipeline = pipeline_from_dict(data)
    logger.debug("loaded pipeline artifact %s", path)
    return pipeline
