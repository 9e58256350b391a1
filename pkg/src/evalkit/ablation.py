#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Ablation suites.

Every variant is trained on the same training partition and evaluated on
the same pooled evaluation subsets as the full pipeline; deltas are the
variant minus the full pipeline. An undefined precision (nothing predicted
positive) counts as 0 in the deltas.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

from joblib import Parallel, delayed

from constants import AblationSuite, FeatureBranch, FeatureOrigin, MetaMode, PipelineConfig, SplitSpec
from core import fit_pipeline
from schema import Dataset, FeatureSchema, Split, split_dataset
from utils import derive_seed
from utils.errors import AblationError, ParamError
from .report import OVERALL, evaluate_pipeline

logger = logging.getLogger(__name__)

FULL = "full"
DEFAULT_EMBEDDING_PROVIDERS = ("mock", "none")


@dataclass(frozen=True)
class AblationVariant:
    """One modified pipeline: dropped schema parts and/or changed components."""

    name: str
    drop_branches: Tuple[str, ...] = ()
    drop_origins: Tuple[str, ...] = ()
    use_gbt: bool = True
    use_rf: bool = True
    meta_mode: MetaMode = MetaMode.LINEAR
    embedding_provider: Optional[str] = None

    def schema_for(self, schema: FeatureSchema) -> FeatureSchema:
        reduced = schema.without(branches=self.drop_branches, origins=self.drop_origins)
        if len(reduced) == 0:
            raise AblationError(f"variant {self.name} leaves no features")
        if all(decl.branch is FeatureBranch.TEXTUAL for decl in reduced):
            raise AblationError(f"variant {self.name} leaves no features for the base learners")
        return reduced

    def config_for(self, config: PipelineConfig, seed: int) -> PipelineConfig:
        if not (self.use_gbt and config.use_gbt) and not (self.use_rf and config.use_rf):
            raise AblationError(f"variant {self.name} leaves no base learner")
        changes = dict(
            use_gbt=config.use_gbt and self.use_gbt,
            use_rf=config.use_rf and self.use_rf,
            meta_mode=self.meta_mode if self.meta_mode is not MetaMode.LINEAR else config.meta_mode,
            seed=seed,
        )
        if self.embedding_provider is not None:
            changes["embedding_provider"] = self.embedding_provider
        try:
            return config.with_overrides(**changes)
        except ParamError as e:
            raise AblationError(f"variant {self.name}: {e}") from None


@dataclass(frozen=True)
class AblationRow:
    variant: str
    n: int
    baseline_rate: float
    precision: Optional[float]
    precision_multiple: Optional[float]
    recall: float
    delta_multiple: float = 0.0
    delta_recall: float = 0.0
    split_fingerprint: str = ""

    @property
    def precision_defined(self) -> bool:
        return self.precision is not None

    def to_dict(self) -> dict:
        data = dict(self.__dict__)
        data["precision_defined"] = self.precision_defined
        return data


@dataclass
class AblationResult:
    suite: str
    full: AblationRow
    rows: List[AblationRow] = field(default_factory=list)

    def row(self, variant: str) -> AblationRow:
        for row in self.rows:
            if row.variant == variant:
                return row
        raise KeyError(variant)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "full": self.full.to_dict(), "rows": [r.to_dict() for r in self.rows]}


def suite_variants(
    suite: Union[str, AblationSuite], providers: Sequence[str] = DEFAULT_EMBEDDING_PROVIDERS
) -> List[AblationVariant]:
    """Variant definitions of a suite."""
    suite = AblationSuite.from_string(suite)
    if suite is AblationSuite.LLM_FEATURES:
        return [AblationVariant("without_llm_features", drop_origins=(FeatureOrigin.LLM_DERIVED.value,))]
    if suite is AblationSuite.EMBEDDINGS:
        return [AblationVariant(f"embeddings_{p}", embedding_provider=p) for p in providers]
    if suite is AblationSuite.MODEL_COMPONENTS:
        return [
            AblationVariant("without_gbt", use_gbt=False),
            AblationVariant("without_rf", use_rf=False),
            AblationVariant("without_meta", meta_mode=MetaMode.AVERAGE),
        ]
    return [AblationVariant(f"without_{branch.value}", drop_branches=(branch.value,)) for branch in FeatureBranch]


def _multiple(row) -> float:
    return row.precision_multiple if row.precision_multiple is not None else 0.0


def _evaluate(name: str, split: Split, schema: FeatureSchema, config: PipelineConfig) -> AblationRow:
    pipeline = fit_pipeline(split.train.with_schema(schema), config)
    subsets = [(f"subset_{i + 1}", subset.with_schema(schema)) for i, subset in enumerate(split.eval_subsets)]
    report = evaluate_pipeline(pipeline, subsets)
    pooled = report.overall or report.rows[0]
    logger.info("ablation variant %s: multiple %s, recall %.3f", name, pooled.precision_multiple, pooled.recall)
    return AblationRow(
        variant=name,
        n=pooled.n,
        baseline_rate=pooled.baseline_rate,
        precision=pooled.precision,
        precision_multiple=pooled.precision_multiple,
        recall=pooled.recall,
        split_fingerprint=split.fingerprint,
    )


def run_variants(
    dataset: Dataset,
    variants: Sequence[AblationVariant],
    config: Optional[PipelineConfig] = None,
    split_spec: Optional[SplitSpec] = None,
    suite: str = "custom",
    n_jobs: int = 1,
) -> AblationResult:
    """Train and evaluate the full pipeline and every variant on one shared split.

    Raises:
        AblationError: a variant without features or without base learners
    """
    config = config or PipelineConfig()
    split_spec = split_spec or SplitSpec.scaled(len(dataset), seed=config.seed)
    if split_spec.eval_subset_count < 1:
        raise ParamError("ablation needs at least one evaluation subset")
    prepared = [
        (v.name, v.schema_for(dataset.schema), v.config_for(config, derive_seed(config.seed, suite, v.name)))
        for v in variants
    ]
    split = split_dataset(dataset, split_spec)

    jobs = [(FULL, dataset.schema, config)] + prepared
    evaluated = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_evaluate)(name, split, schema, variant_config) for name, schema, variant_config in jobs
    )
    full, rows = evaluated[0], []
    for row in evaluated[1:]:
        rows.append(
            replace(
                row,
                delta_multiple=_multiple(row) - _multiple(full),
                delta_recall=row.recall - full.recall,
            )
        )
    return AblationResult(suite, full, rows)


def run_ablation(
    suite: Union[str, AblationSuite],
    dataset: Dataset,
    config: Optional[PipelineConfig] = None,
    split_spec: Optional[SplitSpec] = None,
    providers: Sequence[str] = DEFAULT_EMBEDDING_PROVIDERS,
    n_jobs: int = 1,
) -> AblationResult:
    """Run one of the four ablation suites.

    Suites: ``llm_features`` (drop every LLM-derived feature),
    ``embeddings`` (one variant per embedding provider, ``mock`` and
    ``none`` by default), ``model_components`` (drop GBT, drop RF, replace
    the meta-model by an average) and ``feature_categories`` (drop each
    feature branch in turn).
    """
    suite = AblationSuite.from_string(suite)
    return run_variants(dataset, suite_variants(suite, providers), config, split_spec, suite.value, n_jobs)
