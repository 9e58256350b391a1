#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast Constants and Configuration Classes

This module provides the enum-based constants and dataclass configurations
shared by every stage of the pipeline: feature branches and origins, funding
classes, provider kinds, ablation suites, and the configuration objects for
the generator, the train/eval split, the learners and the stacked pipeline.
Strings are accepted wherever an enum is expected and are converted through
``from_string`` so JSON config files stay readable.
"""

import sys

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # Python 3.10 backport with the same str()/format() behavior
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from dataclasses import dataclass, field, asdict, fields, replace
from typing import Optional, Union, Dict, List, Tuple, Any
import math

from utils.errors import ParamError


# Success threshold on any outcome field (valuation, acquisition, funding).
SUCCESS_THRESHOLD_USD = 500e6

# Funding range that unsuccessful companies are drawn from / validated against.
UNSUCCESSFUL_FUNDING_RANGE = (100e3, 4e6)

TARGET_TRANSFORM = "log10"


class _Lookup(StrEnum):
    """StrEnum with a tolerant ``from_string`` shared by the simple enums."""

    @classmethod
    def from_string(cls, value):
        if isinstance(value, cls):
            return value

        key = str(value).strip().lower().replace("-", "_")
        for member in cls:
            if key in (member.value.lower().replace("-", "_"), member.name.lower()):
                return member

        raise ValueError(
            f"Invalid {cls.__name__}: {value}. Valid options: {[m.value for m in cls]}"
        )


class FeatureBranch(_Lookup):
    """Encoding branch a feature belongs to."""

    CATEGORICAL = "categorical"
    TEXTUAL = "textual"
    CONTINUOUS = "continuous"
    BOOLEAN = "boolean"


class FeatureOrigin(_Lookup):
    """Whether a feature comes from structured data or from LLM enrichment."""

    DETERMINISTIC = "deterministic"
    LLM_DERIVED = "llm_derived"


class EnrichmentStatus(_Lookup):
    OK = "ok"
    REJECTED = "rejected"
    PROVIDER_ERROR = "provider_error"


class ViolationKind(_Lookup):
    """Kinds of per-record validation findings."""

    OUT_OF_RANGE = "out_of_range"
    UNKNOWN_LEVEL = "unknown_level"
    NON_FINITE = "non_finite"
    NOT_BOOLEAN = "not_boolean"
    FUNDING_OUT_OF_RANGE = "funding_out_of_range"


class ProviderKind(_Lookup):
    """Provider selection for enrichment and embeddings."""

    MOCK = "mock"
    NONE = "none"
    EXTERNAL = "external"


class AblationSuite(_Lookup):
    LLM_FEATURES = "llm_features"
    EMBEDDINGS = "embeddings"
    MODEL_COMPONENTS = "model_components"
    FEATURE_CATEGORIES = "feature_categories"


class MetaMode(_Lookup):
    """How base-learner outputs are combined into the funding estimate."""

    LINEAR = "linear"
    AVERAGE = "average"


class BucketBy(_Lookup):
    """Which funding amount places a record in a funding class."""

    PREDICTED = "predicted"
    ACTUAL = "actual"


class FundingClass(StrEnum):
    """Dollar buckets used to summarize success probability by funding.

    Bounds are half-open ``[lower, upper)``; the lowest class also absorbs
    amounts under $100K (reported with a low-range flag by the pipeline).
    """

    UNDER_1M = "100K-1M"
    ONE_TO_TEN_M = "1M-10M"
    TEN_TO_HUNDRED_M = "10M-100M"
    HUNDRED_M_TO_1B = "100M-1B"
    OVER_1B = "1B+"

    @classmethod
    def from_string(cls, value: Union[str, "FundingClass"]) -> "FundingClass":
        if isinstance(value, cls):
            return value

        normalized = str(value).strip().upper().replace(" ", "").replace("$", "")
        for member in cls:
            if normalized in (member.value.upper(), member.name):
                return member

        raise ValueError(
            f"Invalid funding class: {value}. Valid options: {[m.value for m in cls]}"
        )

    @property
    def lower(self) -> float:
        return _FUNDING_BOUNDS[self][0]

    @property
    def upper(self) -> float:
        return _FUNDING_BOUNDS[self][1]

    @classmethod
    def ordered(cls) -> List["FundingClass"]:
        return list(cls)


_FUNDING_BOUNDS = {
    FundingClass.UNDER_1M: (0.0, 1e6),
    FundingClass.ONE_TO_TEN_M: (1e6, 1e7),
    FundingClass.TEN_TO_HUNDRED_M: (1e7, 1e8),
    FundingClass.HUNDRED_M_TO_1B: (1e8, 1e9),
    FundingClass.OVER_1B: (1e9, math.inf),
}

# Empirical success probability per funding class.
CLASS_SUCCESS_PROBABILITIES = {
    FundingClass.UNDER_1M: 0.0127,
    FundingClass.ONE_TO_TEN_M: 0.0841,
    FundingClass.TEN_TO_HUNDRED_M: 0.8089,
    FundingClass.HUNDRED_M_TO_1B: 0.9535,
    FundingClass.OVER_1B: 1.0,
}

# Planted contribution of each feature to log10(funding), per encoded unit.
# category_list and number_of_founders lead; education_level carries about a
# tenth of number_of_founders' weight.
DEFAULT_SIGNAL_WEIGHTS = {
    "category_list": 0.22,
    "number_of_founders": 0.30,
    "domain_expertise": 0.18,
    "skill_relevance": 0.12,
    "previous_startups": 0.12,
    "technical_depth": 0.08,
    "serial_founder": 0.15,
    "has_technical_cofounder": 0.12,
    "years_of_experience": 0.008,
    "education_level": 0.03,
}


def _coerce_class_map(mapping: Dict[Any, float]) -> Dict[FundingClass, float]:
    return {FundingClass.from_string(k): float(v) for k, v in mapping.items()}


# Configuration dataclasses


@dataclass
class BoostingParams:
    """Hyperparameters of the squared-loss gradient-boosted trees."""

    n_trees: int = 200
    max_depth: int = 4
    learning_rate: float = 0.05
    min_samples_leaf: int = 5
    subsample: float = 0.8

    def __post_init__(self):
        if self.n_trees < 0:
            raise ParamError(f"Invalid n_trees: {self.n_trees}. Must be >= 0")
        if not self.learning_rate > 0:
            raise ParamError(f"Invalid learning_rate: {self.learning_rate}. Must be > 0")
        if self.max_depth < 0:
            raise ParamError(f"Invalid max_depth: {self.max_depth}. Must be >= 0")
        if self.min_samples_leaf < 1:
            raise ParamError(
                f"Invalid min_samples_leaf: {self.min_samples_leaf}. Must be >= 1"
            )
        if not 0 < self.subsample <= 1:
            raise ParamError(f"Invalid subsample: {self.subsample}. Must be in (0, 1]")


@dataclass
class ForestParams:
    """Hyperparameters of the random-forest regressor."""

    n_trees: int = 300
    max_depth: int = 12
    min_samples_leaf: int = 2
    max_features: float = 1.0 / 3.0
    bootstrap: bool = True

    def __post_init__(self):
        if self.n_trees < 1:
            raise ParamError(f"Invalid n_trees: {self.n_trees}. A forest needs >= 1 tree")
        if self.max_depth < 0:
            raise ParamError(f"Invalid max_depth: {self.max_depth}. Must be >= 0")
        if self.min_samples_leaf < 1:
            raise ParamError(
                f"Invalid min_samples_leaf: {self.min_samples_leaf}. Must be >= 1"
            )
        if not 0 < self.max_features <= 1:
            raise ParamError(
                f"Invalid max_features: {self.max_features}. Must be in (0, 1]"
            )


@dataclass
class SplitSpec:
    """Train / evaluation partition sizes.

    Defaults reproduce 8,659 training records and three disjoint evaluation
    subsets of 722 out of 10,825.
    """

    train_size: int = 8659
    eval_subset_count: int = 3
    eval_subset_size: int = 722
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.train_size < 2:
            raise ParamError(f"Invalid train_size: {self.train_size}. Must be >= 2")
        if self.eval_subset_count < 0 or self.eval_subset_size < 0:
            raise ParamError("Evaluation subset count and size must be non-negative")

    @property
    def total(self) -> int:
        return self.train_size + self.eval_subset_count * self.eval_subset_size

    @classmethod
    def scaled(
        cls, n_records: int, seed: int = 0, stratified: bool = True
    ) -> "SplitSpec":
        """Same proportions as the default split, for any dataset size."""
        train = int(round(n_records * 8659 / 10825))
        subset = (n_records - train) // 3
        return cls(
            train_size=train,
            eval_subset_count=3,
            eval_subset_size=subset,
            stratified=stratified,
            seed=seed,
        )


@dataclass
class GeneratorConfig:
    """Parameters of the synthetic planted-signal dataset.

    ``base`` is the intercept of the planted log10-funding function; when
    left as ``None`` the generator solves for the intercept that makes the
    expected success rate equal ``positive_rate``.
    """

    n_records: int = 10825
    positive_rate: float = 0.085
    signal_weights: Dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_SIGNAL_WEIGHTS)
    )
    noise_sigma: float = 0.02
    class_success_probs: Dict[FundingClass, float] = field(
        default_factory=lambda: dict(CLASS_SUCCESS_PROBABILITIES)
    )
    text_templates: Optional[Dict[str, List[str]]] = None
    seed: int = 0
    base: Optional[float] = None
    emit_llm_values: bool = True
    block_size: int = 4096
    rate_tolerance: float = 0.007
    max_label_attempts: int = 200

    def __post_init__(self):
        if self.n_records < 1:
            raise ParamError(f"Invalid n_records: {self.n_records}. Must be >= 1")
        if not 0 < self.positive_rate < 1:
            raise ParamError(
                f"Invalid positive_rate: {self.positive_rate}. Must be in (0, 1)"
            )
        if self.noise_sigma < 0:
            raise ParamError(f"Invalid noise_sigma: {self.noise_sigma}. Must be >= 0")
        if self.block_size < 1:
            raise ParamError(f"Invalid block_size: {self.block_size}")

        probs = _coerce_class_map(self.class_success_probs)
        missing = [c.value for c in FundingClass if c not in probs]
        if missing:
            raise ParamError(f"class_success_probs is missing classes: {missing}")
        ordered = [probs[c] for c in FundingClass]
        if any(not 0.0 <= p <= 1.0 for p in ordered):
            raise ParamError("class_success_probs must lie in [0, 1]")
        if any(b < a for a, b in zip(ordered, ordered[1:])):
            raise ParamError(
                "class_success_probs must be non-decreasing across ascending classes"
            )
        self.class_success_probs = {c: probs[c] for c in FundingClass}
        self.signal_weights = {str(k): float(v) for k, v in self.signal_weights.items()}

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["class_success_probs"] = {
            c.value: p for c, p in self.class_success_probs.items()
        }
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GeneratorConfig":
        return cls(**_known_fields(cls, data))


@dataclass
class PipelineConfig:
    """Configuration of the stacked pipeline.

    ``use_gbt`` / ``use_rf`` / ``meta_mode`` exist for the component
    ablations; the default is the full architecture.
    """

    gbt: BoostingParams = field(default_factory=BoostingParams)
    rf: ForestParams = field(default_factory=ForestParams)
    linear_lambda: float = 1e-6
    logistic_lambda: float = 1e-3
    oof_folds: int = 5
    threshold: float = 0.8
    embedding_provider: str = ProviderKind.MOCK.value
    embedding_dim: int = 64
    use_gbt: bool = True
    use_rf: bool = True
    meta_mode: Union[str, MetaMode] = MetaMode.LINEAR
    seed: int = 0
    n_jobs: int = 1

    def __post_init__(self):
        if isinstance(self.gbt, dict):
            self.gbt = BoostingParams(**self.gbt)
        if isinstance(self.rf, dict):
            self.rf = ForestParams(**self.rf)
        self.meta_mode = MetaMode.from_string(self.meta_mode)

        if self.oof_folds < 2:
            raise ParamError(f"Invalid oof_folds: {self.oof_folds}. Must be >= 2")
        if not 0 < self.threshold < 1:
            raise ParamError(f"Invalid threshold: {self.threshold}. Must be in (0, 1)")
        if not (self.use_gbt or self.use_rf):
            raise ParamError("At least one base learner must be enabled")
        if self.linear_lambda < 0:
            raise ParamError(f"Invalid linear_lambda: {self.linear_lambda}")
        if not self.logistic_lambda > 0:
            raise ParamError(
                f"Invalid logistic_lambda: {self.logistic_lambda}. Must be > 0"
            )
        if self.embedding_dim < 1:
            raise ParamError(f"Invalid embedding_dim: {self.embedding_dim}")

    def with_overrides(self, **changes) -> "PipelineConfig":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["meta_mode"] = self.meta_mode.value
        data["target_transform"] = TARGET_TRANSFORM
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PipelineConfig":
        return cls(**_known_fields(cls, data))


@dataclass
class RunConfig:
    """Everything a CLI run needs; written next to its outputs."""

    data: Optional[str] = None
    schema: Optional[str] = None
    out_dir: str = "runs/latest"
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    split: SplitSpec = field(default_factory=SplitSpec)
    enrichment_provider: Union[str, ProviderKind] = ProviderKind.MOCK
    cache: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.generator, dict):
            self.generator = GeneratorConfig.from_dict(self.generator)
        if isinstance(self.pipeline, dict):
            self.pipeline = PipelineConfig.from_dict(self.pipeline)
        if isinstance(self.split, dict):
            self.split = SplitSpec(**_known_fields(SplitSpec, self.split))
        self.enrichment_provider = ProviderKind.from_string(self.enrichment_provider)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "data": self.data,
            "schema": self.schema,
            "out_dir": self.out_dir,
            "generator": self.generator.to_dict(),
            "pipeline": self.pipeline.to_dict(),
            "split": asdict(self.split),
            "enrichment_provider": self.enrichment_provider.value,
            "cache": self.cache,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        return cls(**_known_fields(cls, data))

    def merged(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Return a copy with a (possibly nested, partial) dict applied on top."""
        current = self.to_dict()
        for key, value in overrides.items():
            if isinstance(value, dict) and isinstance(current.get(key), dict):
                current[key] = {**current[key], **value}
            else:
                current[key] = value
        for nested in ("gbt", "rf"):
            if isinstance(overrides.get("pipeline", {}).get(nested), dict):
                base = self.to_dict()["pipeline"][nested]
                current["pipeline"][nested] = {**base, **overrides["pipeline"][nested]}
        return RunConfig.from_dict(current)


def _known_fields(cls, data: Dict[str, Any]) -> Dict[str, Any]:
    names = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - names - {"target_transform"})
    if unknown:
        raise ParamError(f"Unknown {cls.__name__} fields: {unknown}")
    return {k: v for k, v in data.items() if k in names}


__all__ = [
    # constants
    "SUCCESS_THRESHOLD_USD",
    "UNSUCCESSFUL_FUNDING_RANGE",
    "TARGET_TRANSFORM",
    "CLASS_SUCCESS_PROBABILITIES",
    "DEFAULT_SIGNAL_WEIGHTS",
    # enums
    "FeatureBranch",
    "FeatureOrigin",
    "EnrichmentStatus",
    "ViolationKind",
    "ProviderKind",
    "AblationSuite",
    "MetaMode",
    "BucketBy",
    "FundingClass",
    # configuration classes
    "BoostingParams",
    "ForestParams",
    "SplitSpec",
    "GeneratorConfig",
    "PipelineConfig",
    "RunConfig",
]
