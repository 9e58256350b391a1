#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Synthetic planted-signal datasets.

Generation model:

1. Every schema feature is drawn from a fixed sampler whose standard
   deviation is known in closed form (categorical probabilities, Bernoulli,
   Poisson, Gamma). Records are drawn in blocks; block ``b`` uses the
   substream ``default_rng([seed, b])``.
2. A latent log10 funding is ``offset + sum(weight * value) + N(0, sigma)``.
   The offset is either given or solved by bisection so that the mean
   class success probability over the drawn records equals the target
   positive rate.
3. Success is drawn per record from the success probability of the funding
   class of ``10 ** latent``; the draw is repeated until the realized rate is
   within ``rate_tolerance`` of the target.
4. Successful founders keep ``10 ** latent`` (capped at $5B) as funding and
   those that raised $500M or less receive an IPO valuation or an acquisition
   price above $500M; unsuccessful founders have their funding clamped to
   [$100K, $4M].
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from constants import (
    FeatureBranch,
    FeatureOrigin,
    FundingClass,
    GeneratorConfig,
    SUCCESS_THRESHOLD_USD,
    UNSUCCESSFUL_FUNDING_RANGE,
)
from enrich.keywords import cue_phrase
from schema import PROFILE_TEXT, Dataset, FeatureSchema, FounderRecord, Label, default_schema
from utils import save_json
from utils.errors import GeneratorError

logger = logging.getLogger(__name__)

FUNDING_CAP = 5e9
OUTCOME_CAP = 5e9

# Stream index for label draws; feature blocks use indices 0, 1, 2, ...
_LABEL_STREAM = 1 << 30
_OUTCOME_STREAM = (1 << 30) + 1


class Sampler:
    """Distribution of one generated feature with a closed-form std."""

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    @property
    def std(self) -> float:
        raise NotImplementedError


class Discrete(Sampler):
    def __init__(self, probs, values=None):
        self.probs = np.asarray(probs, dtype=float) / np.sum(probs)
        self.values = np.arange(len(self.probs)) if values is None else np.asarray(values)

    def draw(self, rng, n):
        return self.values[rng.choice(len(self.probs), size=n, p=self.probs)]

    @property
    def std(self):
        mean = float(np.dot(self.probs, self.values))
        return math.sqrt(max(float(np.dot(self.probs, self.values ** 2)) - mean ** 2, 0.0))


class Bernoulli(Sampler):
    def __init__(self, p: float):
        self.p = p

    def draw(self, rng, n):
        return (rng.random(n) < self.p).astype(int)

    @property
    def std(self):
        return math.sqrt(self.p * (1 - self.p))


class Poisson(Sampler):
    def __init__(self, lam: float):
        self.lam = lam

    def draw(self, rng, n):
        return rng.poisson(self.lam, size=n)

    @property
    def std(self):
        return math.sqrt(self.lam)


class Gamma(Sampler):
    def __init__(self, shape: float, scale: float):
        self.shape = shape
        self.scale = scale

    def draw(self, rng, n):
        return rng.gamma(self.shape, self.scale, size=n)

    @property
    def std(self):
        return math.sqrt(self.shape) * self.scale


SCALE_PROBS = (0.10, 0.25, 0.35, 0.20, 0.10)

SAMPLERS: Dict[str, Sampler] = {
    "education_level": Discrete((0.25, 0.40, 0.25, 0.10)),
    "category_list": Discrete((0.20, 0.18, 0.14, 0.12, 0.10, 0.09, 0.08, 0.09)),
    "number_of_founders": Discrete((0.30, 0.40, 0.20, 0.10), values=(1, 2, 3, 4)),
    "previous_startups": Poisson(0.8),
    "years_of_experience": Gamma(4.0, 3.0),
    "has_technical_cofounder": Bernoulli(0.5),
    "serial_founder": Bernoulli(0.25),
    "domain_expertise": Discrete((0.30, 0.30, 0.25, 0.15)),
    "skill_relevance": Discrete((0.10, 0.20, 0.30, 0.25, 0.15)),
    "number_of_prior_companies": Poisson(2.5),
    "founder_age": Gamma(36.0, 1.0),
    "patents_filed": Poisson(0.4),
    "publications": Poisson(1.2),
    "prior_funding_raised_log10": Gamma(9.0, 0.5),
    "team_size_at_founding": Poisson(4.0),
    "board_seats_held": Poisson(0.6),
    "years_at_big_tech": Gamma(1.0, 2.0),
    "years_in_academia": Gamma(0.5, 2.0),
    "languages_spoken": Discrete((0.45, 0.35, 0.15, 0.05), values=(1, 2, 3, 4)),
    "months_since_last_role": Gamma(2.0, 4.0),
    "social_followers_log10": Gamma(6.0, 0.5),
    "media_mentions": Poisson(3.0),
}


def sampler_for(name: str, branch: FeatureBranch, n_levels: int) -> Sampler:
    """Fixed sampler for a named feature; branch defaults for the rest."""
    if name in SAMPLERS:
        return SAMPLERS[name]
    if branch is FeatureBranch.CATEGORICAL:
        if n_levels == len(SCALE_PROBS):
            return Discrete(SCALE_PROBS)
        return Discrete(np.ones(n_levels))
    if branch is FeatureBranch.BOOLEAN:
        return Bernoulli(0.3)
    return Gamma(2.0, 1.0)


DEFAULT_TEMPLATES: Dict[str, List[str]] = {
    "consumer": [
        "A {adj} consumer app that helps families plan meals and shop groceries.",
        "Direct-to-consumer brand selling {adj} home goods through social commerce.",
        "Mobile marketplace connecting local shoppers with {adj} neighborhood stores.",
    ],
    "enterprise_software": [
        "A {adj} workflow platform automating procurement for enterprise teams.",
        "B2B SaaS for sales operations with {adj} CRM integrations.",
        "Developer tooling that makes enterprise data pipelines {adj} and observable.",
    ],
    "fintech": [
        "A {adj} payments API for cross-border merchants and banks.",
        "Lending platform using {adj} underwriting for small businesses.",
        "Digital banking for freelancers with {adj} invoicing and treasury.",
    ],
    "healthcare": [
        "A {adj} telehealth service for chronic care management in clinics.",
        "Hospital scheduling software that makes patient intake {adj}.",
        "Care coordination platform for nurses with {adj} remote monitoring.",
    ],
    "biotech": [
        "A {adj} drug discovery platform for oncology therapeutics.",
        "Gene therapy startup developing {adj} treatments for rare diseases.",
        "Cancer diagnostics from {adj} liquid biopsy assays.",
    ],
    "hardware": [
        "A {adj} robotics company building warehouse picking arms.",
        "Consumer electronics maker of {adj} wearable sensors.",
        "Semiconductor design for {adj} low-power edge chips.",
    ],
    "climate": [
        "A {adj} battery storage developer for grid-scale renewables.",
        "Carbon capture startup with {adj} direct air capture modules.",
        "Solar financing platform making rooftop energy {adj}.",
    ],
    "artificial_intelligence": [
        "A {adj} machine learning platform for training large language models.",
        "AI agents that automate customer support with {adj} reasoning.",
        "Computer vision models for {adj} industrial inspection.",
    ],
}

_ADJECTIVES = ("fast", "simple", "scalable", "secure", "affordable", "intelligent")


@dataclass
class GroundTruth:
    """Planted parameters of a generated dataset (written as a JSON sidecar)."""

    offset: float
    signal_weights: Dict[str, float]
    feature_std: Dict[str, float]
    class_success_probs: Dict[FundingClass, float]
    noise_sigma: float
    target_rate: float
    realized_rate: float
    label_attempts: int
    seed: int
    importance: List[Tuple[str, float]] = field(default_factory=list)
    # per-record latent log10 funding (before clamping); not written to the sidecar
    latent: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "offset": self.offset,
            "signal_weights": self.signal_weights,
            "feature_std": self.feature_std,
            "class_success_probs": {c.value: p for c, p in self.class_success_probs.items()},
            "noise_sigma": self.noise_sigma,
            "target_rate": self.target_rate,
            "realized_rate": self.realized_rate,
            "label_attempts": self.label_attempts,
            "seed": self.seed,
            "importance": [[name, share] for name, share in self.importance],
        }


def write_truth(truth: GroundTruth, path: Union[str, Path]):
    save_json(path, truth.to_dict())


def _check_weights(config: GeneratorConfig, schema: FeatureSchema):
    unknown = [name for name in config.signal_weights if name not in schema]
    if unknown:
        raise GeneratorError(f"signal weights name features missing from the schema: {unknown}")
    for name in config.signal_weights:
        if schema.get(name).branch is FeatureBranch.TEXTUAL:
            raise GeneratorError(f"textual feature {name} cannot carry a planted weight")


def planted_importance(
    config: GeneratorConfig, schema: Optional[FeatureSchema] = None
) -> List[Tuple[str, float]]:
    """Ground-truth importance ranking.

    Share of each weighted feature is ``|weight| * std(feature)`` normalized
    to sum 1, sorted by share (descending) then name.
    """
    schema = schema or default_schema()
    _check_weights(config, schema)
    raw = {}
    for name, weight in config.signal_weights.items():
        decl = schema.get(name)
        raw[name] = abs(weight) * sampler_for(name, decl.branch, len(decl.levels)).std
    total = sum(raw.values())
    shares = {name: (value / total if total > 0 else 0.0) for name, value in raw.items()}
    return sorted(shares.items(), key=lambda item: (-item[1], item[0]))


def _class_probs(log_funding: np.ndarray, probs: Dict[FundingClass, float]) -> np.ndarray:
    edges = np.log10([c.lower for c in FundingClass][1:])
    table = np.array([probs[c] for c in FundingClass])
    return table[np.searchsorted(edges, log_funding, side="right")]


def solve_offset(
    signal: np.ndarray, probs: Dict[FundingClass, float], target: float
) -> float:
    """Offset whose mean class success probability over ``signal`` is ``target``.

    The mean is a non-decreasing step function of the offset; bisection
    returns the smallest offset (to 1e-10) at which it reaches the target.
    """
    p_min, p_max = min(probs.values()), max(probs.values())
    if not p_min <= target <= p_max:
        raise GeneratorError(
            f"positive_rate {target} unreachable: class probabilities span [{p_min}, {p_max}]"
        )
    lo = 5.0 - float(signal.max()) - 1.0
    hi = 9.0 - float(signal.min()) + 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _class_probs(mid + signal, probs).mean() >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-10:
            break
    return hi


def _describe(category: str, templates: Dict[str, List[str]], rng: np.random.Generator) -> str:
    options = templates.get(category) or templates.get("default") or ["A startup."]
    template = options[int(rng.integers(len(options)))]
    return template.format(adj=_ADJECTIVES[int(rng.integers(len(_ADJECTIVES)))])


def _draw_block(
    config: GeneratorConfig, schema: FeatureSchema, block: int, start: int, size: int
) -> Dict[str, object]:
    rng = np.random.default_rng([config.seed, block])
    templates = config.text_templates or DEFAULT_TEMPLATES
    columns: Dict[str, np.ndarray] = {}
    for decl in schema:
        if decl.branch is FeatureBranch.TEXTUAL:
            continue
        columns[decl.name] = sampler_for(decl.name, decl.branch, len(decl.levels)).draw(rng, size)

    noise = rng.normal(0.0, 1.0, size) * config.noise_sigma

    texts: Dict[str, List[str]] = {}
    categories = columns.get("category_list")
    cat_decl = schema.get("category_list") if "category_list" in schema else None
    for decl in schema.by_branch(FeatureBranch.TEXTUAL):
        texts[decl.name] = [
            _describe(
                cat_decl.level_label(int(categories[i])) if cat_decl is not None else "default",
                templates, rng,
            )
            for i in range(size)
        ]

    profiles = []
    llm = schema.llm_derived
    for i in range(size):
        profiles.append(
            " ".join(cue_phrase(d.name, d.level_label(int(columns[d.name][i]))) for d in llm)
        )
    return {"start": start, "columns": columns, "noise": noise, "texts": texts, "profiles": profiles}


def _draw_features(config: GeneratorConfig, schema: FeatureSchema, n_jobs: int):
    blocks = [
        (b, start, min(config.block_size, config.n_records - start))
        for b, start in enumerate(range(0, config.n_records, config.block_size))
    ]
    parts = Parallel(n_jobs=n_jobs)(
        delayed(_draw_block)(config, schema, b, start, size) for b, start, size in blocks
    )
    columns = {
        name: np.concatenate([p["columns"][name] for p in parts]) for name in parts[0]["columns"]
    }
    noise = np.concatenate([p["noise"] for p in parts])
    texts = {
        name: [t for p in parts for t in p["texts"][name]] for name in parts[0]["texts"]
    }
    profiles = [t for p in parts for t in p["profiles"]]
    return columns, noise, texts, profiles


def _draw_labels(
    config: GeneratorConfig, success_probs: np.ndarray
) -> Tuple[np.ndarray, int]:
    target = config.positive_rate
    for attempt in range(config.max_label_attempts):
        rng = np.random.default_rng([config.seed, _LABEL_STREAM, attempt])
        success = rng.random(len(success_probs)) < success_probs
        if abs(success.mean() - target) <= config.rate_tolerance:
            return success, attempt + 1
    raise GeneratorError(
        f"no label draw within {config.rate_tolerance:.4f} of positive_rate {target} "
        f"after {config.max_label_attempts} attempts (n_records={config.n_records})"
    )


def generate_with_truth(
    config: GeneratorConfig,
    schema: Optional[FeatureSchema] = None,
    n_jobs: int = 1,
) -> Tuple[Dataset, GroundTruth]:
    """Generate a dataset and its planted ground truth.

    Args:
        config: generator parameters
        schema: feature schema (default: the 63-feature schema)
        n_jobs: joblib workers for block generation; output does not depend on it

    Returns:
        (Dataset, GroundTruth)

    Raises:
        GeneratorError: unreachable positive rate, unknown weighted feature,
            or no label draw within tolerance
    """
    schema = schema or default_schema()
    _check_weights(config, schema)
    n = config.n_records
    columns, noise, texts, profiles = _draw_features(config, schema, n_jobs)

    signal = np.zeros(n)
    for name, weight in config.signal_weights.items():
        signal += weight * columns[name].astype(float)
    signal += noise

    probs = config.class_success_probs
    offset = config.base if config.base is not None else solve_offset(signal, probs, config.positive_rate)
    latent = offset + signal
    success, attempts = _draw_labels(config, _class_probs(latent, probs))

    low, high = UNSUCCESSFUL_FUNDING_RANGE
    funding = np.where(success, np.minimum(10.0 ** latent, FUNDING_CAP), np.clip(10.0 ** latent, low, high))

    outcome_rng = np.random.default_rng([config.seed, _OUTCOME_STREAM])
    outcome_u = outcome_rng.random(n)
    outcome_kind = outcome_rng.random(n)
    log_lo, log_hi = math.log10(SUCCESS_THRESHOLD_USD), math.log10(OUTCOME_CAP)
    exit_value = 10.0 ** (log_lo + 1e-6 + outcome_u * (log_hi - log_lo - 1e-6))
    small_exit = 10.0 ** (6.0 + outcome_u * (math.log10(SUCCESS_THRESHOLD_USD) - 6.0 - 1e-3))

    records, labels = [], {}
    width = len(str(n))
    for i in range(n):
        values = {}
        for decl in schema:
            if decl.branch is FeatureBranch.TEXTUAL:
                continue
            if decl.origin is FeatureOrigin.LLM_DERIVED and not config.emit_llm_values:
                values[decl.name] = None
                continue
            raw = columns[decl.name][i]
            if decl.branch is FeatureBranch.CONTINUOUS:
                values[decl.name] = float(raw)
            else:
                values[decl.name] = int(raw)
        raw_text = {name: texts[name][i] for name in texts}
        raw_text[PROFILE_TEXT] = profiles[i]

        amount = float(funding[i])
        ipo, acquisition = None, None
        if success[i] and amount <= SUCCESS_THRESHOLD_USD:
            if outcome_kind[i] < 0.5:
                ipo = float(exit_value[i])
            else:
                acquisition = float(exit_value[i])
        elif not success[i] and outcome_kind[i] < 0.2:
            acquisition = float(small_exit[i])

        record_id = f"F{i:0{width}d}"
        records.append(FounderRecord(record_id, values, raw_text, amount, ipo, acquisition))
        labels[record_id] = Label(amount, bool(success[i]))

    truth = GroundTruth(
        offset=float(offset),
        signal_weights=dict(config.signal_weights),
        feature_std={
            name: sampler_for(name, schema.get(name).branch, len(schema.get(name).levels)).std
            for name in config.signal_weights
        },
        class_success_probs=dict(probs),
        noise_sigma=config.noise_sigma,
        target_rate=config.positive_rate,
        realized_rate=float(success.mean()),
        label_attempts=attempts,
        seed=config.seed,
        importance=planted_importance(config, schema),
        latent=latent,
    )
    logger.info(
        "generated %d records (%.2f%% successful, offset %.4f, %d label draws)",
        n, 100 * truth.realized_rate, offset, attempts,
    )
    return Dataset(schema, tuple(records), labels), truth


def generate_dataset(
    config: GeneratorConfig, schema: Optional[FeatureSchema] = None, n_jobs: int = 1
) -> Dataset:
    """Generate a labeled synthetic dataset; see :func:`generate_with_truth`."""
    dataset, _ = generate_with_truth(config, schema, n_jobs)
    return dataset
