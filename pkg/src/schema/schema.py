#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Feature schema: declaration of every trainable feature by branch and origin.

The default schema ships 63 features, 38 built from structured profile data
and 25 produced by LLM enrichment. Categorical features use ordinal integer
levels starting at 0; LLM-derived categoricals are scored on small ordinal
scales (e.g. ``skill_relevance`` from 0, no relevance, to 4, high relevance).
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from constants import FeatureBranch, FeatureOrigin
from utils import fingerprint, load_json, save_json
from utils.errors import ParamError, SchemaError

logger = logging.getLogger(__name__)

Level = Tuple[str, int]

BOOLEAN_LEVELS: Tuple[Level, ...] = (("no", 0), ("yes", 1))


@dataclass(frozen=True)
class FeatureDecl:
    """One trainable feature.

    Args:
        name: identifier, unique within a schema
        branch: encoding branch (categorical, textual, continuous, boolean)
        origin: deterministic or llm_derived
        categorical_levels: ordered ``(label, integer)`` pairs for categoricals
        description: human description, also used as the enrichment subject
        prompt: question put to an enrichment provider (llm_derived only)
    """

    name: str
    branch: FeatureBranch
    origin: FeatureOrigin = FeatureOrigin.DETERMINISTIC
    categorical_levels: Optional[Tuple[Level, ...]] = None
    description: str = ""
    prompt: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "branch", FeatureBranch.from_string(self.branch))
        object.__setattr__(self, "origin", FeatureOrigin.from_string(self.origin))
        if not self.name.isidentifier():
            raise SchemaError(f"Invalid feature name: {self.name!r}")

        if self.categorical_levels is not None:
            levels = tuple((str(label), int(value)) for label, value in self.categorical_levels)
            object.__setattr__(self, "categorical_levels", levels)

        if self.branch is FeatureBranch.CATEGORICAL:
            levels = self.categorical_levels or ()
            if len(levels) < 2:
                raise SchemaError(f"Categorical feature {self.name} needs >= 2 levels")
            if [v for _, v in levels] != list(range(len(levels))):
                raise SchemaError(
                    f"Categorical feature {self.name} must use consecutive integers from 0"
                )
            labels = [label.lower() for label, _ in levels]
            if len(set(labels)) != len(labels):
                raise SchemaError(f"Categorical feature {self.name} has duplicate labels")
        elif self.categorical_levels is not None:
            raise SchemaError(f"Only categorical features declare levels ({self.name})")

        if self.origin is FeatureOrigin.LLM_DERIVED and self.branch not in (
            FeatureBranch.CATEGORICAL,
            FeatureBranch.BOOLEAN,
        ):
            raise SchemaError(
                f"LLM-derived feature {self.name} must be categorical or boolean"
            )

    @property
    def levels(self) -> Tuple[Level, ...]:
        """Declared output domain; booleans expose ``no``/``yes``."""
        if self.branch is FeatureBranch.BOOLEAN:
            return BOOLEAN_LEVELS
        return self.categorical_levels or ()

    @property
    def values(self) -> Tuple[int, ...]:
        return tuple(v for _, v in self.levels)

    def has_value(self, value: int) -> bool:
        return value in self.values

    def level_value(self, label: Union[str, int]) -> Optional[int]:
        """Integer for a declared label or integer literal, else ``None``."""
        if isinstance(label, bool):
            label = int(label)
        if isinstance(label, int):
            return label if self.has_value(label) else None

        text = str(label).strip()
        lowered = text.lower()
        for level_label, value in self.levels:
            if level_label.lower() == lowered:
                return value
        if self.branch is FeatureBranch.BOOLEAN and lowered in ("true", "false"):
            return 1 if lowered == "true" else 0
        if text.lstrip("+-").isdigit():
            value = int(text)
            return value if self.has_value(value) else None
        return None

    def level_label(self, value: int) -> str:
        for label, level in self.levels:
            if level == value:
                return label
        raise KeyError(f"{self.name} has no level {value}")

    def to_dict(self) -> dict:
        data = {
            "name": self.name,
            "branch": self.branch.value,
            "origin": self.origin.value,
        }
        if self.categorical_levels is not None:
            data["categorical_levels"] = [list(level) for level in self.categorical_levels]
        if self.description:
            data["description"] = self.description
        if self.prompt:
            data["prompt"] = self.prompt
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureDecl":
        levels = data.get("categorical_levels")
        return cls(
            name=data["name"],
            branch=data["branch"],
            origin=data.get("origin", FeatureOrigin.DETERMINISTIC),
            categorical_levels=tuple(tuple(level) for level in levels) if levels else None,
            description=data.get("description", ""),
            prompt=data.get("prompt"),
        )


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered, immutable collection of feature declarations."""

    features: Tuple[FeatureDecl, ...] = field(default_factory=tuple)

    def __post_init__(self):
        features = tuple(self.features)
        object.__setattr__(self, "features", features)
        seen = set()
        duplicates = []
        for decl in features:
            if decl.name in seen:
                duplicates.append(decl.name)
            seen.add(decl.name)
        if duplicates:
            raise SchemaError("Duplicate feature names", duplicates)

    def __iter__(self) -> Iterator[FeatureDecl]:
        return iter(self.features)

    def __len__(self) -> int:
        return len(self.features)

    def __contains__(self, name: str) -> bool:
        return any(decl.name == name for decl in self.features)

    @property
    def names(self) -> List[str]:
        return [decl.name for decl in self.features]

    def get(self, name: str) -> FeatureDecl:
        for decl in self.features:
            if decl.name == name:
                return decl
        raise SchemaError("Unknown feature", [name])

    def by_branch(self, branch: Union[str, FeatureBranch]) -> List[FeatureDecl]:
        branch = FeatureBranch.from_string(branch)
        return [decl for decl in self.features if decl.branch is branch]

    def by_origin(self, origin: Union[str, FeatureOrigin]) -> List[FeatureDecl]:
        origin = FeatureOrigin.from_string(origin)
        return [decl for decl in self.features if decl.origin is origin]

    @property
    def llm_derived(self) -> List[FeatureDecl]:
        return self.by_origin(FeatureOrigin.LLM_DERIVED)

    def counts(self) -> Dict[str, int]:
        counts = {origin.value: len(self.by_origin(origin)) for origin in FeatureOrigin}
        counts.update({branch.value: len(self.by_branch(branch)) for branch in FeatureBranch})
        counts["total"] = len(self)
        return counts

    def without(
        self,
        branches: Iterable[Union[str, FeatureBranch]] = (),
        origins: Iterable[Union[str, FeatureOrigin]] = (),
        names: Iterable[str] = (),
    ) -> "FeatureSchema":
        """Schema with the given branches, origins and names removed."""
        branches = {FeatureBranch.from_string(b) for b in branches}
        origins = {FeatureOrigin.from_string(o) for o in origins}
        names = set(names)
        return FeatureSchema(
            tuple(
                decl
                for decl in self.features
                if decl.branch not in branches
                and decl.origin not in origins
                and decl.name not in names
            )
        )

    def to_dict(self) -> dict:
        return {"features": [decl.to_dict() for decl in self.features]}

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureSchema":
        return cls(tuple(FeatureDecl.from_dict(item) for item in data["features"]))

    @property
    def hash(self) -> str:
        return fingerprint(self.to_dict())


def load_schema(path: Union[str, Path]) -> FeatureSchema:
    """Load a schema JSON document (``{"features": [...]}``)."""
    try:
        return FeatureSchema.from_dict(load_json(path))
    except (KeyError, TypeError) as e:
        raise SchemaError(f"Malformed schema file {path}: {e}") from e


def save_schema(schema: FeatureSchema, path: Union[str, Path]):
    save_json(path, schema.to_dict())


# Default feature catalog

EDUCATION_LEVELS = (
    ("Associate Degree or less", 0),
    ("Bachelor's Degree", 1),
    ("Master's Degree", 2),
    ("Doctoral Degree or more", 3),
)

DOMAIN_EXPERTISE_LEVELS = (
    ("No alignment", 0),
    ("Weak Alignment", 1),
    ("Moderate Alignment", 2),
    ("Strong Alignment", 3),
)

SKILL_RELEVANCE_LEVELS = (
    ("no relevance", 0),
    ("low relevance", 1),
    ("some relevance", 2),
    ("relevant", 3),
    ("high relevance", 4),
)

SCALE_LEVELS = (
    ("none", 0),
    ("low", 1),
    ("moderate", 2),
    ("high", 3),
    ("exceptional", 4),
)

CATEGORY_LEVELS = tuple(
    (label, i)
    for i, label in enumerate(
        [
            "consumer",
            "enterprise_software",
            "fintech",
            "healthcare",
            "biotech",
            "hardware",
            "climate",
            "artificial_intelligence",
        ]
    )
)


def _levels(*labels: str) -> Tuple[Level, ...]:
    return tuple((label, i) for i, label in enumerate(labels))


_CAT = FeatureBranch.CATEGORICAL
_TXT = FeatureBranch.TEXTUAL
_CON = FeatureBranch.CONTINUOUS
_BOO = FeatureBranch.BOOLEAN
_LLM = FeatureOrigin.LLM_DERIVED

_DETERMINISTIC_CATALOG: Tuple[FeatureDecl, ...] = (
    FeatureDecl("education_level", _CAT, categorical_levels=EDUCATION_LEVELS,
                description="highest education level of the founder"),
    FeatureDecl("category_list", _CAT, categorical_levels=CATEGORY_LEVELS,
                description="primary field the startup operates in"),
    FeatureDecl("description", _TXT, description="startup description"),
    FeatureDecl("number_of_founders", _CON, description="founding team size"),
    FeatureDecl("previous_startups", _CON, description="startups founded before this one"),
    FeatureDecl("years_of_experience", _CON, description="years of professional experience"),
    FeatureDecl("has_technical_cofounder", _BOO),
    FeatureDecl("serial_founder", _BOO),
    FeatureDecl("degree_field", _CAT, categorical_levels=_levels(
        "humanities", "business", "engineering", "natural_sciences", "computer_science")),
    FeatureDecl("headquarters_region", _CAT, categorical_levels=_levels(
        "other", "europe", "asia", "us_other", "us_bay_area")),
    FeatureDecl("university_tier", _CAT, categorical_levels=_levels(
        "unranked", "regional", "national", "top_50", "top_10")),
    FeatureDecl("seniority_before_founding", _CAT, categorical_levels=_levels(
        "individual_contributor", "manager", "director", "vp", "c_level")),
    FeatureDecl("number_of_prior_companies", _CON),
    FeatureDecl("founder_age", _CON),
    FeatureDecl("patents_filed", _CON),
    FeatureDecl("publications", _CON),
    FeatureDecl("prior_funding_raised_log10", _CON),
    FeatureDecl("team_size_at_founding", _CON),
    FeatureDecl("board_seats_held", _CON),
    FeatureDecl("years_at_big_tech", _CON),
    FeatureDecl("years_in_academia", _CON),
    FeatureDecl("languages_spoken", _CON),
    FeatureDecl("months_since_last_role", _CON),
    FeatureDecl("social_followers_log10", _CON),
    FeatureDecl("media_mentions", _CON),
    FeatureDecl("has_phd", _BOO),
    FeatureDecl("big_tech_alumni", _BOO),
    FeatureDecl("accelerator_alumni", _BOO),
    FeatureDecl("ivy_league", _BOO),
    FeatureDecl("repeat_cofounders", _BOO),
    FeatureDecl("worked_at_unicorn", _BOO),
    FeatureDecl("has_mba", _BOO),
    FeatureDecl("immigrant_founder", _BOO),
    FeatureDecl("open_source_contributor", _BOO),
    FeatureDecl("military_service", _BOO),
    FeatureDecl("prior_exit", _BOO),
    FeatureDecl("solo_founder", _BOO),
    FeatureDecl("based_in_hub", _BOO),
)

_SCALE_FEATURES = (
    "leadership_experience",
    "technical_depth",
    "industry_network",
    "fundraising_experience",
    "product_execution",
    "market_timing",
    "vision_clarity",
    "communication_skill",
    "resilience_signal",
    "team_building",
    "customer_focus",
    "execution_speed",
    "thought_leadership",
    "hiring_track_record",
    "strategic_partnerships",
    "regulatory_savvy",
    "international_experience",
    "learning_agility",
)

_FLAG_FEATURES = (
    "mentions_revenue",
    "mentions_patents",
    "elite_investor_ties",
    "top_company_alumni_signal",
    "career_progression_upward",
)


def humanize(name: str) -> str:
    """``skill_relevance`` -> ``skill relevance``."""
    return name.replace("_", " ")


_LLM_CATALOG: Tuple[FeatureDecl, ...] = (
    FeatureDecl(
        "domain_expertise", _CAT, _LLM, DOMAIN_EXPERTISE_LEVELS,
        description="how well industry experience and education match the startup's domain",
        prompt="How well do the founder's industry experience and education match the startup's domain?",
    ),
    FeatureDecl(
        "skill_relevance", _CAT, _LLM, SKILL_RELEVANCE_LEVELS,
        description="alignment between the founder's skills and the startup's domain",
        prompt="Rate the relevance of the founder's skills to the startup's domain from 0 to 4.",
    ),
) + tuple(
    FeatureDecl(
        name, _CAT, _LLM, SCALE_LEVELS,
        description=humanize(name),
        prompt=f"Rate the founder's {humanize(name)} from 0 (none) to 4 (exceptional).",
    )
    for name in _SCALE_FEATURES
) + tuple(
    FeatureDecl(
        name, _BOO, _LLM,
        description=humanize(name),
        prompt=f"Does the profile show {humanize(name)}? Answer yes or no.",
    )
    for name in _FLAG_FEATURES
)


def default_schema(n_deterministic: int = 38, n_llm_derived: int = 25) -> FeatureSchema:
    """Build the shipped schema.

    Args:
        n_deterministic: how many deterministic features to keep (catalog order)
        n_llm_derived: how many LLM-derived features to keep (catalog order)

    Returns:
        FeatureSchema with deterministic features first, then LLM-derived ones
    """
    if not 0 <= n_deterministic <= len(_DETERMINISTIC_CATALOG):
        raise ParamError(
            f"Invalid n_deterministic: {n_deterministic}. "
            f"Valid range: 0..{len(_DETERMINISTIC_CATALOG)}"
        )
    if not 0 <= n_llm_derived <= len(_LLM_CATALOG):
        raise ParamError(
            f"Invalid n_llm_derived: {n_llm_derived}. Valid range: 0..{len(_LLM_CATALOG)}"
        )
    return FeatureSchema(
        _DETERMINISTIC_CATALOG[:n_deterministic] + _LLM_CATALOG[:n_llm_derived]
    )
