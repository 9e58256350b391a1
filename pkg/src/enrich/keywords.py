#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Keyword tables of the offline mock enrichment provider.

Every LLM-derived feature understands a generic cue of the form
``"<Feature label>: <level label>"`` (e.g. ``"Technical depth: high"``).
Some features additionally carry free-text rules; when several rules match,
the highest level wins. Text without any cue scores the lowest level.

domain_expertise rules:

====  ==========================================================
3     "strong alignment", "deep expertise", 8 or more years
2     "moderate alignment", "solid experience", 4 to 7 years
1     "weak alignment", "some exposure", "adjacent", 1 to 3 years
0     "no alignment", "no (stated) industry overlap", or nothing
====  ==========================================================
"""

import re
from typing import Dict, Optional, Pattern, Sequence, Tuple

Rule = Tuple[Pattern, int]

_YEARS = re.compile(r"(\d+)\s*\+?\s*(?:yrs?|years?)\b", re.IGNORECASE)


def _rules(*pairs: Tuple[str, int]) -> Tuple[Rule, ...]:
    return tuple((re.compile(pattern, re.IGNORECASE), value) for pattern, value in pairs)


KEYWORD_RULES: Dict[str, Tuple[Rule, ...]] = {
    "domain_expertise": _rules(
        (r"\bstrong alignment\b", 3),
        (r"\bdeep (?:domain )?expertise\b", 3),
        (r"\bmoderate alignment\b", 2),
        (r"\bsolid experience\b", 2),
        (r"\bweak alignment\b", 1),
        (r"\bsome exposure\b", 1),
        (r"\badjacent\b", 1),
        (r"\bno alignment\b", 0),
        (r"\bno (?:stated )?industry overlap\b", 0),
    ),
    "skill_relevance": _rules(
        (r"\bhighly relevant skills\b", 4),
        (r"\brelevant skills\b", 3),
        (r"\btransferable skills\b", 2),
        (r"\bunrelated skills\b", 0),
    ),
    "technical_depth": _rules(
        (r"\b(?:phd|doctorate)\b", 3),
        (r"\b(?:engineer|developer|scientist)\b", 2),
    ),
    "mentions_revenue": _rules((r"\b(?:revenue|arr|mrr|paying customers)\b", 1),),
    "mentions_patents": _rules((r"\bpatent(?:s|ed)?\b", 1),),
    "elite_investor_ties": _rules((r"\b(?:tier[- ]one|top[- ]tier) (?:vc|investors?)\b", 1),),
    "top_company_alumni_signal": _rules(
        (r"\b(?:google|meta|apple|amazon|microsoft|openai)\b", 1),
    ),
    "career_progression_upward": _rules((r"\bpromoted\b", 1),),
}


def _years_level(years: int) -> int:
    if years >= 8:
        return 3
    if years >= 4:
        return 2
    if years >= 1:
        return 1
    return 0


def feature_label(name: str) -> str:
    """``domain_expertise`` -> ``Domain expertise``."""
    text = name.replace("_", " ")
    return text[:1].upper() + text[1:]


def cue_phrase(name: str, level_label: str) -> str:
    """Generic cue the mock provider decodes back to ``level_label``."""
    return f"{feature_label(name)}: {level_label}."


def generic_cue(name: str, text: str) -> Optional[str]:
    """Answer text of a generic cue for ``name`` in ``text``, if any."""
    pattern = re.compile(
        rf"\b{re.escape(feature_label(name))}\s*:\s*([^.;\n]+)", re.IGNORECASE
    )
    match = pattern.search(text)
    return match.group(1).strip() if match else None


def score_text(name: str, levels: Sequence[Tuple[str, int]], text: str) -> str:
    """Keyword-rule answer for one feature, as a level label.

    Args:
        name: feature name
        levels: declared ``(label, value)`` pairs, ascending
        text: profile text

    Returns:
        the generic cue's answer verbatim when present, otherwise the label of
        the highest level matched by the feature's rules, otherwise the
        lowest level's label
    """
    cue = generic_cue(name, text)
    if cue is not None:
        return cue

    best = None
    for pattern, value in KEYWORD_RULES.get(name, ()):
        if pattern.search(text):
            best = value if best is None else max(best, value)
    if name == "domain_expertise":
        for match in _YEARS.finditer(text):
            value = _years_level(int(match.group(1)))
            best = value if best is None else max(best, value)

    if best is None:
        best = min(value for _, value in levels)
    by_value = {value: label for label, value in levels}
    return by_value.get(best, str(best))
