#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Founder records, labeled datasets, validation and the CSV format.

CSV layout (UTF-8, header row, empty cell = absent)::

    id, <every schema feature>, [profile_text], [<feature>__text ...],
    total_raised, ipo_valuation, acquisition_price, funding_label, success_label

Categorical cells may hold the declared label or its integer; LLM-derived
feature cells stay empty until enrichment fills them. ``profile_text`` is the
free text every LLM-derived feature is extracted from unless a dedicated
``<feature>__text`` column overrides it.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any, Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple, Union

import numpy as np
import pandas as pd

from constants import (
    FeatureBranch,
    SUCCESS_THRESHOLD_USD,
    UNSUCCESSFUL_FUNDING_RANGE,
    ViolationKind,
)
from utils import ensure_dir, fingerprint, format_float
from utils.errors import MissingOutcome, ParseError, RangeError, SchemaError
from .schema import FeatureSchema

logger = logging.getLogger(__name__)

ID_COLUMN = "id"
PROFILE_TEXT = "profile_text"
TEXT_SUFFIX = "__text"
CURRENCY_COLUMNS = ("total_raised", "ipo_valuation", "acquisition_price")
LABEL_COLUMNS = ("funding_label", "success_label")

_TRUE = {"1", "true", "yes"}
_FALSE = {"0", "false", "no"}


def label_success(
    total_raised: Optional[float] = None,
    ipo_valuation: Optional[float] = None,
    acquisition_price: Optional[float] = None,
) -> bool:
    """Success label from outcome fields.

    A founder is successful when the company IPO'd above $500M, was acquired
    for more than $500M, or raised over $500M.

    Raises:
        MissingOutcome: when all three fields are absent
    """
    outcomes = [v for v in (total_raised, ipo_valuation, acquisition_price) if v is not None]
    if not outcomes:
        raise MissingOutcome("No outcome field present (total_raised, ipo_valuation, acquisition_price)")
    return any(v > SUCCESS_THRESHOLD_USD for v in outcomes)


class Label(NamedTuple):
    funding: float
    success: bool


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    feature: str
    detail: str = ""

    def __str__(self):
        return f"{self.kind.value}({self.feature})" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class FounderRecord:
    """One founder/startup profile.

    ``values`` holds structured feature values (categorical codes or labels,
    reals, 0/1); ``raw_text`` holds textual features and enrichable text.
    """

    id: str
    values: Mapping[str, Any] = field(default_factory=dict)
    raw_text: Mapping[str, str] = field(default_factory=dict)
    total_raised: Optional[float] = None
    ipo_valuation: Optional[float] = None
    acquisition_price: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))
        object.__setattr__(self, "raw_text", MappingProxyType(dict(self.raw_text)))
        for name in CURRENCY_COLUMNS:
            value = getattr(self, name)
            if value is not None and not value >= 0:
                raise RangeError(f"{name} must be non-negative, got {value}")

    def value(self, name: str) -> Any:
        return self.values.get(name)

    def text_for(self, name: str) -> str:
        """Text a feature is read or extracted from."""
        if name in self.raw_text:
            return self.raw_text[name]
        if name + TEXT_SUFFIX in self.raw_text:
            return self.raw_text[name + TEXT_SUFFIX]
        return self.raw_text.get(PROFILE_TEXT, "")

    def with_values(self, updates: Mapping[str, Any]) -> "FounderRecord":
        merged = dict(self.values)
        merged.update(updates)
        return FounderRecord(
            self.id, merged, dict(self.raw_text),
            self.total_raised, self.ipo_valuation, self.acquisition_price,
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "values": dict(self.values),
            "raw_text": dict(self.raw_text),
            "total_raised": self.total_raised,
            "ipo_valuation": self.ipo_valuation,
            "acquisition_price": self.acquisition_price,
        }


@dataclass(frozen=True)
class Dataset:
    """Schema, records and (funding, success) labels keyed by record id."""

    schema: FeatureSchema
    records: Tuple[FounderRecord, ...]
    labels: Mapping[str, Label] = field(default_factory=dict)
    violations: Mapping[str, Tuple[Violation, ...]] = field(default_factory=dict)

    def __post_init__(self):
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        ids = [r.id for r in records]
        if len(set(ids)) != len(ids):
            seen, dupes = set(), []
            for i in ids:
                if i in seen:
                    dupes.append(i)
                seen.add(i)
            raise SchemaError("Duplicate record ids", dupes[:10])
        labels = {str(k): Label(float(v[0]), bool(v[1])) for k, v in dict(self.labels).items()}
        stray = set(labels) - set(ids)
        if stray:
            raise SchemaError("Labels for unknown records", sorted(stray)[:10])
        object.__setattr__(self, "labels", MappingProxyType(labels))
        object.__setattr__(self, "violations", MappingProxyType(dict(self.violations)))

    def __len__(self) -> int:
        return len(self.records)

    @property
    def ids(self) -> List[str]:
        return [r.id for r in self.records]

    @property
    def is_labeled(self) -> bool:
        return len(self.labels) == len(self.records)

    def record(self, record_id: str) -> FounderRecord:
        for r in self.records:
            if r.id == record_id:
                return r
        raise KeyError(record_id)

    def funding(self) -> np.ndarray:
        return np.array([self.labels[r.id].funding for r in self.records], dtype=float)

    def success(self) -> np.ndarray:
        return np.array([self.labels[r.id].success for r in self.records], dtype=bool)

    @property
    def success_rate(self) -> float:
        if not self.records:
            return 0.0
        return float(self.success().mean())

    def subset(self, ids: Iterable[str]) -> "Dataset":
        """Records with the given ids, in the given order."""
        index = {r.id: r for r in self.records}
        chosen = [index[i] for i in ids]
        return Dataset(
            self.schema,
            tuple(chosen),
            {r.id: self.labels[r.id] for r in chosen if r.id in self.labels},
            {r.id: self.violations[r.id] for r in chosen if r.id in self.violations},
        )

    def with_schema(self, schema: FeatureSchema) -> "Dataset":
        return Dataset(schema, self.records, self.labels, self.violations)

    def with_records(self, records: Iterable[FounderRecord]) -> "Dataset":
        return Dataset(self.schema, tuple(records), self.labels, self.violations)

    def fingerprint(self) -> str:
        """Content hash over schema, records and labels."""
        return fingerprint(
            {
                "schema": self.schema.hash,
                "records": [r.to_dict() for r in self.records],
                "labels": {k: [v.funding, v.success] for k, v in sorted(self.labels.items())},
            }
        )


def validate_record(record: FounderRecord, schema: FeatureSchema) -> List[Violation]:
    """Check structured values against the schema; absent values pass."""
    violations = []
    for decl in schema:
        if decl.branch is FeatureBranch.TEXTUAL:
            continue
        value = record.values.get(decl.name)
        if value is None:
            continue

        if decl.branch is FeatureBranch.CATEGORICAL:
            if isinstance(value, str):
                if decl.level_value(value) is None:
                    violations.append(Violation(ViolationKind.UNKNOWN_LEVEL, decl.name, repr(value)))
            elif not decl.has_value(value):
                violations.append(Violation(ViolationKind.OUT_OF_RANGE, decl.name, str(value)))
        elif decl.branch is FeatureBranch.CONTINUOUS:
            if not isinstance(value, (int, float, np.number)) or not math.isfinite(value):
                violations.append(Violation(ViolationKind.NON_FINITE, decl.name, str(value)))
        elif decl.branch is FeatureBranch.BOOLEAN:
            if value not in (0, 1):
                violations.append(Violation(ViolationKind.NOT_BOOLEAN, decl.name, str(value)))
    return violations


def validate_label(label: Label) -> List[Violation]:
    """Unsuccessful companies must have raised between $100K and $4M."""
    low, high = UNSUCCESSFUL_FUNDING_RANGE
    if not label.success and not low <= label.funding <= high:
        return [
            Violation(
                ViolationKind.FUNDING_OUT_OF_RANGE,
                "funding_label",
                f"unsuccessful record raised {label.funding:.0f}, expected [{low:.0f}, {high:.0f}]",
            )
        ]
    return []


def validate_dataset(dataset: Dataset) -> Dict[str, List[Violation]]:
    """All violations by record id (records without findings omitted)."""
    found = {}
    for record in dataset.records:
        violations = validate_record(record, dataset.schema)
        if record.id in dataset.labels:
            violations += validate_label(dataset.labels[record.id])
        if violations:
            found[record.id] = violations
    return found


# CSV

def _required_columns(schema: FeatureSchema) -> List[str]:
    return [ID_COLUMN] + schema.names + list(CURRENCY_COLUMNS) + list(LABEL_COLUMNS)


def _parse_float(cell: str, column: str, row: int) -> Optional[float]:
    if cell == "":
        return None
    try:
        return float(cell)
    except ValueError:
        raise ParseError(f"column {column}: not a number: {cell!r}", row) from None


def _parse_currency(cell: str, column: str, row: int) -> Optional[float]:
    value = _parse_float(cell, column, row)
    if value is None:
        return None
    if not math.isfinite(value) or value < 0:
        raise ParseError(f"column {column}: currency must be finite and non-negative, got {cell}", row)
    return value


def _parse_flag(cell: str, column: str, row: int) -> Optional[int]:
    if cell == "":
        return None
    lowered = cell.strip().lower()
    if lowered in _TRUE:
        return 1
    if lowered in _FALSE:
        return 0
    raise ParseError(f"column {column}: not a boolean: {cell!r}", row)


def _parse_row(cells: Mapping[str, str], schema: FeatureSchema, text_columns: List[str], row: int):
    values: Dict[str, Any] = {}
    raw_text: Dict[str, str] = {}
    for decl in schema:
        cell = cells[decl.name]
        if decl.branch is FeatureBranch.TEXTUAL:
            raw_text[decl.name] = cell
        elif decl.branch is FeatureBranch.CATEGORICAL:
            if cell == "":
                values[decl.name] = None
            elif cell.strip().lstrip("+-").isdigit():
                values[decl.name] = int(cell)
            else:
                code = decl.level_value(cell)
                values[decl.name] = cell if code is None else code
        elif decl.branch is FeatureBranch.CONTINUOUS:
            values[decl.name] = _parse_float(cell, decl.name, row)
        else:
            values[decl.name] = _parse_flag(cell, decl.name, row)
    for column in text_columns:
        raw_text[column] = cells[column]

    currency = {name: _parse_currency(cells[name], name, row) for name in CURRENCY_COLUMNS}
    record = FounderRecord(cells[ID_COLUMN], values, raw_text, **currency)
    return record


def _parse_label(cells: Mapping[str, str], record: FounderRecord, row: int) -> Optional[Label]:
    funding = _parse_currency(cells["funding_label"], "funding_label", row)
    if funding is None:
        funding = record.total_raised
    success = _parse_flag(cells["success_label"], "success_label", row)
    if success is None:
        try:
            success = int(label_success(record.total_raised, record.ipo_valuation, record.acquisition_price))
        except MissingOutcome:
            success = None
    if funding is None or success is None:
        return None
    return Label(funding, bool(success))


def load_dataset(
    path: Union[str, Path],
    schema: FeatureSchema,
    strict: bool = False,
    require_labels: bool = True,
) -> Dataset:
    """Load and validate a dataset CSV.

    Args:
        path: CSV file in the documented layout
        schema: feature schema the columns must cover
        strict: raise on the first validation violation instead of logging it
        require_labels: every row must carry (or imply) funding and success

    Returns:
        Dataset with one record per data row, in file order

    Raises:
        SchemaError: declared columns missing from the header
        ParseError: malformed row, unparsable cell, negative currency, or
            (strict) a validation violation; row numbers count data rows from 1
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Dataset file not found: {path}")
    try:
        frame = pd.read_csv(
            path, dtype=str, keep_default_na=False, na_filter=False, encoding="utf-8"
        )
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        row = int(match.group(1)) - 1 if match else None
        raise ParseError(f"malformed CSV: {e}", row) from e
    except pd.errors.EmptyDataError as e:
        raise ParseError(f"empty dataset file {path}") from e

    columns = list(frame.columns)
    missing = [c for c in _required_columns(schema) if c not in columns]
    if missing:
        raise SchemaError(f"{path} is missing declared columns", missing)
    text_columns = [c for c in columns if c == PROFILE_TEXT or c.endswith(TEXT_SUFFIX)]

    records, labels, violations = [], {}, {}
    for i, cells in enumerate(frame.to_dict(orient="records"), start=1):
        try:
            record = _parse_row(cells, schema, text_columns, i)
        except RangeError as e:
            raise ParseError(str(e), i) from e
        label = _parse_label(cells, record, i)
        if label is None and require_labels:
            raise ParseError("missing funding or success label and no outcome to derive it from", i)

        found = validate_record(record, schema)
        if label is not None:
            labels[record.id] = label
            found += validate_label(label)
        if found:
            if strict:
                raise ParseError("; ".join(str(v) for v in found), i)
            logger.warning("record %s (row %d): %s", record.id, i, "; ".join(str(v) for v in found))
            violations[record.id] = tuple(found)
        records.append(record)

    logger.info("loaded %d records from %s", len(records), path)
    return Dataset(schema, tuple(records), labels, violations)


def _format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    return str(value)


def dataset_frame(dataset: Dataset) -> pd.DataFrame:
    """All-string frame in the CSV layout."""
    schema = dataset.schema
    text_columns = sorted(
        {k for r in dataset.records for k in r.raw_text if k not in schema}
    )
    rows = []
    for record in dataset.records:
        row = {ID_COLUMN: record.id}
        for decl in schema:
            if decl.branch is FeatureBranch.TEXTUAL:
                row[decl.name] = record.raw_text.get(decl.name, "")
            else:
                row[decl.name] = _format_value(record.values.get(decl.name))
        for column in text_columns:
            row[column] = record.raw_text.get(column, "")
        for name in CURRENCY_COLUMNS:
            row[name] = _format_value(getattr(record, name))
        label = dataset.labels.get(record.id)
        row["funding_label"] = _format_value(label.funding) if label else ""
        row["success_label"] = ("1" if label.success else "0") if label else ""
        rows.append(row)
    columns = [ID_COLUMN] + schema.names + text_columns + list(CURRENCY_COLUMNS) + list(LABEL_COLUMNS)
    return pd.DataFrame(rows, columns=columns, dtype=str)


def save_dataset(dataset: Dataset, path: Union[str, Path]):
    path = Path(path)
    ensure_dir(path.parent)
    dataset_frame(dataset).to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    logger.info("wrote %d records to %s", len(dataset), path)
