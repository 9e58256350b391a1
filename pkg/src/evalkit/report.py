#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Evaluation reports.

A report holds one row per evaluation subset plus an ``overall`` row pooled
across subsets, the funding-class success table, and optionally a threshold
sweep, a sensitivity table and ablation rows. Reports are written as JSON
(lossless, reloadable), aligned text for reading, and plot-ready CSVs.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from constants import BucketBy
from core import FittedPipeline, class_table_rows, predict_dataset, success_by_class
from schema import Dataset
from utils import ensure_dir, fingerprint, load_json, save_json, write_text
from utils.errors import MetricError
from .metrics import mape, precision_multiple, precision_recall
from .sensitivity import SensitivityTable
from .sweep import SweepRow, precision_plateau

logger = logging.getLogger(__name__)

OVERALL = "overall"


@dataclass(frozen=True)
class EvaluationRow:
    subset: str
    n: int
    successes: int
    baseline_rate: float
    precision: Optional[float]
    precision_multiple: Optional[float]
    recall: float
    mape: Optional[float]
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision_defined(self) -> bool:
        return self.precision is not None

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, data: dict) -> "EvaluationRow":
        return cls(**data)


def evaluation_row(name: str, predicted_success, actual_success, predicted_funding, actual_funding) -> EvaluationRow:
    """Metrics of one subset from aligned prediction and label vectors."""
    actual_success = np.asarray(actual_success, dtype=bool)
    pr = precision_recall(predicted_success, actual_success)
    base = float(actual_success.mean()) if actual_success.size else 0.0
    multiple = precision_multiple(pr.precision, base) if base > 0 else None
    try:
        error = mape(predicted_funding, actual_funding)
    except MetricError as e:
        logger.warning("MAPE undefined for %s: %s", name, e)
        error = None
    return EvaluationRow(
        subset=name,
        n=int(actual_success.size),
        successes=int(actual_success.sum()),
        baseline_rate=base,
        precision=pr.precision,
        precision_multiple=multiple,
        recall=pr.recall,
        mape=error,
        tp=pr.tp,
        fp=pr.fp,
        fn=pr.fn,
    )


@dataclass
class EvaluationReport:
    rows: List[EvaluationRow]
    threshold: float
    class_table: List[dict] = field(default_factory=list)
    class_table_by: str = BucketBy.PREDICTED.value
    sweep: Optional[List[SweepRow]] = None
    sensitivity: Optional[SensitivityTable] = None
    ablation: Optional[dict] = None
    config_fingerprint: Optional[str] = None
    split_fingerprint: Optional[str] = None
    schema_hash: Optional[str] = None

    @property
    def subsets(self) -> List[EvaluationRow]:
        return [row for row in self.rows if row.subset != OVERALL]

    @property
    def overall(self) -> Optional[EvaluationRow]:
        for row in self.rows:
            if row.subset == OVERALL:
                return row
        return None

    def row(self, subset: str) -> EvaluationRow:
        for row in self.rows:
            if row.subset == subset:
                return row
        raise KeyError(subset)

    @property
    def plateau(self) -> Optional[Tuple[float, float]]:
        return precision_plateau(self.sweep) if self.sweep else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": [row.to_dict() for row in self.rows],
            "threshold": self.threshold,
            "class_table": list(self.class_table),
            "class_table_by": self.class_table_by,
            "sweep": [row.to_dict() for row in self.sweep] if self.sweep is not None else None,
            "sensitivity": self.sensitivity.to_dict() if self.sensitivity is not None else None,
            "ablation": self.ablation,
            "config_fingerprint": self.config_fingerprint,
            "split_fingerprint": self.split_fingerprint,
            "schema_hash": self.schema_hash,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EvaluationReport":
        return cls(
            rows=[EvaluationRow.from_dict(r) for r in data["rows"]],
            threshold=data["threshold"],
            class_table=list(data.get("class_table") or []),
            class_table_by=data.get("class_table_by", BucketBy.PREDICTED.value),
            sweep=[SweepRow(**r) for r in data["sweep"]] if data.get("sweep") is not None else None,
            sensitivity=SensitivityTable.from_dict(data["sensitivity"]) if data.get("sensitivity") else None,
            ablation=data.get("ablation"),
            config_fingerprint=data.get("config_fingerprint"),
            split_fingerprint=data.get("split_fingerprint"),
            schema_hash=data.get("schema_hash"),
        )

    def to_text(self) -> str:
        return render_text(self)

    def save(self, out_dir: Union[str, Path], stem: str = "report") -> Dict[str, Path]:
        """Write ``<stem>.json``, ``<stem>.txt`` and, when present, sweep/sensitivity CSVs."""
        out_dir = ensure_dir(out_dir)
        paths = {"json": out_dir / f"{stem}.json", "text": out_dir / f"{stem}.txt"}
        save_json(paths["json"], self.to_dict())
        write_text(paths["text"], self.to_text())
        if self.sweep is not None:
            paths["sweep"] = out_dir / "sweep.csv"
            _write_csv(pd.DataFrame([r.to_dict() for r in self.sweep]), paths["sweep"])
        if self.sensitivity is not None:
            paths["sensitivity"] = out_dir / "sensitivity.csv"
            _write_csv(self.sensitivity.to_frame(), paths["sensitivity"])
        logger.info("wrote report to %s", out_dir)
        return paths


def load_report(path: Union[str, Path]) -> EvaluationReport:
    return EvaluationReport.from_dict(load_json(path))


def _write_csv(frame: pd.DataFrame, path: Path):
    frame.to_csv(path, index=False, lineterminator="\n", float_format="%r")


def evaluate_pipeline(
    pipeline: FittedPipeline,
    subsets: Sequence[Tuple[str, Dataset]],
    threshold: Optional[float] = None,
    by: Union[str, BucketBy] = BucketBy.PREDICTED,
) -> EvaluationReport:
    """Per-subset and pooled metrics of a fitted pipeline on labeled subsets.

    Records that fail to encode are left out of every metric.

    Raises:
        SchemaMismatchError: a subset uses a schema other than the training one
    """
    threshold = pipeline.threshold if threshold is None else threshold
    by = BucketBy.from_string(by)
    rows = []
    pooled = {"predicted": [], "actual": [], "funding": [], "label_funding": []}
    for name, dataset in subsets:
        predictions = [p for p in predict_dataset(pipeline, dataset, threshold) if p.ok]
        labels = [dataset.labels[p.id] for p in predictions]
        parts = {
            "predicted": [p.predicted_success for p in predictions],
            "actual": [label.success for label in labels],
            "funding": [p.funding for p in predictions],
            "label_funding": [label.funding for label in labels],
        }
        rows.append(evaluation_row(name, parts["predicted"], parts["actual"], parts["funding"], parts["label_funding"]))
        for key, values in parts.items():
            pooled[key].extend(values)

    if len(subsets) > 1:
        rows.append(
            evaluation_row(OVERALL, pooled["predicted"], pooled["actual"], pooled["funding"], pooled["label_funding"])
        )
    bucket = pooled["funding"] if by is BucketBy.PREDICTED else pooled["label_funding"]
    table = class_table_rows(success_by_class(bucket, pooled["actual"])) if bucket else []
    return EvaluationReport(
        rows=rows,
        threshold=threshold,
        class_table=table,
        class_table_by=by.value,
        config_fingerprint=fingerprint(pipeline.config.to_dict()),
        schema_hash=pipeline.schema.hash,
    )


def _pct(value: Optional[float], digits: int = 2) -> str:
    return "n/a" if value is None else f"{100 * value:.{digits}f}%"


def _times(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.1f}X"


def _table(header: Sequence[str], body: Sequence[Sequence[str]]) -> List[str]:
    widths = [max(len(str(c)) for c in column) for column in zip(header, *body)] if body else [len(h) for h in header]
    line = "  ".join(f"{h:<{w}}" for h, w in zip(header, widths))
    lines = [line, "-" * len(line)]
    for cells in body:
        lines.append("  ".join(f"{str(c):<{w}}" for c, w in zip(cells, widths)))
    return lines


def render_text(report: EvaluationReport) -> str:
    """Aligned-column text: subset overview, then recall / precision multiple, then the class table."""
    lines = ["Evaluation subsets", ""]
    lines += _table(
        ["Subset", "Size", "Successes", "Baseline"],
        [[r.subset, r.n, r.successes, _pct(r.baseline_rate)] for r in report.rows],
    )
    lines += ["", f"Performance at threshold {report.threshold:g}", ""]
    lines += _table(
        ["Subset", "Recall", "Precision", "Multiple", "MAPE"],
        [
            [r.subset, _pct(r.recall, 1), _pct(r.precision, 1), _times(r.precision_multiple),
             "n/a" if r.mape is None else f"{r.mape:.2f}%"]
            for r in report.rows
        ],
    )
    if report.class_table:
        lines += ["", f"Success probability by funding class ({report.class_table_by} funding)", ""]
        lines += _table(
            ["Funding class ($)", "N", "P(success)"],
            [[row["funding_class"], row["n"], _pct(row["success_probability"])] for row in report.class_table],
        )
    if report.sweep:
        lines += ["", "Threshold sweep", ""]
        lines += _table(
            ["Threshold", "Precision", "Multiple", "Recall", "Predicted +"],
            [
                [f"{r.threshold:.2f}", _pct(r.precision, 1), _times(r.precision_multiple), _pct(r.recall, 1),
                 r.n_predicted_positive]
                for r in report.sweep
            ],
        )
        plateau = report.plateau
        if plateau is not None:
            lines.append(f"precision plateau: {plateau[0]:.2f} - {plateau[1]:.2f}")
    if report.sensitivity is not None:
        lines += ["", "Feature sensitivity (top 10)", ""]
        lines += _table(["Feature", "Share"], [[name, _pct(share)] for name, share in report.sensitivity.top(10)])
    if report.ablation:
        lines += ["", f"Ablation: {report.ablation.get('suite')}", ""]
        lines += ablation_lines(report.ablation)
    return "\n".join(lines) + "\n"


def ablation_lines(ablation: dict) -> List[str]:
    rows = [ablation["full"]] + list(ablation["rows"])
    return _table(
        ["Variant", "N", "Baseline", "Precision", "Recall", "Multiple", "Delta multiple", "Delta recall"],
        [
            [
                r["variant"], r["n"], _pct(r["baseline_rate"]), _pct(r["precision"], 1), _pct(r["recall"], 1),
                _times(r["precision_multiple"]), f"{r['delta_multiple']:+.1f}X", f"{100 * r['delta_recall']:+.1f}pp",
            ]
            for r in rows
        ],
    )
