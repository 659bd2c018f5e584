"""Evaluation report tables: per-category metrics, per-feature metrics, the
selection trace, and the estimator comparison against classic readability
formulas.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .corpus import Document
from .errors import ConfigError, SingularDesign, UndefinedCorrelation
from .features import FeatureDescriptor, FeatureVector
from .model import (
    PipelineConfig,
    accuracy,
    classic_formulas,
    classify,
    complete_rows,
    cross_validate,
    fit_ols,
    fit_thresholds,
    fold_partitions,
    forward_select,
    pearson,
    predict,
    prune_collinear,
    rmse,
    select_by_bic,
    tad,
    trace_bic,
)

CATEGORY_ROWS = (
    ("Baseline", "baseline-only", "baseline"),
    ("AOA", "gept-only", "gept"),
    ("AOA", "vq-only", "vq"),
    ("Coreference", "coreference-only", "coreference"),
    ("Parsing", "parsing-only", "parsing"),
    ("Grammar", "grammar-only", "grammar"),
    ("Semantic", "wordnet-only", "semantic"),
    ("Frequency", "bnc_frequency", "bnc_frequency"),
    ("Frequency", "google_search_count", "google_search_count"),
)


def _features_for(selector: str, registry: Sequence[FeatureDescriptor]) -> tuple[str, ...]:
    if selector == "gept":
        return tuple(d.name for d in registry if d.name.startswith("gept"))
    if selector == "vq":
        return tuple(d.name for d in registry if d.name.startswith("vq"))
    if selector in ("bnc_frequency", "google_search_count"):
        return (selector,)
    return tuple(d.name for d in registry if d.category == selector)


def category_report(
    rows: Sequence[FeatureVector],
    registry: Sequence[FeatureDescriptor],
    folds: int = 5,
    repetitions: int = 5,
    seed: int = 0,
) -> list[dict]:
    """Cross-validated RMSE and r for each feature category on its own.

    Exactly collinear members inside a category (the proportion families sum
    to one) are pruned before fitting and listed in the row.
    """
    report = []
    for category, label, selector in CATEGORY_ROWS:
        names = _features_for(selector, registry)
        kept, dropped = prune_collinear(rows, names)
        row = {
            "category": category,
            "features": label,
            "dropped": ",".join(dropped),
            "rmse": None,
            "r": None,
        }
        if kept:
            try:
                result = cross_validate(
                    rows, PipelineConfig(mode="fixed", subset=kept), folds, repetitions, seed
                )
                row["rmse"] = result.mean_rmse
                row["r"] = result.mean_r
            except (SingularDesign, UndefinedCorrelation, ConfigError):
                pass
        report.append(row)
    return report


def per_feature_report(
    rows: Sequence[FeatureVector],
    registry: Sequence[FeatureDescriptor],
    folds: int = 5,
    repetitions: int = 5,
    seed: int = 0,
) -> list[dict]:
    """Single-feature regressions for every registry entry, both full-data
    fits (slope, intercept, in-sample metrics) and cross-validated metrics,
    ranked by CV correlation. Degenerate features keep their row with empty
    metrics."""
    report = []
    for descriptor in registry:
        row = {
            "category": descriptor.category,
            "name": descriptor.name,
            "slope": None,
            "intercept": None,
            "rmse_fit": None,
            "r_fit": None,
            "rmse_cv": None,
            "r_cv": None,
        }
        subset = (descriptor.name,)
        try:
            model = fit_ols(rows, subset)
            usable = complete_rows(rows, subset)
            gold = [float(r.grade) for r in usable]
            preds = [predict(model, r) for r in usable]
            row["slope"] = model.coefficients[descriptor.name]
            row["intercept"] = model.intercept
            row["rmse_fit"] = rmse(gold, preds)
            row["r_fit"] = pearson(gold, preds)
            result = cross_validate(
                rows, PipelineConfig(mode="fixed", subset=subset), folds, repetitions, seed
            )
            row["rmse_cv"] = result.mean_rmse
            row["r_cv"] = result.mean_r
        except (SingularDesign, UndefinedCorrelation, ConfigError):
            pass
        report.append(row)
    report.sort(key=lambda r: (-(r["r_cv"] if r["r_cv"] is not None else -np.inf), r["name"]))
    for rank, row in enumerate(report, start=1):
        row["rank"] = rank
    return report


def selection_report(
    trace,
    chosen_index: int,
    rows: Sequence[FeatureVector],
    registry: Sequence[FeatureDescriptor],
) -> list[dict]:
    """The selection trace in the shape of the optimal-model table, with a
    terminal 'all' row fitting every (non-collinear) registry feature."""
    report = []
    for i, step in enumerate(trace.steps):
        report.append(
            {
                "model": i + 1,
                "added_feature": step.added_feature,
                "rmse": step.rmse,
                "r": step.r,
                "bic": step.bic,
                "rss": step.rss,
                "n_rows": step.n_rows,
                "f_statistic": step.f_statistic,
                "p_value": step.p_value,
                "accepted": step.accepted,
                "chosen": i == chosen_index,
            }
        )
    names = tuple(d.name for d in registry)
    kept, dropped = prune_collinear(rows, names)
    try:
        full = fit_ols(rows, kept)
        usable = complete_rows(rows, kept)
        gold = [float(r.grade) for r in usable]
        preds = [predict(full, r) for r in usable]
        report.append(
            {
                "model": "all",
                "added_feature": f"all ({len(kept)} kept, {len(dropped)} collinear dropped)",
                "rmse": rmse(gold, preds),
                "r": pearson(gold, preds),
                "bic": trace_bic(full.n, full.rss, len(kept)),
                "rss": full.rss,
                "n_rows": full.n,
                "f_statistic": None,
                "p_value": None,
                "accepted": None,
                "chosen": False,
            }
        )
    except (SingularDesign, UndefinedCorrelation, ConfigError):
        pass
    return report


@dataclass
class ComparisonRow:
    estimator: str
    rmse_levels: float
    rmse_continuous: Optional[float]
    r: float
    accuracy: float
    tad: float

    def to_dict(self) -> dict:
        return {
            "estimator": self.estimator,
            "rmse": self.rmse_levels,
            "rmse_continuous": self.rmse_continuous,
            "r": self.r,
            "accuracy": self.accuracy,
            "tad": self.tad,
        }


def _fold_metrics(
    gold: list[float], scores: list[float], train_pairs: list[tuple[int, float]], levels
) -> tuple[float, float, float, Optional[float]]:
    """Threshold scores with train-fitted centroids and measure the test fold.

    Scores are oriented to correlate positively with the grade before
    threshold fitting (Flesch Reading Ease runs on an inverted scale; the
    monotone-centroid invariant would otherwise pool it flat). Returns
    (level RMSE, accuracy, TAD, r of the raw scores)."""
    train_gold = [g for g, _ in train_pairs]
    train_scores = [s for _, s in train_pairs]
    orientation = 1.0
    try:
        if pearson(train_gold, train_scores) < 0:
            orientation = -1.0
    except UndefinedCorrelation:
        pass
    thresholds = fit_thresholds(
        [(g, orientation * s) for g, s in train_pairs], levels
    )
    predicted = [classify(orientation * s, thresholds) for s in scores]
    try:
        r_value = pearson(gold, scores)
    except UndefinedCorrelation:
        r_value = None
    return (
        rmse(gold, [float(p) for p in predicted]),
        accuracy([int(g) for g in gold], predicted),
        tad(gold, predicted),
        r_value,
    )


def comparison_report(
    docs: Sequence[Document],
    rows: Sequence[FeatureVector],
    registry: Sequence[FeatureDescriptor],
    pron_dict: Optional[dict] = None,
    folds: int = 5,
    repetitions: int = 5,
    seed: int = 0,
    alpha_enter: float = 0.05,
) -> list[ComparisonRow]:
    """Estimator comparison under one shared CV protocol.

    The proposed model reruns forward selection + BIC inside every training
    fold; the classic formulas are fixed functions whose level thresholds are
    fit on each training fold. All estimators share fold partitions.
    """
    if len(docs) != len(rows):
        raise ConfigError("docs and feature rows must align")
    levels = tuple(sorted({int(r.grade) for r in rows}))
    candidates = tuple(d.name for d in registry)
    classic_scores = {name: [] for name in ("fleschReadingEase", "fleschKincaidGrade", "colemanLiau")}
    for doc in docs:
        values = classic_formulas(doc, pron_dict)
        for name in classic_scores:
            classic_scores[name].append(values[name])
    per_estimator: dict[str, list[tuple[float, float, float, Optional[float]]]] = {}
    proposed_cont_rmse: list[float] = []
    for rep, parts in enumerate(fold_partitions(len(rows), folds, repetitions, seed)):
        for test_indices in parts:
            test_set = set(test_indices)
            train_idx = [i for i in range(len(rows)) if i not in test_set]
            train_rows = [rows[i] for i in train_idx]
            test_rows = [rows[i] for i in test_indices]
            gold = [float(r.grade) for r in test_rows]

            trace = forward_select(train_rows, candidates, alpha_enter)
            chosen = trace.accepted_subset(select_by_bic(trace))
            model = fit_ols(train_rows, chosen)
            train_pred = [
                (int(r.grade), predict(model, r))
                for r in complete_rows(train_rows, chosen)
            ]
            test_pred = [predict(model, r) for r in test_rows]
            proposed_cont_rmse.append(rmse(gold, test_pred))
            per_estimator.setdefault("proposed", []).append(
                _fold_metrics(gold, test_pred, train_pred, levels)
            )
            for name, scores in classic_scores.items():
                train_pairs = [(int(rows[i].grade), scores[i]) for i in train_idx]
                fold_scores = [scores[i] for i in test_indices]
                per_estimator.setdefault(name, []).append(
                    _fold_metrics(gold, fold_scores, train_pairs, levels)
                )
    report = []
    for name in ("proposed", "fleschReadingEase", "fleschKincaidGrade", "colemanLiau"):
        metrics = per_estimator[name]
        r_values = [m[3] for m in metrics if m[3] is not None]
        report.append(
            ComparisonRow(
                estimator=name,
                rmse_levels=float(np.mean([m[0] for m in metrics])),
                rmse_continuous=(
                    float(np.mean(proposed_cont_rmse)) if name == "proposed" else None
                ),
                r=float(np.mean(r_values)) if r_values else float("nan"),
                accuracy=float(np.mean([m[1] for m in metrics])),
                tad=float(np.mean([m[2] for m in metrics])),
            )
        )
    return report


# ---------------------------------------------------------------------------
# Rendering


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: Path | str, header: Sequence[str], rows: Sequence[dict]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(row.get(key)) for key in header])


def _md_cell(value) -> str:
    if value is None:
        return "--"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def markdown_table(header: Sequence[str], rows: Sequence[dict]) -> str:
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(_md_cell(row.get(key)) for key in header) + " |")
    return "\n".join(lines) + "\n"
