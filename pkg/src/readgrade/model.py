"""Regression fitting, stepwise selection, evaluation metrics, and level
classification.

Fitting and selection are deterministic and single threaded; cross-validation
partitions derive every fold from (seed, repetition) so results are
independent of scheduling.
"""

from __future__ import annotations

import functools
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .corpus import Document, count_syllables
from .errors import (
    BicUndefined,
    ConfigError,
    MissingFeature,
    SingularDesign,
    UndefinedCorrelation,
)
from .features import FeatureVector
from .fstats import f_survival

# Residual variance below this fraction of a candidate's own variance marks
# it perfectly collinear with the current subset.
COLLINEARITY_TOLERANCE = 1e-10

TRAINING_META_DEFAULTS = {
    "log_base": "e",
    "height_convention": "edges-root-to-terminal",
    "bic_k_convention": "slopes-only",
}


@functools.lru_cache(maxsize=64)
def _index_map(names: tuple[str, ...]) -> dict[str, int]:
    return {name: i for i, name in enumerate(names)}


def complete_rows(rows: Sequence[FeatureVector], subset: Sequence[str]) -> list[FeatureVector]:
    """Rows with every subset feature present (listwise deletion)."""
    out = []
    for row in rows:
        idx = _index_map(row.names)
        if not any(row.missing[idx[name]] for name in subset):
            out.append(row)
    return out


def design_matrix(
    rows: Sequence[FeatureVector], subset: Sequence[str]
) -> tuple[np.ndarray, np.ndarray]:
    """(X, y) over rows; caller is responsible for listwise deletion."""
    idx = _index_map(rows[0].names)
    cols = [idx[name] for name in subset]
    X = np.array([[row.values[c] for c in cols] for row in rows], dtype=float)
    y = np.array([float(row.grade) for row in rows], dtype=float)
    return X, y


@dataclass(frozen=True)
class LevelThresholds:
    levels: tuple[int, ...]
    centroids: tuple[float, ...]
    min_score: float
    max_score: float
    pooled: bool = False
    extrapolated: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "levels": list(self.levels),
            "centroids": list(self.centroids),
            "min_score": self.min_score,
            "max_score": self.max_score,
            "pooled": self.pooled,
            "extrapolated": list(self.extrapolated),
        }

    @staticmethod
    def from_dict(payload: dict) -> "LevelThresholds":
        return LevelThresholds(
            levels=tuple(payload["levels"]),
            centroids=tuple(payload["centroids"]),
            min_score=payload["min_score"],
            max_score=payload["max_score"],
            pooled=payload.get("pooled", False),
            extrapolated=tuple(payload.get("extrapolated", ())),
        )


@dataclass(frozen=True)
class SelectionStep:
    added_feature: str
    rmse: float
    r: float
    bic: float
    rss: float
    n_rows: int
    f_statistic: Optional[float]
    p_value: Optional[float]
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "added_feature": self.added_feature,
            "rmse": self.rmse,
            "r": self.r,
            "bic": self.bic,
            "rss": self.rss,
            "n_rows": self.n_rows,
            "f_statistic": self.f_statistic,
            "p_value": self.p_value,
            "accepted": self.accepted,
        }


@dataclass(frozen=True)
class SelectionTrace:
    steps: tuple[SelectionStep, ...]
    skipped: tuple[tuple[str, str], ...] = ()

    def accepted_subset(self, upto: Optional[int] = None) -> tuple[str, ...]:
        """Features accepted through step index ``upto`` (inclusive)."""
        steps = self.steps if upto is None else self.steps[: upto + 1]
        return tuple(s.added_feature for s in steps if s.accepted)

    def to_dict(self) -> dict:
        return {
            "steps": [s.to_dict() for s in self.steps],
            "skipped": [list(pair) for pair in self.skipped],
        }

    @staticmethod
    def from_dict(payload: dict) -> "SelectionTrace":
        return SelectionTrace(
            steps=tuple(SelectionStep(**s) for s in payload["steps"]),
            skipped=tuple((a, b) for a, b in payload.get("skipped", ())),
        )


@dataclass(frozen=True)
class RegressionModel:
    intercept: float
    coefficients: dict[str, float]
    feature_subset: tuple[str, ...]
    training_meta: dict
    thresholds: Optional[LevelThresholds] = None
    selection_trace: Optional[SelectionTrace] = None

    @property
    def rss(self) -> float:
        return self.training_meta["rss"]

    @property
    def r_squared(self) -> float:
        return self.training_meta["r_squared"]

    @property
    def n(self) -> int:
        return self.training_meta["n"]

    def to_dict(self) -> dict:
        return {
            "registryHash": self.training_meta.get("registry_hash"),
            "subset": list(self.feature_subset),
            "intercept": self.intercept,
            "coefficients": self.coefficients,
            "thresholds": self.thresholds.to_dict() if self.thresholds else None,
            "trainingMeta": self.training_meta,
            "selectionTrace": (
                self.selection_trace.to_dict() if self.selection_trace else None
            ),
        }

    @staticmethod
    def from_dict(payload: dict) -> "RegressionModel":
        return RegressionModel(
            intercept=payload["intercept"],
            coefficients=dict(payload["coefficients"]),
            feature_subset=tuple(payload["subset"]),
            training_meta=dict(payload["trainingMeta"]),
            thresholds=(
                LevelThresholds.from_dict(payload["thresholds"])
                if payload.get("thresholds")
                else None
            ),
            selection_trace=(
                SelectionTrace.from_dict(payload["selectionTrace"])
                if payload.get("selectionTrace")
                else None
            ),
        )

    def save(self, path: Path | str) -> None:
        # insertion order is deterministic and keeps coefficients aligned
        # with the subset order, so keys are not resorted
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8"
        )

    @staticmethod
    def load(path: Path | str) -> "RegressionModel":
        return RegressionModel.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _offending_features(A: np.ndarray, subset: Sequence[str]) -> list[str]:
    """Feature columns that are linear combinations of the other columns."""
    full_rank = np.linalg.matrix_rank(A)
    offenders = []
    for j, name in enumerate(subset):
        reduced = np.delete(A, j + 1, axis=1)  # column 0 is the intercept
        if np.linalg.matrix_rank(reduced) == full_rank:
            offenders.append(name)
    return offenders


def fit_ols(
    rows: Sequence[FeatureVector],
    subset: Sequence[str],
    meta: Optional[dict] = None,
) -> RegressionModel:
    """Least-squares fit of grade on the given feature subset.

    Rows missing a subset feature are dropped (listwise). Solved by SVD-backed
    least squares; a rank-deficient design raises SingularDesign naming the
    dependent columns.
    """
    subset = tuple(subset)
    usable = complete_rows(rows, subset)
    # A unique solution needs as many rows as parameters (slopes + intercept);
    # exact interpolating fits (RSS = 0) are legitimate.
    if len(usable) < len(subset) + 1:
        raise ConfigError(
            f"need at least {len(subset) + 1} complete rows to fit {len(subset)} "
            f"features, have {len(usable)}"
        )
    X, y = design_matrix(usable, subset)
    A = np.column_stack([np.ones(len(usable)), X])
    rank = np.linalg.matrix_rank(A)
    if rank < A.shape[1]:
        raise SingularDesign(
            "design matrix is rank deficient", features=_offending_features(A, subset)
        )
    solution, _, _, _ = np.linalg.lstsq(A, y, rcond=None)
    residuals = y - A @ solution
    rss = float(residuals @ residuals)
    tss = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - rss / tss if tss > 0 else 0.0
    meta_out = dict(TRAINING_META_DEFAULTS)
    meta_out.update(meta or {})
    meta_out.update({"n": len(usable), "rss": rss, "r_squared": r_squared})
    return RegressionModel(
        intercept=float(solution[0]),
        coefficients={name: float(value) for name, value in zip(subset, solution[1:])},
        feature_subset=subset,
        training_meta=meta_out,
    )


def predict(model: RegressionModel, vector: FeatureVector) -> float:
    """alpha + beta . x; masked subset features are a hard error."""
    idx = _index_map(vector.names)
    masked = [
        name
        for name in model.feature_subset
        if name not in idx or vector.missing[idx[name]]
    ]
    if masked:
        raise MissingFeature(
            f"vector {vector.doc_id!r} is missing required features: {', '.join(masked)}",
            features=masked,
        )
    return model.intercept + sum(
        coef * vector.values[idx[name]] for name, coef in model.coefficients.items()
    )


def rmse(gold: Sequence[float], pred: Sequence[float]) -> float:
    g = np.asarray(gold, dtype=float)
    p = np.asarray(pred, dtype=float)
    if g.shape != p.shape or g.size == 0:
        raise ConfigError("rmse needs two equal-length non-empty vectors")
    return float(np.sqrt(np.mean((g - p) ** 2)))


def pearson(gold: Sequence[float], pred: Sequence[float]) -> float:
    g = np.asarray(gold, dtype=float)
    p = np.asarray(pred, dtype=float)
    if g.shape != p.shape or g.size < 2:
        raise ConfigError("pearson needs two equal-length vectors of size >= 2")
    gc = g - g.mean()
    pc = p - p.mean()
    denom = float(np.sqrt((gc @ gc) * (pc @ pc)))
    if denom == 0.0:
        raise UndefinedCorrelation("zero variance input to pearson")
    return float((gc @ pc) / denom)


def r_squared(model: RegressionModel, rows: Sequence[FeatureVector]) -> float:
    """1 - RSS/TSS of the model's predictions over the given rows."""
    usable = complete_rows(rows, model.feature_subset)
    if len(usable) < 2:
        raise ConfigError("r_squared needs at least 2 complete rows")
    gold = [float(r.grade) for r in usable]
    preds = [predict(model, r) for r in usable]
    g = np.asarray(gold)
    tss = float(np.sum((g - g.mean()) ** 2))
    if tss == 0.0:
        raise UndefinedCorrelation("zero variance gold labels")
    rss_here = float(np.sum((g - np.asarray(preds)) ** 2))
    return 1.0 - rss_here / tss


def semi_partial_r(
    rows: Sequence[FeatureVector],
    current_subset: Sequence[str],
    candidate: str,
) -> float:
    """Correlation of the grade with the candidate's residual after the
    current subset (intercept included) is regressed out.

    Equals plain pearson(grade, candidate) for an empty subset. A candidate
    that is (numerically) a linear combination of the subset returns 0: its
    residual carries no usable signal.
    """
    usable = complete_rows(rows, tuple(current_subset) + (candidate,))
    if len(usable) < len(current_subset) + 3:
        return 0.0
    X, y = design_matrix(usable, tuple(current_subset) + (candidate,))
    c = X[:, -1]
    own_var = float(np.var(c))
    if own_var == 0.0:
        return 0.0
    A = np.column_stack([np.ones(len(usable)), X[:, :-1]])
    coef, _, _, _ = np.linalg.lstsq(A, c, rcond=None)
    residual = c - A @ coef
    if float(np.var(residual)) < COLLINEARITY_TOLERANCE * own_var:
        return 0.0
    return pearson(y, residual)


def increment_f_test(
    rows: Sequence[FeatureVector],
    old_model: RegressionModel,
    new_model: RegressionModel,
) -> tuple[float, float]:
    """ANOVA F-test for one added feature.

    Both models are refit on the rows complete for the larger subset so the
    R-squared values are comparable. Returns (F, p) with p from F(1, n-k-1).
    """
    new_subset = new_model.feature_subset
    old_subset = old_model.feature_subset
    if len(new_subset) != len(old_subset) + 1 or not set(old_subset) <= set(new_subset):
        raise ConfigError("increment_f_test expects nested models differing by one feature")
    usable = complete_rows(rows, new_subset)
    k_new = len(new_subset)
    n = len(usable)
    if n <= k_new + 1:
        raise ConfigError("too few rows for the incremental F-test")
    r2_new = fit_ols(usable, new_subset).r_squared
    r2_old = fit_ols(usable, old_subset).r_squared if old_subset else 0.0
    if r2_new >= 1.0:
        return math.inf, 0.0
    f_value = max(r2_new - r2_old, 0.0) / ((1.0 - r2_new) / (n - k_new - 1))
    return f_value, f_survival(f_value, 1, n - k_new - 1)


def bic(n: int, rss: float, k: int) -> float:
    """n * ln(RSS/n) + ln(n) * k, with k counting slope parameters."""
    if n < 1 or k < 1:
        raise ConfigError("bic needs n >= 1 and k >= 1")
    if rss <= 0.0:
        raise BicUndefined("BIC undefined for RSS = 0")
    return n * math.log(rss / n) + math.log(n) * k


def trace_bic(n: int, rss: float, k: int) -> float:
    """bic() with the trace convention: a perfect fit reports -inf."""
    try:
        return bic(n, rss, k)
    except BicUndefined:
        return -math.inf


def _step_from_model(
    model: RegressionModel,
    rows: Sequence[FeatureVector],
    feature: str,
    f_statistic: Optional[float],
    p_value: Optional[float],
    accepted: bool,
) -> SelectionStep:
    usable = complete_rows(rows, model.feature_subset)
    gold = [float(r.grade) for r in usable]
    preds = [predict(model, r) for r in usable]
    try:
        r_value = pearson(gold, preds)
    except UndefinedCorrelation:
        r_value = 0.0
    return SelectionStep(
        added_feature=feature,
        rmse=rmse(gold, preds),
        r=r_value,
        bic=trace_bic(model.n, model.rss, len(model.feature_subset)),
        rss=model.rss,
        n_rows=model.n,
        f_statistic=f_statistic,
        p_value=p_value,
        accepted=accepted,
    )


def forward_select(
    rows: Sequence[FeatureVector],
    candidates: Sequence[str],
    alpha_enter: float = 0.05,
) -> SelectionTrace:
    """Greedy forward selection with an ANOVA entry gate.

    The first feature is the one with the highest absolute correlation with
    the grade; afterwards each round picks the highest absolute semi-partial
    correlation, fits, and keeps the feature only if the incremental F-test
    clears ``alpha_enter``. The first failing candidate is recorded as a
    rejected terminal step. Collinear or unfittable candidates are skipped
    and listed in the trace.
    """
    if len(rows) < 10:
        raise ConfigError(f"forward selection needs >= 10 rows, have {len(rows)}")
    remaining = list(dict.fromkeys(candidates))
    steps: list[SelectionStep] = []
    skipped: list[tuple[str, str]] = []
    subset: tuple[str, ...] = ()
    current: Optional[RegressionModel] = None

    def scored_candidates() -> list[tuple[float, str]]:
        scores = []
        for name in remaining:
            if subset:
                strength = abs(semi_partial_r(rows, subset, name))
            else:
                usable = complete_rows(rows, (name,))
                if len(usable) < 3:
                    strength = 0.0
                else:
                    X, y = design_matrix(usable, (name,))
                    try:
                        strength = abs(pearson(y, X[:, 0]))
                    except UndefinedCorrelation:
                        strength = 0.0
            scores.append((strength, name))
        # Descending strength; name breaks ties deterministically.
        return sorted(scores, key=lambda pair: (-pair[0], pair[1]))

    while remaining:
        progressed = False
        for strength, name in scored_candidates():
            if strength == 0.0:
                skipped.append((name, "no usable signal (constant or collinear)"))
                remaining.remove(name)
                continue
            trial_subset = subset + (name,)
            try:
                trial = fit_ols(rows, trial_subset)
            except (SingularDesign, ConfigError) as exc:
                skipped.append((name, str(exc)))
                remaining.remove(name)
                continue
            if current is None:
                steps.append(_step_from_model(trial, rows, name, None, None, accepted=True))
                subset, current = trial_subset, trial
                remaining.remove(name)
                progressed = True
                break
            try:
                f_value, p_value = increment_f_test(rows, current, trial)
            except ConfigError as exc:
                skipped.append((name, str(exc)))
                remaining.remove(name)
                continue
            accepted = p_value < alpha_enter
            steps.append(_step_from_model(trial, rows, name, f_value, p_value, accepted))
            if accepted:
                subset, current = trial_subset, trial
                remaining.remove(name)
                progressed = True
                break
            return SelectionTrace(steps=tuple(steps), skipped=tuple(skipped))
        if not progressed:
            break
    return SelectionTrace(steps=tuple(steps), skipped=tuple(skipped))


def select_by_bic(trace: SelectionTrace) -> int:
    """Index of the accepted step with the lowest BIC; ties keep the earlier
    (smaller) model."""
    accepted = [(i, s) for i, s in enumerate(trace.steps) if s.accepted]
    if not accepted:
        raise ConfigError("trace has no accepted steps")
    best_index, best = accepted[0]
    for i, step in accepted[1:]:
        if step.bic < best.bic:
            best_index, best = i, step
    return best_index


def prune_collinear(
    rows: Sequence[FeatureVector], names: Sequence[str]
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Greedy scan keeping features with fresh variance against those already
    kept; returns (kept, dropped). Used for full-registry fits, where the
    proportion families are exactly collinear with the intercept."""
    kept: list[str] = []
    dropped: list[str] = []
    for name in names:
        usable = complete_rows(rows, tuple(kept) + (name,))
        if len(usable) < len(kept) + 3:
            dropped.append(name)
            continue
        X, _ = design_matrix(usable, tuple(kept) + (name,))
        c = X[:, -1]
        own_var = float(np.var(c))
        if own_var == 0.0:
            dropped.append(name)
            continue
        A = np.column_stack([np.ones(len(usable)), X[:, :-1]])
        coef, _, _, _ = np.linalg.lstsq(A, c, rcond=None)
        residual = c - A @ coef
        if float(np.var(residual)) < COLLINEARITY_TOLERANCE * own_var:
            dropped.append(name)
        else:
            kept.append(name)
    return tuple(kept), tuple(dropped)


# ---------------------------------------------------------------------------
# Cross-validation


@dataclass(frozen=True)
class PipelineConfig:
    """What to train inside each fold: a fixed subset, or forward selection
    (with BIC choice) over the candidate list."""

    mode: str = "fixed"  # "fixed" | "forward"
    subset: tuple[str, ...] = ()
    candidates: tuple[str, ...] = ()
    alpha_enter: float = 0.05


@dataclass(frozen=True)
class FoldResult:
    repetition: int
    fold: int
    test_indices: tuple[int, ...]
    rmse: float
    r: float


@dataclass(frozen=True)
class CVResult:
    folds: tuple[FoldResult, ...]
    mean_rmse: float
    mean_r: float


def _rep_rng(seed: int, repetition: int) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}:{repetition}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))


def fold_partitions(
    n_rows: int, folds: int, repetitions: int, seed: int
) -> list[list[tuple[int, ...]]]:
    """Per repetition, a seeded shuffle split into ``folds`` near-equal test
    index groups that partition range(n_rows)."""
    if folds < 2:
        raise ConfigError("need at least 2 folds")
    if n_rows < folds:
        raise ConfigError(f"{n_rows} rows cannot fill {folds} folds")
    partitions = []
    for rep in range(repetitions):
        order = _rep_rng(seed, rep).permutation(n_rows)
        partitions.append([tuple(int(i) for i in part) for part in np.array_split(order, folds)])
    return partitions


def _fit_pipeline(train: Sequence[FeatureVector], pipeline: PipelineConfig) -> RegressionModel:
    if pipeline.mode == "fixed":
        return fit_ols(train, pipeline.subset)
    if pipeline.mode == "forward":
        trace = forward_select(train, pipeline.candidates, pipeline.alpha_enter)
        chosen = trace.accepted_subset(select_by_bic(trace))
        model = fit_ols(train, chosen)
        return RegressionModel(
            intercept=model.intercept,
            coefficients=model.coefficients,
            feature_subset=model.feature_subset,
            training_meta=model.training_meta,
            selection_trace=trace,
        )
    raise ConfigError(f"unknown pipeline mode {pipeline.mode!r}")


def cross_validate(
    rows: Sequence[FeatureVector],
    pipeline: PipelineConfig,
    folds: int = 5,
    repetitions: int = 5,
    seed: int = 0,
) -> CVResult:
    """Repeated k-fold cross-validation; each repetition reshuffles, every
    row is tested exactly once per repetition."""
    results = []
    for rep, parts in enumerate(fold_partitions(len(rows), folds, repetitions, seed)):
        for fold_index, test_indices in enumerate(parts):
            test_set = set(test_indices)
            train = [rows[i] for i in range(len(rows)) if i not in test_set]
            test = [rows[i] for i in test_indices]
            model = _fit_pipeline(train, pipeline)
            gold = [float(r.grade) for r in test]
            preds = [predict(model, r) for r in test]
            results.append(
                FoldResult(
                    repetition=rep,
                    fold=fold_index,
                    test_indices=test_indices,
                    rmse=rmse(gold, preds),
                    r=pearson(gold, preds),
                )
            )
    return CVResult(
        folds=tuple(results),
        mean_rmse=float(np.mean([f.rmse for f in results])),
        mean_r=float(np.mean([f.r for f in results])),
    )


# ---------------------------------------------------------------------------
# Level classification


def _pool_adjacent_violators(values: list[float], weights: list[float]) -> list[float]:
    """Nondecreasing weighted least-squares fit (PAV)."""
    blocks = [[v, w] for v, w in zip(values, weights)]
    i = 0
    while i + 1 < len(blocks):
        if blocks[i][0] > blocks[i + 1][0] + 1e-15:
            v1, w1 = blocks[i]
            v2, w2 = blocks[i + 1]
            blocks[i] = [(v1 * w1 + v2 * w2) / (w1 + w2), w1 + w2]
            del blocks[i + 1]
            i = max(i - 1, 0)
        else:
            i += 1
    out = []
    index = 0
    consumed = 0.0
    for weight in weights:
        out.append(blocks[index][0])
        consumed += weight
        if consumed >= blocks[index][1] - 1e-12:
            index += 1
            consumed = 0.0
    return out


def fit_thresholds(
    train_scores: Sequence[tuple[int, float]],
    levels: Sequence[int],
) -> LevelThresholds:
    """Per-level centroids of predicted scores, forced monotone.

    Levels with no training data are interpolated between observed neighbors
    (clamped at the ends) and flagged extrapolated. Inversions are pooled by
    adjacent-violators averaging and flagged.
    """
    if not train_scores:
        raise ConfigError("fit_thresholds needs at least one training score")
    levels = tuple(sorted(levels))
    by_level: dict[int, list[float]] = {}
    for level, score in train_scores:
        by_level.setdefault(level, []).append(score)
    observed = [lvl for lvl in levels if lvl in by_level]
    if not observed:
        raise ConfigError("no training score matches any requested level")
    raw: list[float] = []
    weights: list[float] = []
    extrapolated = []
    for lvl in levels:
        if lvl in by_level:
            raw.append(float(np.mean(by_level[lvl])))
            weights.append(float(len(by_level[lvl])))
        else:
            extrapolated.append(lvl)
            below = [o for o in observed if o < lvl]
            above = [o for o in observed if o > lvl]
            if below and above:
                lo, hi = max(below), min(above)
                lo_c = float(np.mean(by_level[lo]))
                hi_c = float(np.mean(by_level[hi]))
                raw.append(lo_c + (hi_c - lo_c) * (lvl - lo) / (hi - lo))
            elif below:
                raw.append(float(np.mean(by_level[max(below)])))
            else:
                raw.append(float(np.mean(by_level[min(above)])))
            weights.append(1e-9)  # placeholder weight: never drags PAV pooling
    monotone = _pool_adjacent_violators(raw, weights)
    pooled = any(abs(a - b) > 1e-12 for a, b in zip(raw, monotone))
    scores = [s for _, s in train_scores]
    return LevelThresholds(
        levels=levels,
        centroids=tuple(monotone),
        min_score=float(min(scores)),
        max_score=float(max(scores)),
        pooled=pooled,
        extrapolated=tuple(extrapolated),
    )


def classify(score: float, thresholds: LevelThresholds) -> int:
    """Snap a score to the closest level centroid.

    Scores outside the training range clamp to the end levels; an exact
    midpoint between two centroids goes to the lower level.
    """
    if score < thresholds.min_score:
        return thresholds.levels[0]
    if score > thresholds.max_score:
        return thresholds.levels[-1]
    best_level = thresholds.levels[0]
    best_distance = abs(score - thresholds.centroids[0])
    for level, centroid in zip(thresholds.levels[1:], thresholds.centroids[1:]):
        distance = abs(score - centroid)
        if distance < best_distance:
            best_level, best_distance = level, distance
    return best_level


def accuracy(gold: Sequence[int], pred: Sequence[int]) -> float:
    if len(gold) != len(pred) or not gold:
        raise ConfigError("accuracy needs equal-length non-empty sequences")
    return sum(1 for g, p in zip(gold, pred) if g == p) / len(gold)


def tad(gold: Sequence[float], pred: Sequence[float]) -> float:
    """Trend accuracy in direction, in percent.

    The fraction of ordered pairs (i, j), i != j, where the gold difference
    and the predicted difference share a strict sign.
    """
    n = len(gold)
    if len(pred) != n or n < 2:
        raise ConfigError("tad needs equal-length sequences of size >= 2")
    g = np.asarray(gold, dtype=float)
    p = np.asarray(pred, dtype=float)
    dg = g[:, None] - g[None, :]
    dp = p[:, None] - p[None, :]
    concordant = int(np.count_nonzero(dg * dp > 0))
    return concordant / (n * (n - 1)) * 100.0


# ---------------------------------------------------------------------------
# Classic readability formulas (native-reader baselines)

CLASSIC_FORMULAS = ("fleschReadingEase", "fleschKincaidGrade", "colemanLiau")


def classic_formulas(doc: Document, pron_dict: Optional[dict] = None) -> dict[str, float]:
    """Flesch Reading Ease, Flesch-Kincaid Grade Level, and Coleman-Liau,
    from token/sentence/syllable/letter totals."""
    words = doc.token_count
    sentences = doc.sentence_count
    syllable_total = sum(count_syllables(t.surface, pron_dict) for t in doc.tokens())
    letters = sum(1 for t in doc.tokens() for c in t.surface if c.isalpha())
    words_per_sentence = words / sentences
    syllables_per_word = syllable_total / words
    letters_per_100 = 100.0 * letters / words
    sentences_per_100 = 100.0 * sentences / words
    return {
        "fleschReadingEase": 206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word,
        "fleschKincaidGrade": 0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59,
        "colemanLiau": 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8,
    }
