"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines. Every tolerance is pinned here, not configured elsewhere.
"""

import itertools
import json
import math
import time

import numpy as np
import pytest
import scipy.stats

from readgrade.cli import main
from readgrade.corpus import count_syllables, load_corpus, load_manifest, tokenize
from readgrade.features import default_registry, featurize, load_resources
from readgrade.lexicon import (
    GEPT_LEVELS,
    GradedLexicon,
    VQ_LEVELS,
    aoa_proportions,
    synset_bucket,
)
from readgrade.model import (
    LevelThresholds,
    PipelineConfig,
    bic,
    classify,
    cross_validate,
    fit_ols,
    fold_partitions,
    forward_select,
    increment_f_test,
    select_by_bic,
    tad,
)
from readgrade.reports import comparison_report
from readgrade.synthesis import SynthConfig, generate_corpus
from readgrade.syntax import CompiledPattern, ParseTree, leaf, parse_bracket_tree, parsing_features

from conftest import make_rows


def _report(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"{status}: {criterion}{suffix}")
    assert ok, f"{criterion}{suffix}"


def test_unit_rule_fidelity():
    started = time.time()
    ok = synset_bucket(17) == 4
    ok = ok and all(synset_bucket(x) == 7 for x in range(50, 200))
    ok = ok and synset_bucket(1_000_000) == 7
    ok = ok and count_syllables("water") == 2
    thresholds = LevelThresholds(
        levels=(0, 1, 2), centroids=(0.5, 1.5, 2.5), min_score=0.2, max_score=2.8
    )
    ok = ok and classify(-10.0, thresholds) == 0
    ok = ok and classify(0.19, thresholds) == 0
    ok = ok and classify(10.0, thresholds) == 2
    ok = ok and classify(2.81, thresholds) == 2
    elapsed = time.time() - started
    _report("unit rule fidelity", ok and elapsed < 1.0, f"{elapsed:.2f}s")


def test_ols_matches_normal_equations_oracle():
    started = time.time()
    rng = np.random.default_rng(2024)
    failures = 0
    for _ in range(100):
        k = int(rng.integers(1, 6))
        X = rng.normal(size=(50, k))
        beta = rng.normal(size=k)
        y = rng.normal() + X @ beta + rng.normal(scale=0.5, size=50)
        A = np.column_stack([np.ones(50), X])
        if np.linalg.cond(A) >= 1e6:
            continue
        model = fit_ols(make_rows(X, y), tuple(f"x{i}" for i in range(k)))
        oracle = np.linalg.inv(A.T @ A) @ (A.T @ y)
        mine = np.array([model.intercept] + [model.coefficients[f"x{i}"] for i in range(k)])
        if not np.allclose(mine, oracle, rtol=1e-9, atol=1e-12):
            failures += 1
    elapsed = time.time() - started
    _report(
        "OLS vs normal-equations oracle (100 designs, 1e-9 relative)",
        failures == 0 and elapsed < 5.0,
        f"{failures} failures, {elapsed:.2f}s",
    )


def _exhaustive_bic_oracle(X: np.ndarray, y: np.ndarray) -> frozenset:
    """All-subsets BIC argmin computed directly in numpy (2^10 fits)."""
    n = len(y)
    best_value, best_subset = None, None
    for k in range(1, X.shape[1] + 1):
        for combo in itertools.combinations(range(X.shape[1]), k):
            A = np.column_stack([np.ones(n), X[:, combo]])
            coef, _, _, _ = np.linalg.lstsq(A, y, rcond=None)
            residual = y - A @ coef
            rss = float(residual @ residual)
            value = n * math.log(rss / n) + math.log(n) * k if rss > 0 else -math.inf
            if best_value is None or value < best_value:
                best_value, best_subset = value, combo
    return frozenset(f"x{i}" for i in best_subset)


def test_selection_recovery_against_exhaustive_oracle():
    # Note: BIC itself admits a spurious third feature in a minority of seeds
    # (with 8 pure-noise candidates at n=200 the true all-subsets argmin
    # includes one extra ~15% of the time), so the pass condition is: x3 is
    # picked first, the chosen subset contains both planted features, and it
    # equals the independent exhaustive all-subsets oracle.
    started = time.time()
    names = tuple(f"x{i}" for i in range(10))
    passes = 0
    exact_matches = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(200, 10))
        y = 2.0 * X[:, 3] + 0.7 * X[:, 8] + rng.normal(scale=0.1, size=200)
        rows = make_rows(X, y)
        trace = forward_select(rows, names)
        chosen = frozenset(trace.accepted_subset(select_by_bic(trace)))
        oracle = _exhaustive_bic_oracle(X, y)
        ok = (
            trace.steps[0].added_feature == "x3"
            and {"x3", "x8"} <= chosen
            and chosen == oracle
        )
        passes += ok
        exact_matches += chosen == {"x3", "x8"}
    elapsed = time.time() - started
    _report(
        "selection recovery vs exhaustive BIC oracle (>=95/100 seeds)",
        passes >= 95 and elapsed < 60.0,
        f"{passes}/100 oracle-consistent, {exact_matches}/100 exactly planted, {elapsed:.1f}s",
    )


def test_bic_arithmetic():
    ok = abs(bic(10, 10, 1) - math.log(10)) <= 1e-12
    expected = 100 * math.log(25 / 100) + math.log(100) * 3
    ok = ok and abs(bic(100, 25, 3) - expected) <= 1e-9
    _report("BIC arithmetic", ok)


def test_f_test_calibration():
    started = time.time()
    rng = np.random.default_rng(777)
    n = 500
    p_values = []
    for _ in range(1000):
        x = rng.normal(size=n)
        y = x + rng.normal(size=n)
        noise = rng.normal(size=n)
        rows = make_rows(np.column_stack([x, noise]), y)
        old = fit_ols(rows, ("x0",))
        new = fit_ols(rows, ("x0", "x1"))
        _, p = increment_f_test(rows, old, new)
        p_values.append(p)
    ks = scipy.stats.kstest(p_values, "uniform")
    critical_ok = abs(
        __import__("readgrade.fstats", fromlist=["f_survival"]).f_survival(4.17, 1, 30)
        - 0.05
    ) <= 0.002
    elapsed = time.time() - started
    _report(
        "F-test calibration (KS uniformity at alpha=0.01; F(1,30)=4.17 -> p~0.05)",
        ks.pvalue > 0.01 and critical_ok and elapsed < 30.0,
        f"KS p={ks.pvalue:.3f}, {elapsed:.1f}s",
    )


def test_tad_oracle_equivalence():
    rng = np.random.default_rng(4242)
    ok = True
    for _ in range(50):
        gold = rng.integers(0, 6, size=30).astype(float)
        pred = rng.normal(size=30)
        brute = sum(
            1
            for i in range(30)
            for j in range(30)
            if i != j and (gold[i] - gold[j]) * (pred[i] - pred[j]) > 0
        ) / (30 * 29) * 100.0
        ok = ok and tad(gold, pred) == brute
    ok = ok and tad([1, 2, 3, 4, 5], [1, 2, 3, 4, 5]) == 100.0
    _report("TAD equals O(n^2) brute-force pair counter", ok)


def test_cv_partition_law_and_report_determinism():
    partitions = fold_partitions(103, folds=5, repetitions=5, seed=11)
    ok = len(partitions) == 5 and all(len(p) == 5 for p in partitions)
    assignments = 0
    for parts in partitions:
        seen = sorted(i for fold in parts for i in fold)
        ok = ok and seen == list(range(103))
        assignments += sum(len(fold) for fold in parts)
    ok = ok and assignments == 103 * 5

    rng = np.random.default_rng(0)
    X = rng.normal(size=(103, 3))
    y = X @ np.array([1.0, 2.0, -1.0]) + rng.normal(scale=0.2, size=103)
    rows = make_rows(X, y)
    pipeline = PipelineConfig(subset=("x0", "x1", "x2"))

    def render(result):
        return json.dumps(
            {
                "mean_rmse": repr(result.mean_rmse),
                "mean_r": repr(result.mean_r),
                "folds": [
                    [f.repetition, f.fold, list(f.test_indices), repr(f.rmse), repr(f.r)]
                    for f in result.folds
                ],
            }
        ).encode()

    first = render(cross_validate(rows, pipeline, 5, 5, seed=42))
    second = render(cross_validate(rows, pipeline, 5, 5, seed=42))
    ok = ok and first == second
    _report("CV partition law + byte-identical aggregate report", ok)


def test_feature_invariants():
    rng = np.random.default_rng(99)
    alphabet = [f"w{i}" for i in range(400)]
    gept_map = {w: GEPT_LEVELS[1 + rng.integers(3)] for w in alphabet if rng.random() < 0.7}
    vq_map = {w: VQ_LEVELS[1 + rng.integers(14)] for w in alphabet if rng.random() < 0.7}
    gept = GradedLexicon("gept", GEPT_LEVELS, gept_map)
    vq = GradedLexicon("vq", VQ_LEVELS, vq_map)
    ok = True
    for _ in range(1000):
        words = rng.choice(alphabet, size=rng.integers(1, 40))
        doc = tokenize(" ".join(words))
        ok = ok and abs(sum(aoa_proportions(doc, gept).values()) - 1.0) <= 1e-12
        ok = ok and abs(sum(aoa_proportions(doc, vq).values()) - 1.0) <= 1e-12

    fixtures = [
        ("(S (NP (PRP I)) (VP (VBP run)))", (3, 1, 1, 0, 0)),
        ("(NP (DT the) (NN cat))", (2, 1, 0, 0, 0)),
        ("(S (NP (NN dog)) (VP (VBD ran) (PP (IN to) (NP (NN town)))))", (5, 2, 1, 0, 1)),
        (
            "(S (SBAR (IN because) (S (NP (PRP I)) (VP (VBP left))))"
            " (NP (PRP she)) (VP (VBD cried)))",
            (5, 2, 2, 1, 0),
        ),
        ("(X (Y a))", (2, 0, 0, 0, 0)),
        ("(NN cat)", (1, 0, 0, 0, 0)),
        (
            "(S (NP (NP (DT the) (NN man)) (PP (IN in) (NP (DT the) (NN hat))))"
            " (VP (VBZ smiles)))",
            (5, 3, 1, 0, 1),
        ),
        (
            "(S (NP (NNP Alice)) (VP (VBD was) (VP (VBN seen)"
            " (PP (IN by) (NP (NNP Ben))))))",
            (6, 2, 2, 0, 1),
        ),
        (
            "(S (NP (PRP they)) (VP (VBP want) (VP (TO to)"
            " (VP (VB win) (NP (DT the) (NN game))))))",
            (6, 2, 3, 0, 0),
        ),
        (
            "(S (NP (NN rain)) (VP (VBZ falls)) (SBAR (IN when)"
            " (S (NP (NN wind)) (VP (VBZ blows) (PP (IN from) (NP (NN north)))))))",
            (7, 3, 2, 1, 1),
        ),
    ]
    for text, (height, np_count, vp_count, sbar_count, pp_count) in fixtures:
        feats = parsing_features([parse_bracket_tree(text)], 1)
        ok = ok and feats["tree_height"] == height
        ok = ok and feats["np"] == np_count
        ok = ok and feats["vp"] == vp_count
        ok = ok and feats["sbar"] == sbar_count
        ok = ok and feats["pp"] == pp_count

    def random_tree(depth: int) -> ParseTree:
        labels = ["S", "NP", "VP", "PP", "NN", "VB", "X"]
        if depth == 0 or rng.random() < 0.35:
            return ParseTree(labels[rng.integers(len(labels))], (leaf("w"),))
        children = tuple(random_tree(depth - 1) for _ in range(rng.integers(1, 4)))
        return ParseTree(labels[rng.integers(len(labels))], children)

    for _ in range(200):
        tree = random_tree(4)
        for a in ("NP", "VP", "S"):
            for b in ("NN", "NP", "VP"):
                narrow = {id(n) for n in CompiledPattern(f"{a} < {b}").matches(tree)}
                wide = {id(n) for n in CompiledPattern(f"{a} << {b}").matches(tree)}
                ok = ok and narrow <= wide
    _report("feature invariants (AOA sums, parsing hand counts, << superset of <)", ok)


def test_end_to_end_sanity(tmp_path):
    started = time.time()
    corpus_dir = tmp_path / "corpus"
    manifest_path = generate_corpus(corpus_dir, SynthConfig(docs_per_grade=40, seed=20_24))
    manifest = load_manifest(manifest_path)
    resources = load_resources(dict(manifest.resource_paths))
    docs = load_corpus(
        manifest,
        stop_words=resources.stop_words,
        pronouns=resources.pronouns,
        abbreviations=resources.abbreviations,
    )
    vectors = [featurize(d, resources) for d in docs]
    registry = default_registry()
    comparison = comparison_report(
        docs, vectors, registry, pron_dict=resources.pron_dict,
        folds=5, repetitions=5, seed=7,
    )
    by_name = {row.estimator: row for row in comparison}
    proposed = by_name["proposed"].rmse_continuous
    classics = {
        name: by_name[name].rmse_levels
        for name in ("fleschReadingEase", "fleschKincaidGrade", "colemanLiau")
    }
    beats_all = all(proposed < value for value in classics.values())

    out = tmp_path / "eval"
    code = main([
        "evaluate",
        "--manifest", str(manifest_path),
        "--out", str(out),
        "--reps", "1",
        "--seed", "7",
    ])
    shapes_ok = (
        code == 0
        and len((out / "per_category.csv").read_text().splitlines()) == 10
        and len((out / "per_feature.csv").read_text().splitlines()) == 48
        and (out / "selection_trace.csv").exists()
        and len((out / "comparison.csv").read_text().splitlines()) >= 5
    )
    elapsed = time.time() - started
    detail = (
        f"proposed CV RMSE {proposed:.3f} vs classics "
        + ", ".join(f"{k}={v:.3f}" for k, v in classics.items())
        + f"; {elapsed:.0f}s"
    )
    _report(
        "end-to-end sanity (proposed beats thresholded classics; 4 report shapes)",
        beats_all and shapes_ok and elapsed < 120.0,
        detail,
    )


def test_cli_determinism(tmp_path):
    corpus_dir = tmp_path / "corpus"
    manifest_path = generate_corpus(corpus_dir, SynthConfig(docs_per_grade=6, seed=3))
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / f"feat_{run}"
        assert main(["featurize", "--manifest", str(manifest_path), "--out", str(out)]) == 0
        outputs.append((out / "features.csv").read_bytes())
    featurize_ok = outputs[0] == outputs[1]
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / f"sel_{run}"
        assert main(["select", "--manifest", str(manifest_path), "--out", str(out)]) == 0
        outputs.append(
            (out / "model.json").read_bytes() + (out / "selection_trace.csv").read_bytes()
        )
    select_ok = outputs[0] == outputs[1]
    _report("determinism: featurize and select reruns byte-identical",
            featurize_ok and select_ok)
