"""Command-line entry point: featurize, select, evaluate, score, compare,
serve.

Every command echoes its effective configuration into the output directory
and is byte-reproducible for a fixed configuration and seed. Data goes to
files or stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

from .corpus import load_corpus, load_document, load_manifest, ManifestEntry
from .errors import ReadgradeError
from .features import (
    FeatureConfig,
    default_registry,
    export_table,
    featurize,
    load_resources,
    registry_hash,
    registry_names,
)
from .model import (
    RegressionModel,
    fit_ols,
    fit_thresholds,
    forward_select,
    predict,
    select_by_bic,
    classify,
)
from .reports import (
    category_report,
    comparison_report,
    markdown_table,
    per_feature_report,
    selection_report,
    write_csv,
)


@dataclass
class RunConfig:
    manifest: str
    out: str
    seed: int = 0
    folds: int = 5
    repetitions: int = 5
    alpha_enter: float = 0.05
    jobs: int = 1
    sentence_length_log: bool = False
    grammar_per_100_words: bool = False

    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(
            sentence_length_log=self.sentence_length_log,
            grammar_per_100_words=self.grammar_per_100_words,
        )

    def echo(self, out_dir: Path) -> None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "run_config.json").write_text(
            json.dumps(asdict(self), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


def _load_all(config: RunConfig):
    manifest = load_manifest(config.manifest)
    resources = load_resources(dict(manifest.resource_paths), config.feature_config())
    docs = load_corpus(
        manifest,
        stop_words=resources.stop_words,
        pronouns=resources.pronouns,
        abbreviations=resources.abbreviations,
    )
    return manifest, resources, docs


def _featurize_all(docs, resources, jobs: int):
    if jobs <= 1:
        return [featurize(doc, resources) for doc in docs]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda d: featurize(d, resources), docs))


def cmd_featurize(config: RunConfig) -> int:
    out_dir = Path(config.out)
    config.echo(out_dir)
    _, resources, docs = _load_all(config)
    vectors = _featurize_all(docs, resources, config.jobs)
    rows, cols = export_table(vectors, out_dir / "features.csv")
    missing_tree = sum(1 for d in docs if "tree" in d.missing_annotations)
    heuristic = sum(1 for v in vectors if v.heuristic_coref)
    provenance = {
        "documents": len(docs),
        "columns": cols,
        "registry_hash": registry_hash(default_registry()),
        "missing_tree_fraction": missing_tree / len(docs) if docs else 0.0,
        "heuristic_coref_fraction": heuristic / len(docs) if docs else 0.0,
    }
    (out_dir / "provenance.json").write_text(
        json.dumps(provenance, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote {rows} rows x {cols} columns to {out_dir / 'features.csv'}")
    return 0


TRACE_HEADER = (
    "model", "added_feature", "rmse", "r", "bic", "rss", "n_rows",
    "f_statistic", "p_value", "accepted", "chosen",
)


def cmd_select(config: RunConfig) -> int:
    out_dir = Path(config.out)
    config.echo(out_dir)
    _, resources, docs = _load_all(config)
    vectors = _featurize_all(docs, resources, config.jobs)
    registry = default_registry()
    trace = forward_select(vectors, registry_names(registry), config.alpha_enter)
    chosen_index = select_by_bic(trace)
    subset = trace.accepted_subset(chosen_index)
    model = fit_ols(
        vectors, subset, meta={"registry_hash": registry_hash(registry), "seed": config.seed}
    )
    usable = [v for v in vectors if not any(v.missing[v.names.index(f)] for f in subset)]
    pairs = [(int(v.grade), predict(model, v)) for v in usable]
    thresholds = fit_thresholds(pairs, sorted({g for g, _ in pairs}))
    model = RegressionModel(
        intercept=model.intercept,
        coefficients=model.coefficients,
        feature_subset=model.feature_subset,
        training_meta=model.training_meta,
        thresholds=thresholds,
        selection_trace=trace,
    )
    model.save(out_dir / "model.json")
    report = selection_report(trace, chosen_index, vectors, registry)
    write_csv(out_dir / "selection_trace.csv", TRACE_HEADER, report)
    print(f"chosen subset: {', '.join(subset)}")
    print(f"model written to {out_dir / 'model.json'}")
    return 0


CATEGORY_HEADER = ("category", "features", "rmse", "r", "dropped")
FEATURE_HEADER = (
    "rank", "category", "name", "slope", "intercept",
    "rmse_fit", "r_fit", "rmse_cv", "r_cv",
)
COMPARISON_HEADER = ("estimator", "rmse", "rmse_continuous", "r", "accuracy", "tad")


def _run_comparison(config: RunConfig, docs, resources, vectors):
    registry = default_registry()
    return comparison_report(
        docs,
        vectors,
        registry,
        pron_dict=resources.pron_dict,
        folds=config.folds,
        repetitions=config.repetitions,
        seed=config.seed,
        alpha_enter=config.alpha_enter,
    )


def cmd_evaluate(config: RunConfig) -> int:
    out_dir = Path(config.out)
    config.echo(out_dir)
    _, resources, docs = _load_all(config)
    vectors = _featurize_all(docs, resources, config.jobs)
    registry = default_registry()
    categories = category_report(
        vectors, registry, config.folds, config.repetitions, config.seed
    )
    features_rows = per_feature_report(
        vectors, registry, config.folds, config.repetitions, config.seed
    )
    trace = forward_select(vectors, registry_names(registry), config.alpha_enter)
    chosen_index = select_by_bic(trace)
    trace_rows = selection_report(trace, chosen_index, vectors, registry)
    comparison = [row.to_dict() for row in _run_comparison(config, docs, resources, vectors)]
    write_csv(out_dir / "per_category.csv", CATEGORY_HEADER, categories)
    write_csv(out_dir / "per_feature.csv", FEATURE_HEADER, features_rows)
    write_csv(out_dir / "selection_trace.csv", TRACE_HEADER, trace_rows)
    write_csv(out_dir / "comparison.csv", COMPARISON_HEADER, comparison)
    report_md = "\n".join(
        [
            "# Evaluation report",
            "",
            "## Feature categories (cross-validated)",
            markdown_table(CATEGORY_HEADER, categories),
            "## Individual features",
            markdown_table(FEATURE_HEADER, features_rows),
            "## Forward selection trace",
            markdown_table(TRACE_HEADER, trace_rows),
            "## Estimator comparison",
            markdown_table(COMPARISON_HEADER, comparison),
        ]
    )
    (out_dir / "report.md").write_text(report_md, encoding="utf-8")
    print(f"reports written to {out_dir}")
    return 0


def cmd_compare(config: RunConfig) -> int:
    out_dir = Path(config.out)
    config.echo(out_dir)
    _, resources, docs = _load_all(config)
    vectors = _featurize_all(docs, resources, config.jobs)
    comparison = [row.to_dict() for row in _run_comparison(config, docs, resources, vectors)]
    write_csv(out_dir / "comparison.csv", COMPARISON_HEADER, comparison)
    print(markdown_table(COMPARISON_HEADER, comparison))
    return 0


def score_document(
    model: RegressionModel,
    doc_path: Path,
    resources,
    tree_path: Optional[Path] = None,
    coref_path: Optional[Path] = None,
) -> dict:
    """Score one document file with a saved model; shared with the service."""
    entry = ManifestEntry(path=doc_path, grade=0, tree_path=tree_path, coref_path=coref_path)
    doc = load_document(
        entry,
        stop_words=resources.stop_words,
        pronouns=resources.pronouns,
        abbreviations=resources.abbreviations,
    )
    vector = featurize(doc, resources)
    score = predict(model, vector)
    breakdown = [
        {
            "name": name,
            "value": vector.value(name),
            "coefficient": coefficient,
            "contribution": coefficient * vector.value(name),
        }
        for name, coefficient in model.coefficients.items()
    ]
    warnings = []
    if vector.heuristic_coref:
        warnings.append("coreference chains are heuristic (no sidecar)")
    if "tree" in doc.missing_annotations:
        warnings.append("no tree sidecar: parsing and grammar features unavailable")
    result = {
        "score": score,
        "level": None,
        "features": breakdown,
        "warnings": warnings,
    }
    if model.thresholds is not None:
        result["level"] = classify(score, model.thresholds)
    return result


def cmd_score(args) -> int:
    model = RegressionModel.load(args.model)
    manifest = load_manifest(args.resources)
    resources = load_resources(dict(manifest.resource_paths))
    expected = registry_hash(default_registry())
    if model.training_meta.get("registry_hash") not in (None, expected):
        print(
            f"error: model registry hash {model.training_meta.get('registry_hash')} "
            f"does not match this build ({expected})",
            file=sys.stderr,
        )
        return 1
    result = score_document(
        model,
        Path(args.doc),
        resources,
        tree_path=Path(args.tree) if args.tree else None,
        coref_path=Path(args.coref) if args.coref else None,
    )
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    if not args.model or not args.resources:
        print("error: serve needs --model and --resources (or the READGRADE_MODEL"
              " and READGRADE_RESOURCES environment variables)", file=sys.stderr)
        return 1
    app = create_app(
        model_path=args.model,
        resources_manifest=args.resources,
        parser_cmd=args.parser_cmd,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--manifest", required=True, help="corpus manifest JSON")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--folds", type=int, default=5)
    parser.add_argument("--reps", type=int, default=5)
    parser.add_argument("--alpha-enter", type=float, default=0.05)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--sentence-length-log", action="store_true",
                        help="divide log word count (not raw count) by sentence count")
    parser.add_argument("--grammar-per-100-words", action="store_true",
                        help="normalize grammar matches per 100 words instead of per sentence")


def _run_config(args) -> RunConfig:
    return RunConfig(
        manifest=args.manifest,
        out=args.out,
        seed=args.seed,
        folds=args.folds,
        repetitions=args.reps,
        alpha_enter=args.alpha_enter,
        jobs=args.jobs,
        sentence_length_log=args.sentence_length_log,
        grammar_per_100_words=args.grammar_per_100_words,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="readgrade",
        description="Reading difficulty estimation for second-language readers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("featurize", "extract the 47-feature table for a corpus"),
        ("select", "run forward selection + BIC and save the chosen model"),
        ("evaluate", "produce category/feature/selection/comparison reports"),
        ("compare", "compare the proposed model against classic formulas"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_run_arguments(p)

    p_score = sub.add_parser("score", help="score a single document with a saved model")
    p_score.add_argument("--model", required=True)
    p_score.add_argument("--doc", required=True)
    p_score.add_argument("--resources", required=True, help="manifest JSON supplying resources")
    p_score.add_argument("--tree", default=None)
    p_score.add_argument("--coref", default=None)

    p_serve = sub.add_parser("serve", help="run the scoring HTTP service")
    p_serve.add_argument("--model", default=os.environ.get("READGRADE_MODEL"),
                         help="model JSON (or READGRADE_MODEL)")
    p_serve.add_argument("--resources", default=os.environ.get("READGRADE_RESOURCES"),
                         help="manifest JSON supplying resources (or READGRADE_RESOURCES)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=int(os.environ.get("READGRADE_PORT", "8000")))
    p_serve.add_argument("--parser-cmd", default=os.environ.get("READGRADE_PARSER_CMD"),
                         help="external constituency parser command (line protocol)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "featurize":
            return cmd_featurize(_run_config(args))
        if args.command == "select":
            return cmd_select(_run_config(args))
        if args.command == "evaluate":
            return cmd_evaluate(_run_config(args))
        if args.command == "compare":
            return cmd_compare(_run_config(args))
        if args.command == "score":
            return cmd_score(args)
        if args.command == "serve":
            return cmd_serve(args)
    except ReadgradeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
