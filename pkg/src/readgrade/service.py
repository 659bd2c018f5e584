"""Scoring HTTP service backing the authoring UI.

Endpoints: POST /score, GET /model, GET /health. Handlers are stateless and
read from an immutable snapshot (model + resources + optional parser); a
reload swaps the snapshot atomically.

Tree-dependent features are computed only when an external constituency
parser is configured (a subprocess speaking a line protocol: one sentence of
space-joined tokens in, one bracketed tree out). Without one, those features
are masked and reported in the response warnings.
"""

from __future__ import annotations

import shlex
import subprocess
import threading
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .corpus import Document, load_manifest, tokenize
from .errors import EmptyDocument, MissingFeature, TreeSyntaxError
from .features import ResourceBundle, default_registry, featurize, load_resources, registry_hash
from .model import RegressionModel, classify, predict
from .syntax import parse_bracket_tree

MAX_TEXT_CHARS = 200_000


class SubprocessParser:
    """Line-oriented bridge to an external constituency parser."""

    def __init__(self, cmd: str):
        self._process = subprocess.Popen(
            shlex.split(cmd),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        self._lock = threading.Lock()

    def parse(self, sentence: str):
        with self._lock:
            self._process.stdin.write(sentence.replace("\n", " ") + "\n")
            self._process.stdin.flush()
            line = self._process.stdout.readline()
        if not line.strip():
            raise TreeSyntaxError("parser returned an empty line", 0)
        return parse_bracket_tree(line.strip())

    def close(self) -> None:
        if self._process.poll() is None:
            self._process.terminate()


@dataclass(frozen=True)
class Snapshot:
    model: RegressionModel
    resources: ResourceBundle
    model_id: str
    parser: Optional[SubprocessParser] = None


class ScoreRequest(BaseModel):
    text: str
    modelId: Optional[str] = None


class FeatureContribution(BaseModel):
    name: str
    value: float
    coefficient: float
    contribution: float


class ScoreResponse(BaseModel):
    score: float
    level: Optional[int]
    features: list[FeatureContribution]
    warnings: list[str]


def _build_snapshot(
    model_path: str | Path,
    resources_manifest: str | Path,
    parser_cmd: Optional[str],
) -> Snapshot:
    model = RegressionModel.load(model_path)
    manifest = load_manifest(resources_manifest)
    resources = load_resources(dict(manifest.resource_paths))
    model_id = model.training_meta.get("registry_hash") or registry_hash(default_registry())
    parser = SubprocessParser(parser_cmd) if parser_cmd else None
    return Snapshot(model=model, resources=resources, model_id=model_id, parser=parser)


def _document_for(text: str, snapshot: Snapshot) -> tuple[Document, list[str]]:
    warnings = []
    resources = snapshot.resources
    doc = tokenize(
        text,
        resources.stop_words,
        pronouns=resources.pronouns,
        abbreviations=resources.abbreviations,
        doc_id="request",
    )
    if snapshot.parser is not None:
        trees = tuple(
            snapshot.parser.parse(" ".join(t.surface for t in sentence.tokens))
            for sentence in doc.sentences
        )
        doc = replace(doc, trees=trees, missing_annotations=frozenset())
    else:
        warnings.append("no parser configured: parsing and grammar features masked")
    warnings.append("coreference chains are heuristic (no sidecar)")
    return doc, warnings


def create_app(
    model_path: str | Path,
    resources_manifest: str | Path,
    parser_cmd: Optional[str] = None,
    max_chars: int = MAX_TEXT_CHARS,
) -> FastAPI:
    app = FastAPI(title="readgrade scoring service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.snapshot = _build_snapshot(model_path, resources_manifest, parser_cmd)

    def reload_snapshot() -> None:
        app.state.snapshot = _build_snapshot(model_path, resources_manifest, parser_cmd)

    app.state.reload_snapshot = reload_snapshot

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/model")
    def model_info() -> dict:
        snapshot: Snapshot = app.state.snapshot
        model = snapshot.model
        return {
            "modelId": snapshot.model_id,
            "subset": list(model.feature_subset),
            "intercept": model.intercept,
            "coefficients": model.coefficients,
            "levels": list(model.thresholds.levels) if model.thresholds else [],
            "trainingMeta": model.training_meta,
            "capabilities": {"parser": snapshot.parser is not None},
        }

    @app.post("/score", response_model=ScoreResponse)
    def score(request: ScoreRequest) -> ScoreResponse:
        snapshot: Snapshot = app.state.snapshot
        if len(request.text) > max_chars:
            raise HTTPException(
                status_code=413, detail=f"text exceeds {max_chars} characters"
            )
        if request.modelId is not None and request.modelId != snapshot.model_id:
            raise HTTPException(
                status_code=422,
                detail=f"unknown model {request.modelId!r}; loaded model is {snapshot.model_id!r}",
            )
        try:
            doc, warnings = _document_for(request.text, snapshot)
        except EmptyDocument:
            raise HTTPException(status_code=422, detail="text contains no tokens")
        vector = featurize(doc, snapshot.resources)
        model = snapshot.model
        try:
            value = predict(model, vector)
        except MissingFeature as exc:
            raise HTTPException(
                status_code=422,
                detail={
                    "error": "the loaded model needs features this request cannot provide",
                    "missing": exc.features,
                    "warnings": warnings,
                },
            )
        level = classify(value, model.thresholds) if model.thresholds else None
        contributions = [
            FeatureContribution(
                name=name,
                value=vector.value(name),
                coefficient=coefficient,
                contribution=coefficient * vector.value(name),
            )
            for name, coefficient in model.coefficients.items()
        ]
        return ScoreResponse(
            score=value, level=level, features=contributions, warnings=warnings
        )

    return app
