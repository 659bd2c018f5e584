"""Feature registry, resource bundle, per-document assembly, and CSV export.

The default registry is frozen at 47 entries; its order (and the hash over
it) is serialized with every model so coefficients can never be misaligned.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import coref as coref_mod
from . import corpus as corpus_mod
from . import lexicon as lexicon_mod
from . import syntax as syntax_mod
from .corpus import Document
from .errors import IoError, LoadError
from .lexicon import FrequencyTable, GradedLexicon, SynsetTable
from .syntax import GrammarPattern

CATEGORIES = ("baseline", "aoa", "frequency", "parsing", "grammar", "semantic", "coreference")


@dataclass(frozen=True)
class FeatureDescriptor:
    name: str
    category: str
    required_annotation: Optional[str] = None


def default_registry() -> tuple[FeatureDescriptor, ...]:
    """The canonical 47-feature registry, in serialization order."""
    entries: list[FeatureDescriptor] = []
    for name in ("word_number", "sentence_length", "syllables"):
        entries.append(FeatureDescriptor(name, "baseline"))
    for name in lexicon_mod.GEPT_LEVELS:
        entries.append(FeatureDescriptor(name, "aoa"))
    for name in lexicon_mod.VQ_LEVELS:
        entries.append(FeatureDescriptor(name, "aoa"))
    entries.append(FeatureDescriptor("bnc_frequency", "frequency"))
    entries.append(FeatureDescriptor("google_search_count", "frequency"))
    for name in ("tree_height", "np", "vp", "sbar", "pp"):
        entries.append(FeatureDescriptor(name, "parsing", required_annotation="tree"))
    for name in syntax_mod.GRAMMAR_FEATURES:
        entries.append(FeatureDescriptor(name, "grammar", required_annotation="tree"))
    for name in lexicon_mod.WORDNET_FEATURES:
        entries.append(FeatureDescriptor(name, "semantic"))
    for name in coref_mod.COREF_FEATURES:
        entries.append(FeatureDescriptor(name, "coreference"))
    assert len(entries) == 47
    return tuple(entries)


def registry_hash(registry: Sequence[FeatureDescriptor]) -> str:
    payload = ";".join(f"{d.name}:{d.category}" for d in registry)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def registry_names(registry: Sequence[FeatureDescriptor]) -> tuple[str, ...]:
    return tuple(d.name for d in registry)


@dataclass(frozen=True)
class FeatureConfig:
    sentence_length_log: bool = False
    grammar_per_100_words: bool = False
    strip_suffixes: bool = True


@dataclass(frozen=True)
class ResourceBundle:
    """Every loaded table the featurizer needs, immutable after load."""

    stop_words: frozenset[str] = frozenset()
    pronouns: frozenset[str] = frozenset()
    abbreviations: frozenset[str] = frozenset()
    pron_dict: Optional[dict] = None
    gept: Optional[GradedLexicon] = None
    vq: Optional[GradedLexicon] = None
    bnc: Optional[FrequencyTable] = None
    google: Optional[FrequencyTable] = None
    synsets: Optional[SynsetTable] = None
    patterns: tuple[GrammarPattern, ...] = ()
    lemmas: Optional[dict] = None
    config: FeatureConfig = field(default_factory=FeatureConfig)


def load_resources(
    paths: dict[str, Path], config: FeatureConfig = FeatureConfig()
) -> ResourceBundle:
    """Build a ResourceBundle from a manifest's ``resources`` path map.

    Recognized keys: stopwords, pronouns, abbreviations, prondict, gept, vq,
    bnc, google, synsets, patterns, lemmas. Every table is required except
    prondict and lemmas; missing optional keys simply disable their feature.
    """
    def need(key: str) -> Path:
        if key not in paths:
            raise LoadError(f"resources map lacks required key {key!r}")
        return paths[key]

    gept, _ = lexicon_mod.load_graded_lexicon(need("gept"), lexicon_mod.GEPT_LEVELS, "gept")
    vq, _ = lexicon_mod.load_graded_lexicon(need("vq"), lexicon_mod.VQ_LEVELS, "vq")
    return ResourceBundle(
        stop_words=corpus_mod.load_word_list(need("stopwords")),
        pronouns=corpus_mod.load_word_list(need("pronouns")),
        abbreviations=corpus_mod.load_abbreviations(need("abbreviations")),
        pron_dict=(
            corpus_mod.load_pron_dict(paths["prondict"]) if "prondict" in paths else None
        ),
        gept=gept,
        vq=vq,
        bnc=lexicon_mod.load_frequency_table(need("bnc"), "bnc"),
        google=lexicon_mod.load_frequency_table(need("google"), "google"),
        synsets=lexicon_mod.load_synset_table(need("synsets")),
        patterns=syntax_mod.load_patterns(need("patterns")),
        lemmas=(
            lexicon_mod.load_lemma_table(paths["lemmas"]) if "lemmas" in paths else None
        ),
        config=config,
    )


@dataclass(frozen=True)
class FeatureVector:
    doc_id: str
    names: tuple[str, ...]
    values: tuple[float, ...]
    missing: tuple[bool, ...]
    # The regression target: an integer grade for real corpora, but any real
    # value is accepted so synthetic targets work through the same machinery.
    grade: Optional[float] = None
    heuristic_coref: bool = False

    def __post_init__(self):
        assert len(self.values) == len(self.names) == len(self.missing)

    def value(self, name: str) -> float:
        return self.values[self.names.index(name)]

    def is_missing(self, name: str) -> bool:
        return self.missing[self.names.index(name)]


def featurize(
    doc: Document,
    resources: ResourceBundle,
    registry: Optional[Sequence[FeatureDescriptor]] = None,
) -> FeatureVector:
    """Compute the full registry for one document.

    Features whose required annotation is absent get value 0 and a raised
    missing flag. Coreference features fall back to heuristic chains when no
    sidecar is attached; the vector carries the heuristic flag.
    """
    registry = tuple(registry) if registry is not None else default_registry()
    cfg = resources.config
    computed: dict[str, float] = {}

    computed.update(
        corpus_mod.baseline_features(
            doc, resources.pron_dict, sentence_length_log=cfg.sentence_length_log
        )
    )
    if resources.gept is not None:
        computed.update(lexicon_mod.aoa_proportions(doc, resources.gept, resources.lemmas))
    if resources.vq is not None:
        computed.update(lexicon_mod.aoa_proportions(doc, resources.vq, resources.lemmas))
    if resources.bnc is not None:
        computed["bnc_frequency"] = lexicon_mod.corpus_frequency_feature(doc, resources.bnc)
    if resources.google is not None:
        computed["google_search_count"] = lexicon_mod.search_count_feature(doc, resources.google)
    if resources.synsets is not None:
        computed.update(lexicon_mod.semantic_proportions(doc, resources.synsets))

    if doc.trees is not None:
        computed.update(
            syntax_mod.parsing_features(
                doc.trees, doc.sentence_count, strip_suffixes=cfg.strip_suffixes
            )
        )
        computed.update(
            syntax_mod.grammar_features(
                doc.trees,
                resources.patterns,
                doc.sentence_count,
                per_100_words=cfg.grammar_per_100_words,
                token_count=doc.token_count,
            )
        )

    chains = doc.coref_chains
    heuristic = doc.coref_chains is None
    if heuristic:
        chains = coref_mod.heuristic_chains(doc)
    computed.update(coref_mod.coref_features(doc, chains))

    values = []
    missing = []
    for descriptor in registry:
        if descriptor.name in computed:
            values.append(float(computed[descriptor.name]))
            missing.append(False)
        else:
            values.append(0.0)
            missing.append(True)
    return FeatureVector(
        doc_id=doc.id,
        names=registry_names(registry),
        values=tuple(values),
        missing=tuple(missing),
        grade=doc.grade,
        heuristic_coref=heuristic,
    )


def export_table(vectors: Sequence[FeatureVector], path: Path | str) -> tuple[int, int]:
    """Write feature vectors as CSV (header + grade column); missing cells
    are emitted empty. Returns (rows, cols). Floats use shortest round-trip
    formatting, so re-importing reproduces the vectors bit for bit."""
    if vectors:
        names = vectors[0].names
        for v in vectors:
            if v.names != names:
                raise IoError("feature vectors do not share one registry")
    else:
        names = registry_names(default_registry())
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(("doc_id", *names, "grade"))
            for v in vectors:
                cells = [
                    "" if flag else repr(value)
                    for value, flag in zip(v.values, v.missing)
                ]
                writer.writerow((v.doc_id, *cells, "" if v.grade is None else v.grade))
    except OSError as exc:
        raise IoError(f"cannot write feature table {path}: {exc}") from exc
    return (len(vectors), len(names) + 1)


def import_table(path: Path | str) -> list[FeatureVector]:
    """Read back a table written by export_table."""
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader)
            names = tuple(header[1:-1])
            rows = []
            for record in reader:
                doc_id, cells, grade = record[0], record[1:-1], record[-1]
                if grade == "":
                    grade_value = None
                else:
                    try:
                        grade_value = int(grade)
                    except ValueError:
                        grade_value = float(grade)
                rows.append(
                    FeatureVector(
                        doc_id=doc_id,
                        names=names,
                        values=tuple(0.0 if c == "" else float(c) for c in cells),
                        missing=tuple(c == "" for c in cells),
                        grade=grade_value,
                    )
                )
    except OSError as exc:
        raise LoadError(f"cannot read feature table {path}: {exc}") from exc
    return rows
