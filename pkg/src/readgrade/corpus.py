"""Document model, tokenization, syllable counting, and corpus ingestion.

Documents are immutable after construction and safe to share across
parallel workers; tokenization is pure.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    AnnotationMismatch,
    EmptyDocument,
    LoadError,
    ManifestError,
    ReadgradeError,
)

_WORD_RE = re.compile(r"\w+(?:['’-]\w+)*", re.UNICODE)
_BOUNDARY_RE = re.compile(r"[.!?]\s+(?=[A-Z])")
_VOWELS = set("aeiouy")


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    is_stop_word: bool
    is_pronoun: bool
    is_proper_noun: bool
    char_start: int
    char_end: int

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "normalized": self.normalized,
            "stop": self.is_stop_word,
            "pronoun": self.is_pronoun,
            "proper": self.is_proper_noun,
            "start": self.char_start,
            "end": self.char_end,
        }


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    index: int

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    """A tokenized, sentence-split document.

    ``token_count`` counts every token including stop words; ``distinct_words``
    is the set of case-folded forms (its size is the ``m`` used by the
    proportion features).
    """

    id: str
    sentences: tuple[Sentence, ...]
    grade: Optional[int] = None
    trees: Optional[tuple] = None  # tuple[ParseTree, ...] when a sidecar is attached
    coref_chains: Optional[tuple] = None  # tuple[CorefChain, ...]
    heuristic_coref: bool = False
    missing_annotations: frozenset[str] = frozenset()

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    @property
    def sentence_count(self) -> int:
        return len(self.sentences)

    @property
    def distinct_words(self) -> frozenset[str]:
        return frozenset(t.normalized for s in self.sentences for t in s.tokens)

    def tokens(self) -> Iterable[Token]:
        for sentence in self.sentences:
            yield from sentence.tokens

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "grade": self.grade,
            "sentences": [[t.to_dict() for t in s.tokens] for s in self.sentences],
            "missing_annotations": sorted(self.missing_annotations),
            "heuristic_coref": self.heuristic_coref,
        }


def _split_sentences(text: str, abbreviations: frozenset[str]) -> list[tuple[int, int]]:
    """Return (start, end) character spans of sentences.

    A boundary is terminal punctuation followed by whitespace and a capital
    letter, unless the word ending at a period is a known abbreviation
    (abbreviation entries carry their trailing period, e.g. ``Dr.``).
    """
    spans = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        if text[m.start()] == ".":
            prefix = text[: m.start() + 1]
            word = re.search(r"(\S+)$", prefix)
            if word and word.group(1) in abbreviations:
                continue
        spans.append((start, m.start() + 1))
        start = m.end()
    if text[start:].strip():
        spans.append((start, len(text)))
    return spans


def tokenize(
    raw_text: str,
    stop_words: frozenset[str] = frozenset(),
    *,
    pronouns: frozenset[str] = frozenset(),
    abbreviations: frozenset[str] = frozenset(),
    doc_id: str = "",
) -> Document:
    """Tokenize raw text into an ungraded Document.

    Deterministic: sentences split on ``. ! ?`` + whitespace + capital with the
    abbreviation list suppressing splits; tokens are maximal word-character
    runs (internal apostrophes/hyphens kept); the proper-noun flag is the
    capitalization heuristic (capitalized, not sentence initial) and may later
    be overridden by a tree sidecar.

    Raises EmptyDocument if nothing survives tokenization.
    """
    sentences = []
    for span_start, span_end in _split_sentences(raw_text, abbreviations):
        tokens = []
        for m in _WORD_RE.finditer(raw_text, span_start, span_end):
            normalized = m.group().casefold()
            tokens.append(
                Token(
                    surface=m.group(),
                    normalized=normalized,
                    is_stop_word=normalized in stop_words,
                    is_pronoun=normalized in pronouns,
                    is_proper_noun=bool(tokens) and m.group()[0].isupper(),
                    char_start=m.start(),
                    char_end=m.end(),
                )
            )
        if tokens:
            sentences.append(Sentence(tokens=tuple(tokens), index=len(sentences)))
    if not sentences:
        raise EmptyDocument(f"no tokens in document {doc_id!r}")
    return Document(id=doc_id, sentences=tuple(sentences))


def count_syllables(word: str, pron_dict: Optional[Mapping[str, Sequence[str]]] = None) -> int:
    """Count syllables in a word; never fails, result is always >= 1.

    A pronunciation lexicon entry wins: the count of vowel-bearing phonemes
    (phonemes carrying a stress digit, CMU style). Otherwise the heuristic:
    maximal vowel groups (a e i o u y, y not counted word-initially), minus
    one for a terminal silent 'e' unless that would reach zero.
    """
    key = word.strip().casefold()
    if pron_dict is not None:
        phones = pron_dict.get(key)
        if phones:
            n = sum(1 for p in phones if any(c.isdigit() for c in p))
            if n >= 1:
                return n
    letters = [c for c in key if c.isalpha()]
    if not letters:
        return 1
    groups = 0
    prev_vowel = False
    for i, c in enumerate(letters):
        is_vowel = c in _VOWELS and not (c == "y" and i == 0)
        if is_vowel and not prev_vowel:
            groups += 1
        prev_vowel = is_vowel
    if groups > 1 and letters[-1] == "e" and letters[-2] not in _VOWELS:
        groups -= 1
    return max(groups, 1)


def baseline_features(
    doc: Document,
    pron_dict: Optional[Mapping[str, Sequence[str]]] = None,
    *,
    sentence_length_log: bool = False,
) -> dict[str, float]:
    """Length, sentence-length, and syllable features of a document.

    word_number is the natural log of the token count. sentence_length is the
    raw mean tokens per sentence by default; with ``sentence_length_log`` it is
    word_number / n instead (the literal log-over-n variant). syllables is the
    mean syllable count over the distinct word forms.
    """
    size = doc.token_count
    n = doc.sentence_count
    distinct = sorted(doc.distinct_words)
    word_number = math.log(size)
    return {
        "word_number": word_number,
        "sentence_length": (word_number / n) if sentence_length_log else (size / n),
        "syllables": sum(count_syllables(w, pron_dict) for w in distinct) / len(distinct),
    }


def load_word_list(path: Path | str) -> frozenset[str]:
    """Load a one-entry-per-line word list, case-folded, comments (#) skipped."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read word list {path}: {exc}") from exc
    return frozenset(
        line.strip().casefold()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


def load_abbreviations(path: Path | str) -> frozenset[str]:
    """Abbreviations keep their case and trailing period (``Dr.``)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read abbreviation list {path}: {exc}") from exc
    return frozenset(
        line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")
    )


def load_pron_dict(path: Path | str) -> dict[str, tuple[str, ...]]:
    """Load a ``word<TAB>PH ON EMES`` pronunciation table."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read pronunciation table {path}: {exc}") from exc
    table: dict[str, tuple[str, ...]] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        word, _, phones = line.partition("\t")
        table[word.strip().casefold()] = tuple(phones.split())
    return table


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    grade: int
    tree_path: Optional[Path] = None
    coref_path: Optional[Path] = None


@dataclass(frozen=True)
class CorpusManifest:
    """Parsed corpus manifest: document entries plus resource file locations."""

    entries: tuple[ManifestEntry, ...]
    resource_paths: Mapping[str, Path]
    base_dir: Path


def load_manifest(path: Path | str) -> CorpusManifest:
    """Parse a manifest JSON file.

    Schema: ``{"documents": [{"path", "grade", "tree"?, "coref"?}, ...],
    "resources": {"stopwords": ..., "gept": ..., ...}}``. All paths resolve
    relative to the manifest's directory.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise LoadError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    base = path.parent
    entries = []
    for i, item in enumerate(payload.get("documents", [])):
        if "path" not in item or "grade" not in item:
            raise ManifestError(f"manifest entry {i} lacks path or grade")
        grade = item["grade"]
        if not isinstance(grade, int) or isinstance(grade, bool):
            raise ManifestError(f"manifest entry {i}: grade {grade!r} is not an integer")
        entries.append(
            ManifestEntry(
                path=base / item["path"],
                grade=grade,
                tree_path=(base / item["tree"]) if item.get("tree") else None,
                coref_path=(base / item["coref"]) if item.get("coref") else None,
            )
        )
    resources = {key: base / value for key, value in payload.get("resources", {}).items()}
    return CorpusManifest(entries=tuple(entries), resource_paths=resources, base_dir=base)


def _attach_tree_flags(doc: Document, trees: tuple) -> Document:
    """Override proper-noun flags from NNP/NNPS preterminals where the tree
    yield aligns with the sentence's tokens; misaligned sentences keep the
    capitalization heuristic."""
    new_sentences = []
    for sentence, tree in zip(doc.sentences, trees):
        preterminals = tree.preterminals()
        if len(preterminals) != len(sentence.tokens):
            new_sentences.append(sentence)
            continue
        tokens = tuple(
            Token(
                surface=t.surface,
                normalized=t.normalized,
                is_stop_word=t.is_stop_word,
                is_pronoun=t.is_pronoun,
                is_proper_noun=pre.label in ("NNP", "NNPS"),
                char_start=t.char_start,
                char_end=t.char_end,
            )
            for t, pre in zip(sentence.tokens, preterminals)
        )
        new_sentences.append(Sentence(tokens=tokens, index=sentence.index))
    return Document(
        id=doc.id,
        sentences=tuple(new_sentences),
        grade=doc.grade,
        trees=trees,
        coref_chains=doc.coref_chains,
        heuristic_coref=doc.heuristic_coref,
        missing_annotations=doc.missing_annotations,
    )


def load_document(
    entry: ManifestEntry,
    *,
    stop_words: frozenset[str] = frozenset(),
    pronouns: frozenset[str] = frozenset(),
    abbreviations: frozenset[str] = frozenset(),
) -> Document:
    """Load one manifest entry: text, grade, and any tree/coref sidecars."""
    from .coref import load_coref_sidecar
    from .syntax import load_tree_sidecar

    try:
        raw = entry.path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read document {entry.path}: {exc}") from exc
    doc = tokenize(
        raw,
        stop_words,
        pronouns=pronouns,
        abbreviations=abbreviations,
        doc_id=entry.path.stem,
    )
    missing = set()
    trees = None
    if entry.tree_path is not None:
        try:
            trees = load_tree_sidecar(entry.tree_path)
        except ReadgradeError as exc:
            raise LoadError(
                f"document {doc.id}: bad tree sidecar {entry.tree_path}: {exc}"
            ) from exc
        if len(trees) != doc.sentence_count:
            raise AnnotationMismatch(
                f"{doc.id}: {len(trees)} trees for {doc.sentence_count} sentences"
            )
    else:
        missing.add("tree")
    doc = Document(
        id=doc.id,
        sentences=doc.sentences,
        grade=entry.grade,
        trees=trees,
        missing_annotations=frozenset(missing),
    )
    if trees is not None:
        doc = _attach_tree_flags(doc, trees)
    if entry.coref_path is not None:
        chains = load_coref_sidecar(entry.coref_path, doc)
        doc = Document(
            id=doc.id,
            sentences=doc.sentences,
            grade=doc.grade,
            trees=doc.trees,
            coref_chains=chains,
            missing_annotations=doc.missing_annotations,
        )
    else:
        doc = Document(
            id=doc.id,
            sentences=doc.sentences,
            grade=doc.grade,
            trees=doc.trees,
            coref_chains=None,
            heuristic_coref=True,
            missing_annotations=doc.missing_annotations | {"coref"},
        )
    return doc


def load_corpus(
    manifest: CorpusManifest,
    *,
    stop_words: frozenset[str] = frozenset(),
    pronouns: frozenset[str] = frozenset(),
    abbreviations: frozenset[str] = frozenset(),
) -> list[Document]:
    """Load every manifest entry as a graded Document with attached sidecars."""
    return [
        load_document(
            entry,
            stop_words=stop_words,
            pronouns=pronouns,
            abbreviations=abbreviations,
        )
        for entry in manifest.entries
    ]
