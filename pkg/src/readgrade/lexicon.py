"""Word-difficulty and word-statistics tables and the features built on them.

All tables are immutable after load; lookups are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, TYPE_CHECKING

from .errors import DomainError, LoadError, SchemaError

if TYPE_CHECKING:
    from .corpus import Document

GEPT_LEVELS = ("gept0", "gept1", "gept2", "gept3")
VQ_LEVELS = ("vq0",) + tuple(f"vq{i}" for i in range(3, 17))


@dataclass(frozen=True)
class GradedLexicon:
    """word -> difficulty level, with the first listed level standing in for
    out-of-list words (gept0 / vq0)."""

    name: str
    levels: tuple[str, ...]
    map: Mapping[str, str]

    @property
    def out_of_list_level(self) -> str:
        return self.levels[0]

    def level_of(self, word: str) -> str:
        return self.map.get(word, self.out_of_list_level)


@dataclass(frozen=True)
class FrequencyTable:
    source: str
    map: Mapping[str, int]
    total_tokens: int

    @property
    def floor_value(self) -> float:
        """Feature value when no document word appears in the table."""
        return math.log(1.0 / self.total_tokens) - 1.0


@dataclass(frozen=True)
class SynsetTable:
    map: Mapping[str, int]


def load_graded_lexicon(
    path: Path | str, schema: tuple[str, ...], name: str = ""
) -> tuple[GradedLexicon, int]:
    """Load a ``word<TAB>level`` lexicon against a level schema.

    Duplicate entries resolve to the easiest (earliest-schema) level; the
    second return value counts such collisions.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read lexicon {path}: {exc}") from exc
    rank = {level: i for i, level in enumerate(schema)}
    table: dict[str, str] = {}
    warnings = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        word, sep, level = line.partition("\t")
        level = level.strip()
        if not sep or level not in rank:
            raise SchemaError(f"{path} line {lineno}: unknown level {level!r}")
        word = word.strip().casefold()
        if word in table:
            warnings += 1
            if rank[level] < rank[table[word]]:
                table[word] = level
        else:
            table[word] = level
    return GradedLexicon(name=name or path.stem, levels=schema, map=table), warnings


def load_frequency_table(path: Path | str, source: str = "") -> FrequencyTable:
    """Load ``word<TAB>count`` rows plus a ``#total<TAB>N`` header line.

    Duplicate words accumulate. Counts must be >= 1 and the declared total
    must cover the largest single count.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read frequency table {path}: {exc}") from exc
    total: Optional[int] = None
    counts: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#total"):
            _, _, value = line.partition("\t")
            total = int(value.strip())
            continue
        if line.startswith("#"):
            continue
        word, sep, value = line.partition("\t")
        if not sep:
            raise SchemaError(f"{path} line {lineno}: expected word<TAB>count")
        count = int(value.strip())
        if count < 1:
            raise SchemaError(f"{path} line {lineno}: count must be >= 1")
        word = word.strip().casefold()
        counts[word] = counts.get(word, 0) + count
    if total is None:
        raise SchemaError(f"{path}: missing '#total<TAB>N' header")
    if counts and total < max(counts.values()):
        raise SchemaError(f"{path}: total {total} below the largest count")
    return FrequencyTable(source=source or path.stem, map=counts, total_tokens=total)


def load_synset_table(path: Path | str) -> SynsetTable:
    """Load a ``word<TAB>synset-count`` table (counts >= 1)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read synset table {path}: {exc}") from exc
    table: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        word, sep, value = line.partition("\t")
        if not sep:
            raise SchemaError(f"{path} line {lineno}: expected word<TAB>count")
        count = int(value.strip())
        if count < 1:
            raise SchemaError(f"{path} line {lineno}: synset count must be >= 1")
        table[word.strip().casefold()] = count
    return SynsetTable(map=table)


def load_lemma_table(path: Path | str) -> dict[str, str]:
    """Load an optional ``surface<TAB>lemma`` table for lexicon lookups."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read lemma table {path}: {exc}") from exc
    table: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        surface, sep, lemma = line.partition("\t")
        if sep:
            table[surface.strip().casefold()] = lemma.strip().casefold()
    return table


def aoa_proportions(
    doc: "Document",
    lex: GradedLexicon,
    lemmas: Optional[Mapping[str, str]] = None,
) -> dict[str, float]:
    """Distinct-word proportions per level, out-of-list level included.

    Values sum to 1 over the lexicon's full level schema. When a lemma table
    is supplied, an out-of-list surface form falls back to its lemma's level;
    forms listed directly always win.
    """
    distinct = doc.distinct_words
    m = len(distinct)
    counts = dict.fromkeys(lex.levels, 0)
    for word in distinct:
        if word not in lex.map and lemmas:
            word = lemmas.get(word, word)
        counts[lex.level_of(word)] += 1
    return {level: counts[level] / m for level in lex.levels}


def _content_words(doc: "Document") -> set[str]:
    """Distinct non-stop-word forms (stop words are dropped only for the
    frequency features)."""
    return {t.normalized for t in doc.tokens() if not t.is_stop_word}


def corpus_frequency_feature(doc: "Document", table: FrequencyTable) -> float:
    """log of the mean relative corpus frequency over distinct content words.

    Absent words contribute zero; an all-absent document gets the table's
    floor value instead of log(0).
    """
    words = _content_words(doc)
    if not words:
        return table.floor_value
    total = sum(table.map.get(w, 0) / table.total_tokens for w in words)
    if total == 0.0:
        return table.floor_value
    return math.log(total / len(words))


def search_count_feature(doc: "Document", table: FrequencyTable) -> float:
    """log of the mean raw search-result count over distinct content words."""
    words = _content_words(doc)
    if not words:
        return table.floor_value
    total = sum(table.map.get(w, 0) for w in words)
    if total == 0:
        return table.floor_value
    return math.log(total / len(words))


WORDNET_FEATURES = tuple(f"wordnet{i}" for i in range(1, 8))


def synset_bucket(ws: int) -> int:
    """Bucket a synset count into 1..7: floor(sqrt(ws)) capped at 7."""
    if ws <= 0:
        raise DomainError(f"synset count must be positive, got {ws}")
    return min(math.isqrt(ws), 7)


def semantic_proportions(doc: "Document", table: SynsetTable) -> dict[str, float]:
    """Distinct-word proportions per synset bucket.

    Words absent from the table land in no bucket, so the seven values sum
    to at most 1.
    """
    distinct = doc.distinct_words
    m = len(distinct)
    counts = dict.fromkeys(WORDNET_FEATURES, 0)
    for word in distinct:
        ws = table.map.get(word)
        if ws is not None:
            counts[f"wordnet{synset_bucket(ws)}"] += 1
    return {key: counts[key] / m for key in WORDNET_FEATURES}
