"""Synthetic graded corpora for tests, demos, and acceptance runs.

The licensed textbook corpus behind the original experiments is not
redistributable, so this module fabricates one with the same shape: six
grade levels whose documents grow longer, use rarer vocabulary, and carry
deeper parse trees as the grade rises. Everything (documents, tree and
coreference sidecars, lexicons, frequency tables, synset table, manifest)
is derived from a single seed.
"""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import data_path
from .syntax import ParseTree, leaf

_ONSETS = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "z",
           "br", "st", "tr", "pl", "gr", "sk", "fl"]
_VOWELS = ["a", "e", "i", "o", "u"]
_CODAS = ["", "n", "s", "t", "l", "r", "m", "k", "d"]

_NAMES = ["Alice", "Ben", "Carol", "David", "Emma", "Frank",
          "Grace", "Henry", "Irene", "Jack", "Karen", "Leo"]

_SUBJECT_PRONOUNS = ["he", "she", "it", "they"]

# Syllable range per difficulty tier. The ranges overlap heavily on purpose:
# surface length is only a weak difficulty cue here, so the strong signal
# lives in the acquisition-level lexicons rather than in anything the
# classic syllable-counting formulas can see.
_TIER_SYLLABLES = {1: (1, 3), 2: (1, 3), 3: (1, 4), 4: (1, 4), 5: (2, 4), 6: (2, 4)}

_VQ_BY_TIER = {1: (3, 4), 2: (5, 6), 3: (7, 8, 9), 4: (10, 11), 5: (12, 13), 6: (14, 15, 16)}

_BNC_BASE = {1: 50000, 2: 20000, 3: 8000, 4: 3000, 5: 1200, 6: 500}
_SYNSET_BASE = {1: 40, 2: 25, 3: 12, 4: 6, 5: 3, 6: 1}


@dataclass(frozen=True)
class SynthConfig:
    grades: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    docs_per_grade: int = 40
    seed: int = 0
    words_per_tier: int = 150
    tree_fraction: float = 1.0
    coref_fraction: float = 0.5


def _reserved_words() -> set[str]:
    reserved = set()
    for filename in ("stopwords.txt", "pronouns.txt"):
        for line in data_path(filename).read_text(encoding="utf-8").splitlines():
            if line.strip() and not line.startswith("#"):
                reserved.add(line.strip().casefold())
    reserved.update(name.casefold() for name in _NAMES)
    return reserved


def _build_vocabulary(rng: np.random.Generator, words_per_tier: int) -> dict[int, list[str]]:
    reserved = _reserved_words()
    seen = set(reserved)
    vocab: dict[int, list[str]] = {}
    for tier in range(1, 7):
        lo, hi = _TIER_SYLLABLES[tier]
        words = []
        while len(words) < words_per_tier:
            count = int(rng.integers(lo, hi + 1))
            word = "".join(
                _ONSETS[rng.integers(len(_ONSETS))]
                + _VOWELS[rng.integers(len(_VOWELS))]
                + _CODAS[rng.integers(len(_CODAS))]
                for _ in range(count)
            )
            if word not in seen:
                seen.add(word)
                words.append(word)
        vocab[tier] = words
    return vocab


def _write_lexicons(rng: np.random.Generator, vocab: dict[int, list[str]], out: Path) -> None:
    gept_lines = []
    vq_lines = []
    bnc_lines = []
    google_lines = []
    synset_lines = []
    bnc_total = 0
    google_total = 0
    for tier, words in vocab.items():
        for word in words:
            if tier <= 2:
                gept_lines.append(f"{word}\tgept1")
            elif tier <= 4:
                gept_lines.append(f"{word}\tgept2")
            elif tier == 5:
                gept_lines.append(f"{word}\tgept3")
            # tier 6 stays out of the GEPT list entirely (gept0 at lookup)
            if tier < 6 or rng.random() > 0.2:
                vq_lines.append(f"{word}\tvq{rng.choice(_VQ_BY_TIER[tier])}")
            if tier < 6 or rng.random() > 0.3:
                count = max(1, int(_BNC_BASE[tier] * rng.lognormal(0.0, 0.4)))
                bnc_lines.append(f"{word}\t{count}")
                bnc_total += count
                google_lines.append(f"{word}\t{count * 1000}")
                google_total += count * 1000
            if rng.random() > 0.1:
                ws = max(1, int(round(_SYNSET_BASE[tier] * rng.lognormal(0.0, 0.3))))
                synset_lines.append(f"{word}\t{ws}")
    (out / "gept.tsv").write_text("\n".join(gept_lines) + "\n", encoding="utf-8")
    (out / "vq.tsv").write_text("\n".join(vq_lines) + "\n", encoding="utf-8")
    (out / "bnc.tsv").write_text(
        f"#total\t{bnc_total * 10}\n" + "\n".join(bnc_lines) + "\n", encoding="utf-8"
    )
    (out / "google.tsv").write_text(
        f"#total\t{google_total * 10}\n" + "\n".join(google_lines) + "\n", encoding="utf-8"
    )
    (out / "synsets.tsv").write_text("\n".join(synset_lines) + "\n", encoding="utf-8")


class _SentenceBuilder:
    """Builds one sentence tree; difficulty knobs scale with the grade."""

    def __init__(self, rng: np.random.Generator, grade: int, vocab: dict[int, list[str]]):
        self.rng = rng
        self.grade = grade
        self.vocab = vocab

    def word(self) -> str:
        tier = int(np.clip(round(self.rng.normal(self.grade, 1.2)), 1, 6))
        words = self.vocab[tier]
        return words[self.rng.integers(len(words))]

    def simple_np(self) -> ParseTree:
        det = "the" if self.rng.random() < 0.7 else "a"
        return ParseTree("NP", (ParseTree("DT", (leaf(det),)), ParseTree("NN", (leaf(self.word()),))))

    def np(self, depth: int) -> ParseTree:
        node = self.simple_np()
        while depth > 0 and self.rng.random() < 0.55:
            prep = ["of", "in", "on", "under", "near"][self.rng.integers(5)]
            pp = ParseTree("PP", (ParseTree("IN", (leaf(prep),)), self.np(depth - 1)))
            node = ParseTree("NP", (node, pp))
            depth -= 1
        if self.grade >= 4 and self.rng.random() < 0.12 * (self.grade - 3):
            rel = ParseTree(
                "SBAR",
                (
                    ParseTree("WHNP", (ParseTree("WDT", (leaf("which"),)),)),
                    ParseTree("S", (ParseTree("VP", (ParseTree("VBD", (leaf(self.word()),)), self.simple_np())),)),
                ),
            )
            node = ParseTree("NP", (node, rel))
        return node

    def vp(self) -> ParseTree:
        pp_budget = int(self.rng.poisson(0.3 + self.grade / 5.0))
        children: tuple[ParseTree, ...]
        if self.grade >= 4 and self.rng.random() < 0.10 * (self.grade - 3):
            # passive: (VP (VBD was) (VP (VBN v) ...))
            inner = ParseTree("VP", (ParseTree("VBN", (leaf(self.word()),)), self.np(pp_budget)))
            children = (ParseTree("VBD", (leaf("was"),)), inner)
        elif self.grade >= 3 and self.rng.random() < 0.12 * (self.grade - 2):
            # infinitival complement: (VP (VBD v) (VP (TO to) (VP (VB v) ...)))
            inner = ParseTree("VP", (ParseTree("VB", (leaf(self.word()),)), self.np(pp_budget)))
            to_vp = ParseTree("VP", (ParseTree("TO", (leaf("to"),)), inner))
            children = (ParseTree("VBD", (leaf(self.word()),)), to_vp)
        else:
            children = (ParseTree("VBD", (leaf(self.word()),)), self.np(pp_budget))
        if self.rng.random() < 0.2:
            children = children + (ParseTree("ADVP", (ParseTree("RB", (leaf(self.word()),)),)),)
        return ParseTree("VP", children)

    def sentence(self, subject: ParseTree) -> ParseTree:
        children = []
        if self.grade >= 3 and self.rng.random() < 0.08 * (self.grade - 2):
            inner = ParseTree("S", (self.simple_np(), self.vp()))
            children.append(ParseTree("SBAR", (ParseTree("IN", (leaf("because"),)), inner)))
        children.extend([subject, self.vp()])
        return ParseTree("S", tuple(children))


def _leaf_index(tree: ParseTree, target: ParseTree) -> int:
    for i, node in enumerate(n for n in tree.walk() if n.is_leaf):
        if node is target:
            return i
    raise ValueError("leaf not in tree")


def _generate_document(
    rng: np.random.Generator, grade: int, vocab: dict[int, list[str]]
) -> tuple[str, list[ParseTree], list[list[dict]]]:
    """Returns (text, sentence trees, coref chains as sidecar payload)."""
    builder = _SentenceBuilder(rng, grade, vocab)
    doc_names = [
        _NAMES[i] for i in rng.choice(len(_NAMES), size=2, replace=False)
    ]
    n_sentences = int(8 + grade + rng.integers(0, 6))
    trees: list[ParseTree] = []
    lines: list[str] = []
    mentions: dict[str, list[tuple[int, int]]] = {name: [] for name in doc_names}
    pronoun_links: dict[str, list[tuple[int, int]]] = {name: [] for name in doc_names}
    last_name: tuple[str, int] | None = None
    for s_index in range(n_sentences):
        roll = rng.random()
        subject_leaf = None
        subject_kind = None
        if roll < 0.3:
            name = doc_names[rng.integers(len(doc_names))]
            subject_leaf = leaf(name)
            subject = ParseTree("NP", (ParseTree("NNP", (subject_leaf,)),))
            subject_kind = ("name", name)
        elif (
            roll < 0.55
            and last_name is not None
            and s_index - last_name[1] <= min(3, grade // 2 + 1)
        ):
            pronoun = _SUBJECT_PRONOUNS[rng.integers(len(_SUBJECT_PRONOUNS))]
            subject_leaf = leaf(pronoun)
            subject = ParseTree("NP", (ParseTree("PRP", (subject_leaf,)),))
            subject_kind = ("pronoun", last_name[0])
        else:
            subject = builder.np(0)
        tree = builder.sentence(subject)
        tokens = tree.terminals()
        if subject_kind is not None:
            index = _leaf_index(tree, subject_leaf)
            kind, name = subject_kind
            if kind == "name":
                mentions[name].append((s_index, index))
                last_name = (name, s_index)
            else:
                pronoun_links[name].append((s_index, index))
        trees.append(tree)
        lines.append(" ".join([tokens[0].capitalize()] + tokens[1:]) + ".")
    chains = []
    for name in doc_names:
        entries = [
            {"sentence": s, "start": t, "end": t, "kind": "properNoun"}
            for s, t in mentions[name]
        ] + [
            {"sentence": s, "start": t, "end": t, "kind": "pronoun"}
            for s, t in pronoun_links[name]
        ]
        entries.sort(key=lambda e: (e["sentence"], e["start"]))
        if len(entries) >= 2:
            chains.append(entries)
    return " ".join(lines), trees, chains


def generate_corpus(out_dir: Path | str, config: SynthConfig = SynthConfig()) -> Path:
    """Write a complete synthetic corpus; returns the manifest path."""
    out = Path(out_dir)
    for sub in ("docs", "trees", "coref", "resources"):
        (out / sub).mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(config.seed)
    vocab = _build_vocabulary(rng, config.words_per_tier)
    _write_lexicons(rng, vocab, out / "resources")
    for filename in ("stopwords.txt", "pronouns.txt", "abbreviations.txt",
                     "prondict.tsv", "patterns.tsv"):
        shutil.copy(data_path(filename), out / "resources" / filename)
    documents = []
    for grade in config.grades:
        for i in range(config.docs_per_grade):
            doc_id = f"doc_g{grade}_{i:03d}"
            text, trees, chains = _generate_document(rng, grade, vocab)
            (out / "docs" / f"{doc_id}.txt").write_text(text + "\n", encoding="utf-8")
            entry = {"path": f"docs/{doc_id}.txt", "grade": grade}
            if rng.random() < config.tree_fraction:
                tree_file = out / "trees" / f"{doc_id}.trees"
                tree_file.write_text(
                    "\n".join(t.serialize() for t in trees) + "\n", encoding="utf-8"
                )
                entry["tree"] = f"trees/{doc_id}.trees"
            if rng.random() < config.coref_fraction:
                coref_file = out / "coref" / f"{doc_id}.json"
                coref_file.write_text(json.dumps(chains, indent=1) + "\n", encoding="utf-8")
                entry["coref"] = f"coref/{doc_id}.json"
            documents.append(entry)
    manifest = {
        "documents": documents,
        "resources": {
            "stopwords": "resources/stopwords.txt",
            "pronouns": "resources/pronouns.txt",
            "abbreviations": "resources/abbreviations.txt",
            "prondict": "resources/prondict.tsv",
            "patterns": "resources/patterns.tsv",
            "gept": "resources/gept.tsv",
            "vq": "resources/vq.tsv",
            "bnc": "resources/bnc.tsv",
            "google": "resources/google.tsv",
            "synsets": "resources/synsets.tsv",
        },
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
    return manifest_path
