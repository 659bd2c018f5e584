"""Coreference chains: sidecar ingestion, a naive fallback, and features.

The sidecar format is JSON: an array of chains, each an array of mentions
``{"sentence": int, "start": int, "end": int, "kind": str}`` with inclusive
token spans. The first mention (document order) is the antecedent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TYPE_CHECKING

from .errors import AnnotationMismatch, LoadError

if TYPE_CHECKING:
    from .corpus import Document

MENTION_KINDS = ("pronoun", "properNoun", "nominal")


@dataclass(frozen=True)
class Mention:
    sentence_index: int
    token_start: int
    token_end: int  # inclusive
    kind: str

    @property
    def position(self) -> tuple[int, int]:
        return (self.sentence_index, self.token_start)


@dataclass(frozen=True)
class CorefChain:
    antecedent: Mention
    anaphora: tuple[Mention, ...]

    @staticmethod
    def from_mentions(mentions: Sequence[Mention]) -> "CorefChain":
        ordered = sorted(mentions, key=lambda m: m.position)
        return CorefChain(antecedent=ordered[0], anaphora=tuple(ordered[1:]))


def load_coref_sidecar(path: Path | str, doc: "Document") -> tuple[CorefChain, ...]:
    """Load and validate chains against the document's sentence/token layout."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise LoadError(f"cannot read coref sidecar {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise LoadError(f"coref sidecar {path} is not valid JSON: {exc}") from exc
    chains = []
    for chain_id, raw_chain in enumerate(payload):
        mentions = []
        for raw in raw_chain:
            mention = Mention(
                sentence_index=raw["sentence"],
                token_start=raw["start"],
                token_end=raw["end"],
                kind=raw.get("kind", "nominal"),
            )
            if not 0 <= mention.sentence_index < doc.sentence_count:
                raise AnnotationMismatch(
                    f"{doc.id} chain {chain_id}: sentence {mention.sentence_index} out of range"
                )
            sentence_len = len(doc.sentences[mention.sentence_index])
            if not (
                0 <= mention.token_start <= mention.token_end < sentence_len
            ):
                raise AnnotationMismatch(
                    f"{doc.id} chain {chain_id}: span "
                    f"{mention.token_start}..{mention.token_end} beyond sentence "
                    f"of {sentence_len} tokens"
                )
            mentions.append(mention)
        if mentions:
            chains.append(CorefChain.from_mentions(mentions))
    return tuple(chains)


def heuristic_chains(doc: "Document") -> tuple[CorefChain, ...]:
    """Naive fallback chains when no sidecar exists. Deterministic.

    Candidate entity mentions are capitalized tokens that are neither stop
    words nor pronouns (this admits sentence-initial names the strict
    proper-noun flag misses); identical surface strings form one chain. Each
    pronoun attaches to the chain of the nearest preceding candidate within
    three sentences, else joins nothing. Only chains with at least one
    anaphora survive.
    """
    candidates: dict[str, list[Mention]] = {}
    candidate_positions: list[tuple[tuple[int, int], str]] = []
    pronoun_mentions: list[Mention] = []
    for sentence in doc.sentences:
        for i, token in enumerate(sentence.tokens):
            if token.is_pronoun:
                pronoun_mentions.append(
                    Mention(sentence.index, i, i, kind="pronoun")
                )
            elif (
                token.surface[0].isupper()
                and not token.is_stop_word
            ):
                mention = Mention(sentence.index, i, i, kind="properNoun")
                candidates.setdefault(token.surface, []).append(mention)
                candidate_positions.append((mention.position, token.surface))
    attached: dict[str, list[Mention]] = {key: list(val) for key, val in candidates.items()}
    for pronoun in pronoun_mentions:
        best = None
        for position, surface in candidate_positions:
            if position >= pronoun.position:
                break
            if pronoun.sentence_index - position[0] <= 3:
                best = surface
        if best is not None:
            attached[best].append(pronoun)
    chains = [
        CorefChain.from_mentions(mentions)
        for _, mentions in sorted(attached.items())
        if len(mentions) >= 2
    ]
    chains.sort(key=lambda c: c.antecedent.position)
    return tuple(chains)


COREF_FEATURES = ("pronoun", "proper_noun", "antecedent", "corefer_chain", "corefer_distance")


def coref_features(doc: "Document", chains: Sequence[CorefChain]) -> dict[str, float]:
    """The five coreference features.

    pronoun / proper_noun are per-sentence token averages; antecedent is the
    raw chain count; corefer_chain is the mean anaphora count per chain; and
    corefer_distance is the mean sentence offset between each anaphora and
    its antecedent. Empty chain lists yield zeros.
    """
    n = doc.sentence_count
    pronoun_count = sum(1 for t in doc.tokens() if t.is_pronoun)
    proper_count = sum(1 for t in doc.tokens() if t.is_proper_noun)
    distances = [
        a.sentence_index - chain.antecedent.sentence_index
        for chain in chains
        for a in chain.anaphora
    ]
    return {
        "pronoun": pronoun_count / n,
        "proper_noun": proper_count / n,
        "antecedent": float(len(chains)),
        "corefer_chain": (
            sum(len(c.anaphora) for c in chains) / len(chains) if chains else 0.0
        ),
        "corefer_distance": sum(distances) / len(distances) if distances else 0.0,
    }
