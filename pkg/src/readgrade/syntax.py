"""Bracketed constituency trees, parsing features, and grammar patterns.

Trees arrive from an external parser as Penn-style bracket notation, one tree
per line in a sidecar file. The pattern language is a small tregex subset:

    LABEL           node whose label is LABEL (A|B alternation allowed)
    A < B           A immediately dominates a node matching B
    A << B          A dominates (at any depth) a node matching B
    A . B           A immediately precedes B among siblings
    ( ... )         grouping; the right side of a relation may be a full
                    parenthesized pattern, e.g.  VP < (TO . VP)

Relations written in sequence all constrain the head (leftmost) node, as in
tregex. Matching counts distinct bindings of the head node only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .errors import AnnotationMismatch, LoadError, PatternSyntaxError, TreeSyntaxError

STRIP_SUFFIXES_DEFAULT = True


@dataclass(frozen=True)
class ParseTree:
    """A labeled ordered tree. Leaves carry the terminal token as both label
    and ``terminal``; internal nodes have at least one child."""

    label: str
    children: tuple["ParseTree", ...] = ()
    terminal: Optional[str] = None

    @property
    def is_leaf(self) -> bool:
        return self.terminal is not None

    def walk(self) -> Iterator["ParseTree"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def terminals(self) -> list[str]:
        return [node.terminal for node in self.walk() if node.is_leaf]

    def preterminals(self) -> list["ParseTree"]:
        """Internal nodes whose children are all leaves, left to right."""
        return [
            node
            for node in self.walk()
            if node.children and all(c.is_leaf for c in node.children)
        ]

    def serialize(self) -> str:
        """Canonical bracket form: single spaces, no redundant whitespace."""
        if self.is_leaf:
            return self.terminal
        inner = " ".join(c.serialize() for c in self.children)
        return f"({self.label} {inner})"


def leaf(token: str) -> ParseTree:
    return ParseTree(label=token, terminal=token)


_TREE_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


def parse_bracket_tree(text: str) -> ParseTree:
    """Parse one bracketed tree; TreeSyntaxError carries the char offset."""
    tokens = [(m.group(), m.start()) for m in _TREE_TOKEN_RE.finditer(text)]
    if not tokens:
        raise TreeSyntaxError("empty input", 0)
    pos = 0

    def parse_node() -> ParseTree:
        nonlocal pos
        tok, offset = tokens[pos]
        if tok != "(":
            raise TreeSyntaxError(f"expected '(' but found {tok!r}", offset)
        pos += 1
        if pos >= len(tokens):
            raise TreeSyntaxError("unbalanced parentheses", len(text))
        label, label_offset = tokens[pos]
        if label in ("(", ")"):
            raise TreeSyntaxError("node lacks a label", label_offset)
        pos += 1
        children: list[ParseTree] = []
        while pos < len(tokens):
            tok, offset = tokens[pos]
            if tok == ")":
                pos += 1
                if not children:
                    raise TreeSyntaxError(f"empty node ({label})", offset)
                return ParseTree(label=label, children=tuple(children))
            if tok == "(":
                children.append(parse_node())
            else:
                children.append(leaf(tok))
                pos += 1
        raise TreeSyntaxError("unbalanced parentheses", len(text))

    tree = parse_node()
    if pos < len(tokens):
        raise TreeSyntaxError("trailing content after tree", tokens[pos][1])
    return tree


def load_tree_sidecar(path: Path | str) -> tuple[ParseTree, ...]:
    """One bracketed tree per non-empty line, line i for sentence i."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read tree sidecar {path}: {exc}") from exc
    return tuple(parse_bracket_tree(line) for line in text.splitlines() if line.strip())


def tree_height(tree: ParseTree) -> int:
    """Edges on the longest root-to-terminal path; a bare leaf has height 0."""
    if tree.is_leaf:
        return 0
    return 1 + max(tree_height(c) for c in tree.children)


def strip_label(label: str) -> str:
    """Truncate a treebank label at the first '-' or '=' (function tags).

    Labels that start with '-' (-NONE-, -LRB-, -RRB-) are atomic and pass
    through unchanged."""
    if label.startswith("-"):
        return label
    for i, c in enumerate(label):
        if c in "-=":
            return label[:i]
    return label


PHRASE_LABELS = ("NP", "VP", "SBAR", "PP")


def phrase_counts(
    tree: ParseTree, *, strip_suffixes: bool = STRIP_SUFFIXES_DEFAULT
) -> dict[str, int]:
    """Counts of internal nodes labeled exactly NP, VP, SBAR, PP."""
    counts = dict.fromkeys(PHRASE_LABELS, 0)
    for node in tree.walk():
        if node.is_leaf:
            continue
        label = strip_label(node.label) if strip_suffixes else node.label
        if label in counts:
            counts[label] += 1
    return counts


def parsing_features(
    trees: Sequence[ParseTree],
    n: int,
    *,
    strip_suffixes: bool = STRIP_SUFFIXES_DEFAULT,
) -> dict[str, float]:
    """Per-sentence means of tree height and NP/VP/SBAR/PP counts."""
    if len(trees) != n:
        raise AnnotationMismatch(f"{len(trees)} trees for {n} sentences")
    totals = dict.fromkeys(PHRASE_LABELS, 0)
    height_total = 0
    for tree in trees:
        height_total += tree_height(tree)
        for label, count in phrase_counts(tree, strip_suffixes=strip_suffixes).items():
            totals[label] += count
    return {
        "tree_height": height_total / n,
        "np": totals["NP"] / n,
        "vp": totals["VP"] / n,
        "sbar": totals["SBAR"] / n,
        "pp": totals["PP"] / n,
    }


# ---------------------------------------------------------------------------
# Pattern engine


@dataclass(frozen=True)
class _Node:
    """One pattern node: a label alternation plus relations that constrain it."""

    labels: frozenset[str]
    constraints: tuple[tuple[str, "_Node"], ...] = ()


_PATTERN_TOKEN_RE = re.compile(r"<<|<|\.|\(|\)|\||[^\s()|<.]+")


class CompiledPattern:
    """A compiled tree pattern. ``match_count`` counts distinct nodes bindable
    to the head atom (not distinct full assignments)."""

    def __init__(self, expr: str, *, strip_suffixes: bool = STRIP_SUFFIXES_DEFAULT):
        self.expr = expr
        self.strip_suffixes = strip_suffixes
        self._root = _parse_pattern(expr)

    def _label_of(self, node: ParseTree) -> str:
        if node.is_leaf or not self.strip_suffixes:
            return node.label
        return strip_label(node.label)

    def _satisfies(self, node: ParseTree, pat: _Node, parents: dict) -> bool:
        if self._label_of(node) not in pat.labels:
            return False
        for rel, sub in pat.constraints:
            if rel == "<":
                candidates = node.children
            elif rel == "<<":
                candidates = [d for d in node.walk() if d is not node]
            else:  # '.' immediate right sibling
                entry = parents.get(id(node))
                candidates = []
                if entry is not None:
                    parent, index = entry
                    if index + 1 < len(parent.children):
                        candidates = [parent.children[index + 1]]
            if not any(self._satisfies(c, sub, parents) for c in candidates):
                return False
        return True

    def matches(self, tree: ParseTree) -> list[ParseTree]:
        parents: dict[int, tuple[ParseTree, int]] = {}
        for node in tree.walk():
            for i, child in enumerate(node.children):
                parents[id(child)] = (node, i)
        return [node for node in tree.walk() if self._satisfies(node, self._root, parents)]

    def match_count(self, tree: ParseTree) -> int:
        return len(self.matches(tree))


def _parse_pattern(expr: str) -> _Node:
    tokens = [(m.group(), m.start()) for m in _PATTERN_TOKEN_RE.finditer(expr)]
    pos = 0

    def peek() -> Optional[str]:
        return tokens[pos][0] if pos < len(tokens) else None

    def here() -> int:
        return tokens[pos][1] if pos < len(tokens) else len(expr)

    def parse_atom() -> _Node:
        nonlocal pos
        tok = peek()
        if tok is None or tok in ("(", ")", "|", "<", "<<", "."):
            raise PatternSyntaxError("expected a label", here())
        labels = [tok]
        pos += 1
        while peek() == "|":
            pos += 1
            tok = peek()
            if tok is None or tok in ("(", ")", "|", "<", "<<", "."):
                raise PatternSyntaxError("expected a label after '|'", here())
            labels.append(tok)
            pos += 1
        return _Node(labels=frozenset(labels))

    def parse_node() -> _Node:
        nonlocal pos
        if peek() == "(":
            open_at = here()
            pos += 1
            inner = parse_sequence()
            if peek() != ")":
                raise PatternSyntaxError("unbalanced '('", open_at)
            pos += 1
            return inner
        return parse_atom()

    def parse_sequence() -> _Node:
        nonlocal pos
        head = parse_node()
        constraints = list(head.constraints)
        while peek() in ("<", "<<", "."):
            rel = peek()
            pos += 1
            constraints.append((rel, parse_node()))
        return _Node(labels=head.labels, constraints=tuple(constraints))

    if not tokens:
        raise PatternSyntaxError("empty pattern", 0)
    root = parse_sequence()
    if pos < len(tokens):
        raise PatternSyntaxError(f"unexpected {tokens[pos][0]!r}", tokens[pos][1])
    return root


@dataclass(frozen=True)
class GrammarPattern:
    id: str
    grade: int
    expr: str
    matcher: CompiledPattern

    @staticmethod
    def compile(pattern_id: str, grade: int, expr: str) -> "GrammarPattern":
        if not 1 <= grade <= 6:
            raise LoadError(f"pattern {pattern_id}: grade {grade} outside 1..6")
        return GrammarPattern(
            id=pattern_id, grade=grade, expr=expr, matcher=CompiledPattern(expr)
        )


def load_patterns(path: Path | str) -> tuple[GrammarPattern, ...]:
    """Load a ``id<TAB>grade<TAB>expr`` pattern file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read pattern file {path}: {exc}") from exc
    patterns = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise LoadError(f"{path} line {lineno}: expected id<TAB>grade<TAB>expr")
        pattern_id, grade_text, expr = parts
        try:
            grade = int(grade_text)
        except ValueError as exc:
            raise LoadError(f"{path} line {lineno}: grade {grade_text!r} not an integer") from exc
        patterns.append(GrammarPattern.compile(pattern_id.strip(), grade, expr.strip()))
    return tuple(patterns)


GRAMMAR_FEATURES = tuple(f"grammar{g}" for g in range(1, 7))


def grammar_features(
    trees: Sequence[ParseTree],
    patterns: Sequence[GrammarPattern],
    n: int,
    *,
    per_100_words: bool = False,
    token_count: Optional[int] = None,
) -> dict[str, float]:
    """Pattern matches per sentence, grouped by pattern grade.

    Duplicate patterns count independently (a pattern listed twice contributes
    twice). With ``per_100_words`` the denominator is token_count / 100.
    """
    if len(trees) != n:
        raise AnnotationMismatch(f"{len(trees)} trees for {n} sentences")
    denominator = float(n)
    if per_100_words:
        if not token_count:
            raise AnnotationMismatch("per-100-words normalization needs a token count")
        denominator = token_count / 100.0
    totals = dict.fromkeys(GRAMMAR_FEATURES, 0)
    for pattern in patterns:
        key = f"grammar{pattern.grade}"
        for tree in trees:
            totals[key] += pattern.matcher.match_count(tree)
    return {key: totals[key] / denominator for key in GRAMMAR_FEATURES}
