import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from readgrade.corpus import tokenize
from readgrade.errors import DomainError, SchemaError
from readgrade.lexicon import (
    FrequencyTable,
    GEPT_LEVELS,
    GradedLexicon,
    SynsetTable,
    VQ_LEVELS,
    aoa_proportions,
    corpus_frequency_feature,
    load_frequency_table,
    load_graded_lexicon,
    search_count_feature,
    semantic_proportions,
    synset_bucket,
)


class TestGradedLexiconLoading:
    def test_basic_load(self, tmp_path):
        path = tmp_path / "gept.tsv"
        path.write_text("cat\tgept1\ndog\tgept2\nfox\tgept3\n", encoding="utf-8")
        lex, warnings = load_graded_lexicon(path, GEPT_LEVELS)
        assert len(lex.map) == 3
        assert warnings == 0
        assert lex.level_of("cat") == "gept1"
        assert lex.level_of("unknown") == "gept0"

    def test_duplicate_takes_easiest(self, tmp_path):
        path = tmp_path / "gept.tsv"
        path.write_text("cat\tgept3\ncat\tgept1\n", encoding="utf-8")
        lex, warnings = load_graded_lexicon(path, GEPT_LEVELS)
        assert lex.level_of("cat") == "gept1"
        assert warnings == 1

    def test_unknown_level_is_schema_error(self, tmp_path):
        path = tmp_path / "gept.tsv"
        path.write_text("cat\tgept9\n", encoding="utf-8")
        with pytest.raises(SchemaError, match="line 1"):
            load_graded_lexicon(path, GEPT_LEVELS)

    def test_vq_schema_has_fifteen_levels(self):
        assert len(VQ_LEVELS) == 15
        assert VQ_LEVELS[0] == "vq0" and VQ_LEVELS[-1] == "vq16"

    def test_reload_is_identical(self, tmp_path):
        import random

        path = tmp_path / "lex.tsv"
        rng = random.Random(0)
        words = [f"w{i}" for i in range(500)]
        lines = [f"{w}\t{rng.choice(GEPT_LEVELS[1:])}" for w in words]
        path.write_text("\n".join(lines), encoding="utf-8")
        lex1, _ = load_graded_lexicon(path, GEPT_LEVELS)
        lex2, _ = load_graded_lexicon(path, GEPT_LEVELS)
        probes = [rng.choice(words) for _ in range(10000)] + ["missing"] * 100
        assert all(lex1.level_of(w) == lex2.level_of(w) for w in probes)


class TestAoaProportions:
    def test_all_unmapped(self):
        doc = tokenize("zip zap zop")
        lex = GradedLexicon("gept", GEPT_LEVELS, {})
        props = aoa_proportions(doc, lex)
        assert props["gept0"] == 1.0
        assert all(props[l] == 0.0 for l in GEPT_LEVELS[1:])

    def test_hand_count(self):
        doc = tokenize("cat dog ubiquitous cat")
        lex = GradedLexicon(
            "gept", GEPT_LEVELS, {"cat": "gept1", "dog": "gept1", "ubiquitous": "gept3"}
        )
        props = aoa_proportions(doc, lex)
        assert props["gept1"] == pytest.approx(2 / 3)
        assert props["gept3"] == pytest.approx(1 / 3)
        assert props["gept2"] == 0.0

    def test_lemma_fallback(self):
        doc = tokenize("running")
        lex = GradedLexicon("gept", GEPT_LEVELS, {"run": "gept1"})
        assert aoa_proportions(doc, lex)["gept0"] == 1.0
        props = aoa_proportions(doc, lex, lemmas={"running": "run"})
        assert props["gept1"] == 1.0

    @given(st.lists(st.sampled_from("abcdefghij"), min_size=1, max_size=60))
    @settings(max_examples=200)
    def test_sums_to_one(self, letters):
        doc = tokenize(" ".join(letters))
        mapping = {c: GEPT_LEVELS[1 + (ord(c) % 3)] for c in "abcde"}
        lex = GradedLexicon("gept", GEPT_LEVELS, mapping)
        props = aoa_proportions(doc, lex)
        assert sum(props.values()) == pytest.approx(1.0, abs=1e-12)


class TestFrequencyFeatures:
    def test_single_word_full_corpus(self):
        doc = tokenize("word")
        table = FrequencyTable("bnc", {"word": 100}, total_tokens=100)
        assert corpus_frequency_feature(doc, table) == pytest.approx(0.0)

    def test_mean_of_relative_frequencies(self):
        doc = tokenize("alpha beta")
        table = FrequencyTable("bnc", {"alpha": 1, "beta": 3}, total_tokens=100)
        # wf = 0.01 and 0.03, mean 0.02
        assert corpus_frequency_feature(doc, table) == pytest.approx(math.log(0.02))

    def test_floor_when_all_absent(self):
        doc = tokenize("zig zag")
        table = FrequencyTable("bnc", {"other": 5}, total_tokens=1000)
        assert corpus_frequency_feature(doc, table) == pytest.approx(
            math.log(1 / 1000) - 1.0
        )

    def test_stop_words_excluded(self):
        doc = tokenize("the alpha", stop_words=frozenset({"the"}))
        table = FrequencyTable("bnc", {"the": 90, "alpha": 10}, total_tokens=100)
        assert corpus_frequency_feature(doc, table) == pytest.approx(math.log(0.1))

    def test_search_count_single(self):
        doc = tokenize("word")
        table = FrequencyTable("google", {"word": 1000}, total_tokens=10000)
        assert search_count_feature(doc, table) == pytest.approx(math.log(1000))

    def test_search_count_equal_counts(self):
        doc = tokenize("alpha beta")
        table = FrequencyTable("google", {"alpha": 10, "beta": 10}, total_tokens=1000)
        assert search_count_feature(doc, table) == pytest.approx(math.log(10))

    def test_search_count_empty_table(self):
        doc = tokenize("alpha")
        table = FrequencyTable("google", {}, total_tokens=500)
        assert search_count_feature(doc, table) == table.floor_value

    def test_invariant_to_order_and_multiplicity(self):
        table = FrequencyTable("bnc", {"alpha": 4, "beta": 16}, total_tokens=100)
        docs = [
            tokenize("alpha beta"),
            tokenize("beta alpha"),
            tokenize("alpha alpha beta beta beta"),
        ]
        values = {corpus_frequency_feature(d, table) for d in docs}
        assert len(values) == 1

    def test_loader_schema(self, tmp_path):
        path = tmp_path / "freq.tsv"
        path.write_text("#total\t1000\ncat\t10\ndog\t20\ncat\t5\n", encoding="utf-8")
        table = load_frequency_table(path)
        assert table.total_tokens == 1000
        assert table.map["cat"] == 15  # duplicates accumulate

    def test_loader_requires_total(self, tmp_path):
        path = tmp_path / "freq.tsv"
        path.write_text("cat\t10\n", encoding="utf-8")
        with pytest.raises(SchemaError):
            load_frequency_table(path)

    def test_loader_rejects_zero_count(self, tmp_path):
        path = tmp_path / "freq.tsv"
        path.write_text("#total\t10\ncat\t0\n", encoding="utf-8")
        with pytest.raises(SchemaError):
            load_frequency_table(path)


class TestSynsetBucket:
    def test_bucket_anchor_values(self):
        assert synset_bucket(17) == 4
        assert synset_bucket(50) == 7
        assert synset_bucket(1) == 1

    def test_saturation_above_49(self):
        for ws in (50, 64, 100, 10_000):
            assert synset_bucket(ws) == 7

    def test_non_positive_is_domain_error(self):
        with pytest.raises(DomainError):
            synset_bucket(0)
        with pytest.raises(DomainError):
            synset_bucket(-3)

    @given(st.integers(min_value=1, max_value=10_000))
    def test_monotone_and_bounded(self, ws):
        bucket = synset_bucket(ws)
        assert 1 <= bucket <= 7
        assert bucket <= synset_bucket(ws + 1)


class TestSemanticProportions:
    def test_absent_words_no_bucket(self):
        doc = tokenize("zig zag")
        props = semantic_proportions(doc, SynsetTable({}))
        assert all(v == 0.0 for v in props.values())

    def test_mixed_buckets(self):
        doc = tokenize("alpha beta")
        props = semantic_proportions(doc, SynsetTable({"alpha": 17, "beta": 1}))
        assert props["wordnet4"] == pytest.approx(0.5)
        assert props["wordnet1"] == pytest.approx(0.5)

    def test_all_same_bucket(self):
        doc = tokenize("a b c d")
        table = SynsetTable({w: 4 for w in "abcd"})
        props = semantic_proportions(doc, table)
        assert props["wordnet2"] == pytest.approx(1.0)

    def test_sums_at_most_one(self):
        doc = tokenize("alpha beta gamma")
        props = semantic_proportions(doc, SynsetTable({"alpha": 9}))
        assert sum(props.values()) <= 1.0 + 1e-12
