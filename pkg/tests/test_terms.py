import json
import math
import random

import pytest

from techatlas.corpus import build_corpus_index, parse_record
from techatlas.terms import (
    STOPWORDS,
    FieldTermRegistry,
    TermError,
    TermProfile,
    build_field_registry,
    extract_terms,
    rank_terms,
    stopwords_sha256,
    term_frequencies,
)
from randcorp import random_corpus, to_records


def make_index(*titled):
    records = [
        parse_record(json.dumps({
            "id": f"p{i}", "title": title, "abstract": abstract, "ipc": [ipc],
        }))
        for i, (title, abstract, ipc) in enumerate(titled)
    ]
    return build_corpus_index(records)


class TestExtractTerms:
    def test_hyphenated_phrase_and_unigrams(self):
        got = extract_terms("Dual-mode vehicular controller")
        assert dict(got) == {
            "dual-mode vehicular controller": 1,
            "dual-mode": 1,
            "vehicular": 1,
            "controller": 1,
        }

    def test_empty_text(self):
        assert extract_terms("") == {}

    def test_stopword_splits_runs(self):
        got = extract_terms("Water barrier panel for walls")
        assert dict(got) == {
            "water barrier panel": 1,
            "water": 1,
            "barrier": 1,
            "panel": 1,
            "walls": 1,
        }

    def test_single_token_run_counted_once(self):
        assert dict(extract_terms("the valve")) == {"valve": 1}

    def test_long_run_sliding_windows(self):
        words = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta"]
        got = extract_terms(" ".join(words))
        assert got[" ".join(words[0:6])] == 1
        assert got[" ".join(words[1:7])] == 1
        assert " ".join(words) not in got
        for w in words:
            assert got[w] == 1

    def test_repeated_run_counts_twice(self):
        got = extract_terms("rolling toy and rolling toy")
        assert got["rolling toy"] == 2
        assert got["rolling"] == 2

    def test_no_stopword_ever_emitted(self):
        rng = random.Random(3)
        vocab = ["valve", "for", "the", "pump", "with", "seal", "under", "of"]
        for _ in range(200):
            text = " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 15)))
            for term in extract_terms(text):
                assert not (set(term.split()) & STOPWORDS), term

    def test_term_shape_invariants(self):
        got = extract_terms("A very long保-持 mechanism for water-proof sealing systems")
        for term in got:
            assert term == term.lower()
            assert 1 <= len(term.split()) <= 6


class TestTermFrequencies:
    def test_two_identical_titles(self):
        index = make_index(("rolling toy", "", "A63H 1/00"), ("rolling toy", "", "A63H 1/00"))
        profile = term_frequencies({"p0", "p1"}, index)
        assert profile.counts == {"rolling toy": 2, "rolling": 2, "toy": 2}

    def test_empty_scope(self):
        index = make_index(("rolling toy", "", "A63H 1/00"))
        assert term_frequencies(set(), index).counts == {}

    def test_single_patent_equals_extraction(self):
        index = make_index(("gear pump", "with bearing seal", "B60K 1/00"))
        profile = term_frequencies({"p0"}, index)
        merged = extract_terms("gear pump")
        merged.update(extract_terms("with bearing seal"))
        assert profile.counts == dict(merged)

    def test_unknown_id_named(self):
        index = make_index(("gear pump", "", "B60K 1/00"))
        with pytest.raises(TermError, match="nope"):
            term_frequencies({"nope"}, index)

    def test_scope_order_invariance(self):
        rng = random.Random(5)
        index = build_corpus_index(to_records(random_corpus(rng, 60, with_text=True)))
        ids = list(index.records)
        a = term_frequencies(ids, index)
        rng.shuffle(ids)
        b = term_frequencies(ids, index)
        assert a.counts == b.counts

    def test_union_scope_additivity(self):
        rng = random.Random(6)
        index = build_corpus_index(to_records(random_corpus(rng, 60, with_text=True)))
        ids = sorted(index.records)
        half = len(ids) // 2
        left = term_frequencies(ids[:half], index).counts
        right = term_frequencies(ids[half:], index).counts
        union = term_frequencies(ids, index).counts
        summed = dict(left)
        for term, count in right.items():
            summed[term] = summed.get(term, 0) + count
        assert union == summed


class TestRankTerms:
    def test_frequency_tie_lexicographic(self):
        profile = TermProfile(scope="B60", counts={"b": 3, "a": 3})
        assert rank_terms(profile, "frequency", 2) == [("a", 3.0), ("b", 3.0)]

    def test_top_k_cutoff(self):
        profile = TermProfile(scope="B60", counts={"a": 1, "b": 5, "c": 3})
        assert rank_terms(profile, "frequency", 2) == [("b", 5.0), ("c", 3.0)]

    def test_tfidf_ubiquitous_term_scores_zero(self):
        index = make_index(("gear pump", "", "B60K 1/00"), ("gear valve", "", "A63H 1/00"))
        registry = build_field_registry(index, 3)
        ranked = dict(rank_terms(registry.profiles["B60"], "tfidf", 10, registry=registry))
        assert ranked["gear"] == 0.0

    def test_tfidf_hand_value(self):
        # two fields, term in one of them with count 4 -> 4 * ln 2
        index = make_index(
            ("seal seal seal seal", "", "B60K 1/00"),
            ("gear valve", "", "A63H 1/00"),
        )
        registry = build_field_registry(index, 3)
        ranked = dict(rank_terms(registry.profiles["B60"], "tfidf", 10, registry=registry))
        assert ranked["seal"] == pytest.approx(4 * math.log(2), abs=1e-12)
        assert ranked["seal"] == pytest.approx(2.772588722239781, abs=1e-6)

    def test_tfidf_without_registry(self):
        with pytest.raises(TermError, match="registry"):
            rank_terms(TermProfile(scope="B60", counts={"a": 1}), "tfidf", 3)

    def test_unknown_mode(self):
        with pytest.raises(TermError):
            rank_terms(TermProfile(scope="B60", counts={}), "embedding", 3)


class TestRegistry:
    def test_docfreq_counts_fields_not_patents(self):
        index = make_index(
            ("gear pump", "", "B60K 1/00"),
            ("gear pump", "", "B60K 2/00"),
            ("gear seal", "", "A63H 1/00"),
        )
        registry = build_field_registry(index, 3)
        assert registry.n_fields == 2
        assert registry.docfreq["gear"] == 2
        assert registry.docfreq["pump"] == 1

    def test_stopword_hash_is_stable(self):
        assert stopwords_sha256() == stopwords_sha256()
        assert len(stopwords_sha256()) == 64
