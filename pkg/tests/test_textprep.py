from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from policyqa.textprep import (
    StopwordList,
    content_lemmas,
    default_stopwords,
    lemmatize,
    load_stopwords,
    prepare_text,
    remove_stopwords,
    tokenize,
)


class TestTokenize:
    def test_simple_sentence(self):
        tokens = tokenize("The password needs changing.")
        assert [t.surface for t in tokens] == ["The", "password", "needs", "changing"]

    def test_offsets_address_the_source(self):
        text = "Rotate keys every 90 days; review quarterly."
        for token in tokenize(text):
            assert text[token.start_offset : token.end_offset] == token.surface

    def test_numbers_and_units_split(self):
        tokens = tokenize("60 days")
        assert [(t.surface, t.start_offset, t.end_offset) for t in tokens] == [
            ("60", 0, 2),
            ("days", 3, 7),
        ]

    def test_punctuation_is_boundary_not_token(self):
        surfaces = [t.surface for t in tokenize("yes; no, maybe? (sure!)")]
        assert surfaces == ["yes", "no", "maybe", "sure"]

    def test_internal_hyphen_and_apostrophe_kept(self):
        surfaces = [t.surface for t in tokenize("state-of-the-art isn't plug-and-play")]
        assert "state-of-the-art" in surfaces
        assert "isn't" in surfaces

    def test_empty_and_whitespace(self):
        assert tokenize("") == []
        assert tokenize("  \n\t ") == []

    @given(st.text(max_size=200))
    @settings(max_examples=200)
    def test_offsets_always_honest(self, text):
        for token in tokenize(text):
            assert text[token.start_offset : token.end_offset] == token.surface

    @given(st.text(max_size=200))
    def test_tokens_ordered_and_disjoint(self, text):
        tokens = tokenize(text)
        for first, second in zip(tokens, tokens[1:]):
            assert first.end_offset <= second.start_offset


class TestLemmatize:
    @pytest.mark.parametrize(
        "surface,lemma",
        [
            ("cars", "car"),
            ("policies", "policy"),
            ("passwords", "password"),
            ("changed", "change"),
            ("changing", "change"),
            ("needs", "need"),
            ("is", "be"),
            ("was", "be"),
            ("are", "be"),
            ("has", "have"),
            ("said", "say"),
            ("days", "day"),
            ("required", "require"),
            ("using", "use"),
            ("stored", "store"),
            ("goes", "go"),
            ("statuses", "status"),
            ("stopped", "stop"),
            ("running", "run"),
            ("men", "man"),
        ],
    )
    def test_known_pairs(self, surface, lemma):
        assert lemmatize(surface) == lemma

    def test_lowercases(self):
        assert lemmatize("Password") == "password"
        assert lemmatize("POLICIES") == "policy"

    def test_possessive_stripped(self):
        assert lemmatize("password's") == "password"
        assert lemmatize("companies'") == "company"

    def test_tokens_with_digits_unchanged(self):
        assert lemmatize("60") == "60"
        assert lemmatize("90-day") == "90-day"
        assert lemmatize("ipv6") == "ipv6"

    def test_short_words_protected(self):
        # the s-rule never fires on very short or -ss/-us/-is words
        assert lemmatize("gas") == "gas"
        assert lemmatize("pass") == "pass"
        assert lemmatize("this") == "this"
        assert lemmatize("virus") == "virus"
        assert lemmatize("analysis") == "analysis"

    @given(st.text(alphabet=st.characters(whitelist_categories=("Ll",)), min_size=1, max_size=20))
    @settings(max_examples=300)
    def test_idempotent(self, word):
        once = lemmatize(word)
        assert lemmatize(once) == once

    def test_deterministic(self):
        words = ["changed", "policies", "was", "running", "keys"]
        assert [lemmatize(w) for w in words] == [lemmatize(w) for w in words]


class TestStopwords:
    def test_default_list_loads_once(self):
        first = default_stopwords()
        second = default_stopwords()
        assert first is second
        assert "the" in first
        assert "password" not in first

    def test_load_custom_list(self, tmp_path):
        path = tmp_path / "stops.txt"
        path.write_text("# comment\nfoo\nbar\n\n", encoding="utf-8")
        stops = load_stopwords(path)
        assert "foo" in stops and "bar" in stops
        assert len(stops.words) == 2

    def test_rejects_uppercase_entries(self):
        with pytest.raises(ValueError):
            StopwordList(words=frozenset({"The"}))

    def test_rejects_empty_list(self):
        with pytest.raises(ValueError):
            StopwordList(words=frozenset())

    def test_remove_stopwords_keeps_order(self):
        tokens = prepare_text("The password needs to be changed")
        kept = remove_stopwords(tokens, default_stopwords())
        assert [t.lemma for t in kept] == ["password", "need", "change"]

    def test_removal_is_a_subsequence(self):
        tokens = prepare_text("All the files in the system are scanned")
        kept = remove_stopwords(tokens, default_stopwords())
        it = iter(tokens)
        assert all(any(k is t for t in it) for k in kept)


class TestPrepareText:
    def test_question_content_lemmas(self):
        lemmas = content_lemmas(
            "What is the password's maximum age according to the password policy?"
        )
        assert lemmas == ["password", "maximum", "age", "accord", "password", "policy"]

    def test_evidence_sentence_lemmas(self):
        lemmas = content_lemmas(
            "The password needs to be changed after a maximum time duration of 60 days."
        )
        assert lemmas == [
            "password", "need", "change", "maximum", "time", "duration", "60", "day",
        ]

    def test_numeric_tokens_never_stopwords(self):
        tokens = prepare_text("In 2 of 3 cases")
        numeric = [t for t in tokens if t.surface.isdigit()]
        assert numeric and all(not t.is_stopword for t in numeric)

    def test_tokens_carry_lemma_and_flag(self):
        tokens = prepare_text("The passwords were rotated.")
        by_surface = {t.surface: t for t in tokens}
        assert by_surface["The"].is_stopword
        assert by_surface["passwords"].lemma == "password"
        assert not by_surface["passwords"].is_stopword

    @given(st.text(max_size=150))
    @settings(max_examples=150)
    def test_prepare_matches_tokenize(self, text):
        assert [t.surface for t in prepare_text(text)] == [
            t.surface for t in tokenize(text)
        ]
