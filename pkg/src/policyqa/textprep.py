"""Tokenization, lemmatization, and stop-word handling.

Every retrieval component in this package funnels text through these
functions, so they are deliberately rule-based and deterministic: the same
input always produces the same tokens, with no model or locale dependency.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

__all__ = [
    "Token",
    "StopwordList",
    "tokenize",
    "lemmatize",
    "remove_stopwords",
    "prepare_text",
    "content_lemmas",
    "load_stopwords",
    "default_stopwords",
]

# Maximal runs of alphanumeric characters, allowing internal hyphens and
# apostrophes ("stop-word", "password's"). Underscore is punctuation here.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’’-][^\W_]+)*", re.UNICODE)

_VOWELS = set("aeiou")


@dataclass(frozen=True)
class Token:
    """One token of a text, addressable by character offsets."""

    surface: str
    start_offset: int
    end_offset: int
    lemma: str = ""
    is_stopword: bool = False


@dataclass(frozen=True)
class StopwordList:
    """Immutable set of lowercase stop words."""

    words: frozenset[str]

    def __post_init__(self) -> None:
        if not self.words:
            raise ValueError("stop-word list must not be empty")
        bad = [w for w in self.words if w != w.lower() or any(c.isspace() for c in w)]
        if bad:
            raise ValueError(f"stop words must be lowercase without whitespace: {bad[:5]}")

    def __contains__(self, word: str) -> bool:
        return word in self.words


def load_stopwords(path: str | Path) -> StopwordList:
    """Read a stop-word file: one word per line, ``#`` starts a comment."""
    words = set()
    for raw_line in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if line:
            words.add(line.lower())
    return StopwordList(frozenset(words))


def _data_file(name: str):
    return resources.files("policyqa").joinpath("data", name)


def _load_exceptions() -> dict[str, str]:
    table = {}
    for line in _data_file("lemma_exceptions.tsv").read_text("utf-8").splitlines():
        if not line.strip():
            continue
        surface, lemma = line.split("\t")
        table[surface] = lemma
    return table


_EXCEPTIONS = _load_exceptions()
_DEFAULT_STOPWORDS: StopwordList | None = None


def default_stopwords() -> StopwordList:
    """The bundled English stop-word list, loaded once."""
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        with resources.as_file(_data_file("stopwords_en.txt")) as path:
            _DEFAULT_STOPWORDS = load_stopwords(path)
    return _DEFAULT_STOPWORDS


def tokenize(text: str) -> list[Token]:
    """Split text into tokens with exact character offsets.

    Lemma and stop-word fields are left unset; use :func:`prepare_text` to
    fill them.
    """
    return [
        Token(surface=m.group(), start_offset=m.start(), end_offset=m.end())
        for m in _TOKEN_RE.finditer(text)
    ]


def _undouble(stem: str) -> str:
    # "runn" -> "run"; keep ll/ss/zz endings ("fall", "kiss", "buzz").
    if (
        len(stem) >= 3
        and stem[-1] == stem[-2]
        and stem[-1] not in _VOWELS
        and stem[-1] not in "lsz"
        and stem[-1].isalpha()
    ):
        return stem[:-1]
    return stem


def lemmatize(surface: str) -> str:
    """Reduce a token to its lowercase dictionary form.

    Irregular forms come from a bundled exception table; the remainder is
    handled by ordered suffix rules. Tokens containing digits are returned
    unchanged so that target values like "60" survive preprocessing.
    """
    word = surface.lower()
    # possessives: "password's" -> "password", "employees'" -> "employees"
    if word.endswith(("'s", "’s")):
        word = word[:-2]
    elif word.endswith(("'", "’")):
        word = word[:-1]
    if any(ch.isdigit() for ch in word):
        return word
    if word in _EXCEPTIONS:
        return _EXCEPTIONS[word]
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("ied") and len(word) >= 5:
        return word[:-3] + "y"
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith(("xes", "ches", "shes", "zes")) and len(word) > 4:
        return word[:-2]
    if word.endswith("s") and not word.endswith(("ss", "us", "is")) and len(word) >= 4:
        return word[:-1]
    if word.endswith("ing") and len(word) >= 6:
        return _undouble(word[:-3])
    if word.endswith("ed") and not word.endswith("eed") and len(word) >= 5:
        return _undouble(word[:-2])
    return word


def remove_stopwords(tokens: list[Token], stopwords: StopwordList) -> list[Token]:
    """Drop tokens whose lowercase lemma is a stop word, preserving order.

    Tokens whose lemma is unset are judged by their lowercase surface.
    """
    kept = []
    for token in tokens:
        lemma = token.lemma or token.surface.lower()
        if lemma not in stopwords:
            kept.append(token)
    return kept


def prepare_text(text: str, stopwords: StopwordList | None = None) -> list[Token]:
    """Tokenize and fill lemma/stop-word fields on every token.

    Returns all tokens, flagged; filter on ``is_stopword`` for content terms.
    Numeric tokens are never flagged as stop words.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    prepared = []
    for token in tokenize(text):
        lemma = lemmatize(token.surface)
        numeric = any(ch.isdigit() for ch in token.surface)
        flagged = (not numeric) and lemma in stopwords
        prepared.append(replace(token, lemma=lemma, is_stopword=flagged))
    return prepared


def content_lemmas(text: str, stopwords: StopwordList | None = None) -> list[str]:
    """Lemmas of the non-stop-word tokens of ``text``, in order."""
    return [t.lemma for t in prepare_text(text, stopwords) if not t.is_stopword]
