"""Tokenization, sentence splitting and phrase matching helpers.

Every extractor and metric in the package goes through these functions so
that "the same word" means the same thing everywhere.
"""
from __future__ import annotations

import re
from typing import Iterator, NamedTuple

# word tokens keep internal dots, hyphens and apostrophes: "U.S", "Paul-Henri", "don't"
WORD_RE = re.compile(r"\w+(?:[.'’\-]\w+)*")

_TERMINAL_RE = re.compile(r"[.!?]+[\"'”’)\]]*")
_OPENERS = "\"'“‘(["

ABBREVIATIONS = frozenset(
    """
    mr mrs ms dr st jr sr prof gen sen rep gov lt col capt sgt cmdr adm maj
    u.s u.k u.n e.g i.e etc vs no inc co corp ltd dept est approx fig
    jan feb mar apr jun jul aug sep sept oct nov dec mt ft
    """.split()
)


class Token(NamedTuple):
    text: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    return [Token(m.group(), m.start(), m.end()) for m in WORD_RE.finditer(text)]


def _is_abbreviation(text: str, dot_index: int) -> bool:
    i = dot_index
    while i > 0 and not text[i - 1].isspace():
        i -= 1
    word = text[i:dot_index].lstrip(_OPENERS)
    if not word:
        return False
    if len(word) == 1 and word.isupper():
        return True  # initials: "J. Smith"
    return word.lower() in ABBREVIATIONS


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Split ``text`` into sentences, returning ``(start, end)`` offsets.

    A boundary is terminal punctuation (plus any closing quotes/brackets)
    followed by whitespace and then an uppercase letter or an opening quote.
    A single period after a known abbreviation or an initial is not a boundary.
    Offsets exclude surrounding whitespace.
    """
    spans: list[tuple[int, int]] = []
    start = 0
    n = len(text)
    for m in _TERMINAL_RE.finditer(text):
        end = m.end()
        j = end
        while j < n and text[j].isspace():
            j += 1
        if j == end or j >= n:
            continue
        nxt = text[j]
        if not (nxt.isupper() or nxt in _OPENERS):
            continue
        if m.group().startswith(".") and m.group().rstrip("\"'”’)]") == "." and _is_abbreviation(text, m.start()):
            continue
        spans.append((start, end))
        start = j
    spans.append((start, n))
    out = []
    for s, e in spans:
        while s < e and text[s].isspace():
            s += 1
        while e > s and text[e - 1].isspace():
            e -= 1
        if e > s:
            out.append((s, e))
    return out


def split_sentences(text: str) -> list[str]:
    return [text[s:e] for s, e in sentence_spans(text)]


class Sentence(NamedTuple):
    index: int
    paragraph: int
    start: int
    end: int
    text: str


def iter_sentences(paragraphs: list[str]) -> Iterator[Sentence]:
    """Sentences of an article in document order, indexed article-wide."""
    k = 0
    for p, para in enumerate(paragraphs):
        for s, e in sentence_spans(para):
            yield Sentence(k, p, s, e, para[s:e])
            k += 1


_NON_ALNUM = re.compile(r"[^\w]+|_+")


def normalize_phrase(text: str) -> str:
    """Case-fold and reduce every run of non-alphanumerics to one space.

    "East-Palestine," and "east palestine" normalize identically.
    """
    return " ".join(_NON_ALNUM.sub(" ", text.casefold()).split())


def contains_phrase(text: str, phrase: str) -> bool:
    """Whole-phrase, case-insensitive, punctuation-tolerant containment."""
    needle = normalize_phrase(phrase)
    if not needle:
        return False
    return f" {needle} " in f" {normalize_phrase(text)} "


def word_count(text: str) -> int:
    return len(text.split())


def truncate_words(text: str, cap: int) -> str:
    """Longest prefix of whole sentences within ``cap`` words.

    When even the first sentence is longer than ``cap`` the text is hard-cut
    at ``cap`` words instead of returning nothing.
    """
    if word_count(text) <= cap:
        return text.strip()
    kept: list[str] = []
    used = 0
    for sentence in split_sentences(text):
        n = word_count(sentence)
        if used + n > cap:
            break
        kept.append(sentence)
        used += n
    if kept:
        return " ".join(kept)
    return " ".join(text.split()[:cap])
