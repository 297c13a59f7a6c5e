"""Body-level extraction: quotes, evidence sentences and media objects."""
from __future__ import annotations

import logging
import re
from typing import Optional

import numpy as np

from ..corpus import ArticleRecord
from ..errors import UnbalancedQuotes
from ..textutil import iter_sentences, sentence_spans
from .model import Diagnostic, PlotPoint, Span, make_point
from .resources import STOPWORDS

logger = logging.getLogger(__name__)

QUOTE_CHARS = "\"“”"
MIN_QUOTE_WORDS = 3
MAX_ITERATIONS = 50
# similarities closer than this are ties, broken by the lower index
TIE_TOLERANCE = 1e-12

_SPEECH = r"(?:said|says|say|stated|states|told|added|claimed|claims|wrote|warned|announced|insisted|according to)"
_LEADING_ATTRIBUTION = re.compile(rf"\b{_SPEECH}\b[\s,:]*(?:that\s+|it\s+)?$", re.IGNORECASE)
_TRAILING_ATTRIBUTION = re.compile(rf"^,?\s*(?:[\w.'’-]+\s+){{1,4}}?{_SPEECH}\b", re.IGNORECASE)
_ALPHA = re.compile(r"[a-z]+")


def extract_quotes(
    article: ArticleRecord,
    min_words: int = MIN_QUOTE_WORDS,
    diagnostics: Optional[list] = None,
) -> list[PlotPoint]:
    """Quoted spans of at least ``min_words`` words, with same-sentence attribution.

    Quote marks are paired left to right within a paragraph; an odd count
    leaves the last mark unpaired and records an UnbalancedQuotes diagnostic.
    """
    points = []
    for p, para in enumerate(article.paragraphs):
        marks = [i for i, ch in enumerate(para) if ch in QUOTE_CHARS]
        if len(marks) % 2:
            err = UnbalancedQuotes(p, len(marks))
            logger.warning("%s: %s", article.id, err)
            if diagnostics is not None:
                diagnostics.append(Diagnostic(article.id, "UnbalancedQuotes", str(err)))
        sentences = sentence_spans(para)
        for a, b in zip(marks[0::2], marks[1::2]):
            inner = para[a + 1:b]
            if len(inner.split()) < min_words:
                continue
            sent_start, sent_end = next(((s, e) for s, e in sentences if s <= a < e), (a, b + 1))
            start, end = a, b + 1
            if _LEADING_ATTRIBUTION.search(para[sent_start:a]):
                start = sent_start
            m = _TRAILING_ATTRIBUTION.match(para[b + 1:max(sent_end, b + 1)])
            if m:
                end = b + 1 + m.end()
            points.append(make_point(article.id, "Quote", para[start:end], Span(p, start, end)))
    return points


def _term_vectors(sentences: list[str]) -> np.ndarray:
    bags = []
    for s in sentences:
        bag: dict[str, int] = {}
        for w in _ALPHA.findall(s.lower()):
            if w not in STOPWORDS:
                bag[w] = bag.get(w, 0) + 1
        bags.append(bag)
    vocab = sorted({w for bag in bags for w in bag})
    col = {w: i for i, w in enumerate(vocab)}
    mat = np.zeros((len(sentences), len(vocab)))
    for r, bag in enumerate(bags):
        for w, c in bag.items():
            mat[r, col[w]] = c
    return mat


def _unit_rows(mat: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(mat, axis=1, keepdims=True)
    return np.divide(mat, norms, out=np.zeros_like(mat), where=norms > 0)


def cluster_sentences(sentences: list[str], k: int) -> list[int]:
    """Indices of the sentences nearest each cosine k-means centroid.

    Initial centroids are the first ``k`` sentences with distinct term
    vectors; assignment ties go to the lower centroid, selection ties to the
    lower sentence index, and each centroid claims a different sentence.
    """
    n = len(sentences)
    if n <= k:
        return list(range(n))
    mat = _term_vectors(sentences)
    unit = _unit_rows(mat)

    seeds: list[int] = []
    seen = set()
    for i in range(n):
        key = tuple(mat[i])
        if key not in seen:
            seen.add(key)
            seeds.append(i)
        if len(seeds) == k:
            break
    for i in range(n):
        if len(seeds) == k:
            break
        if i not in seeds:
            seeds.append(i)
    centroids = unit[seeds].copy()

    def similarity(c: np.ndarray) -> np.ndarray:
        cn = np.linalg.norm(c, axis=1)
        sims = unit @ c.T
        return np.divide(sims, cn, out=np.zeros_like(sims), where=cn > 0)

    assign = None
    for _ in range(MAX_ITERATIONS):
        sims = similarity(centroids)
        new_assign = np.argmax(sims >= sims.max(axis=1, keepdims=True) - TIE_TOLERANCE, axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(k):
            members = unit[assign == j]
            if len(members):
                centroids[j] = members.mean(axis=0)

    sims = similarity(centroids)
    chosen: list[int] = []
    for j in range(k):
        free = [i for i in range(n) if i not in chosen]
        top = max(sims[i, j] for i in free)
        for i in free:
            if sims[i, j] >= top - TIE_TOLERANCE:
                chosen.append(i)
                break
    return sorted(chosen)


def extract_evidence(article: ArticleRecord, k: int = 4) -> list[PlotPoint]:
    if k < 1:
        raise ValueError("k must be >= 1")
    sents = list(iter_sentences(list(article.paragraphs)))
    picked = cluster_sentences([s.text for s in sents], k)
    return [
        make_point(article.id, "Evidence", sents[i].text, Span(sents[i].paragraph, sents[i].start, sents[i].end))
        for i in picked
    ]


_MEDIA_KIND = {"photo": "Photo", "video": "Video", "audio": "Audio"}


def extract_media(article: ArticleRecord) -> list[PlotPoint]:
    out = []
    seen = set()
    for kind, url in article.media_links:
        if (kind, url) in seen:
            continue
        seen.add((kind, url))
        out.append(make_point(article.id, _MEDIA_KIND[kind], url))
    return out
