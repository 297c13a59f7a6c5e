"""Lead-level extraction: who/what/when/where from a gazetteer and date
patterns, why from causal cue sentences."""
from __future__ import annotations

import re

from ..corpus import ArticleRecord
from ..textutil import iter_sentences, normalize_phrase, tokenize
from .model import LABEL_KIND, PlotPoint, Span, make_point
from .resources import GUARDED_CUES, CausalCueSet, Gazetteer

_MONTH = (
    r"(?:January|February|March|April|May|June|July|August|September|October|November|December"
    r"|Jan\.?|Feb\.?|Mar\.?|Apr\.?|Jun\.?|Jul\.?|Aug\.?|Sept?\.?|Oct\.?|Nov\.?|Dec\.?)"
)
_ORD = r"(?:st|nd|rd|th)?"
DATE_TIME_RE = re.compile(
    "|".join([
        r"\b\d{4}-\d{2}-\d{2}(?:T\d{2}:\d{2}(?::\d{2})?Z?)?\b",
        rf"\b\d{{1,2}}{_ORD} (?:of )?{_MONTH}(?:,? \d{{4}})?(?![\w])",
        rf"\b{_MONTH} \d{{1,2}}{_ORD}(?:, \d{{4}})?\b",
        rf"\b{_MONTH} \d{{4}}\b",
        r"\b\d{1,2}(?::\d{2})? ?(?i:am|pm|a\.m\.|p\.m\.)(?![\w])",
    ])
)

# only guarded cues need a following clause; the rest fire on sight
MIN_CLAUSE_TOKENS = 3


def _phrase_positions(words: list[str], phrase: tuple[str, ...]) -> list[int]:
    n = len(phrase)
    return [i for i in range(len(words) - n + 1) if tuple(words[i:i + n]) == phrase]


def _dedupe(points: list[PlotPoint]) -> list[PlotPoint]:
    seen = set()
    out = []
    for p in points:
        key = (p.kind, normalize_phrase(p.surface_text))
        if key in seen:
            continue
        seen.add(key)
        out.append(p)
    return out


def gazetteer_matches(text: str, gaz: Gazetteer) -> list[tuple[int, int, str]]:
    """Longest-match scan: ``(start, end, label)`` for each non-overlapping hit."""
    index = gaz.token_index()
    if not index:
        return []
    longest = max(len(k) for k in index)
    toks = tokenize(text)
    words = [t.text for t in toks]
    hits = []
    i = 0
    while i < len(toks):
        for n in range(min(longest, len(toks) - i), 0, -1):
            entry = index.get(tuple(words[i:i + n]))
            if entry is not None:
                hits.append((toks[i].start, toks[i + n - 1].end, entry[1]))
                i += n
                break
        else:
            i += 1
    return hits


def extract_why(article: ArticleRecord, cues: CausalCueSet) -> list[PlotPoint]:
    """One Why point per sentence that carries a causal cue.

    Ambiguous function-word cues (for, as, of, since, after) only count when at
    least three tokens follow them in the sentence.
    """
    cue_tokens = [(c, tuple(t.text for t in tokenize(c))) for c in cues.cues]
    points = []
    for sent in iter_sentences(list(article.paragraphs)):
        words = [t.text.lower() for t in tokenize(sent.text)]
        fired = False
        for cue, ctoks in cue_tokens:
            if not ctoks:
                continue
            for pos in _phrase_positions(words, ctoks):
                tail = len(words) - (pos + len(ctoks))
                if cue in GUARDED_CUES and tail < MIN_CLAUSE_TOKENS:
                    continue
                fired = True
                break
            if fired:
                break
        if fired:
            points.append(make_point(article.id, "Why", sent.text, Span(sent.paragraph, sent.start, sent.end)))
    return points


def extract_lead(
    article: ArticleRecord,
    gaz: Gazetteer,
    cues: CausalCueSet,
    ner=None,
) -> list[PlotPoint]:
    """Who/What/When/Where from gazetteer and date-pattern matches, plus Why.

    ``ner`` is an optional remote annotator (see :mod:`.remote`); its entities
    are used wherever they do not overlap a gazetteer hit.
    """
    found: list[tuple[int, int, int, str]] = []  # (paragraph, start, end, kind)
    for p, para in enumerate(article.paragraphs):
        taken: list[tuple[int, int]] = []

        def free(s, e):
            return all(e <= a or s >= b for a, b in taken)

        for s, e, label in gazetteer_matches(para, gaz):
            taken.append((s, e))
            found.append((p, s, e, LABEL_KIND[label]))
        if ner is not None:
            for ent in ner.annotate(para):
                kind = LABEL_KIND.get(ent.get("label", ""))
                s, e = int(ent.get("start", -1)), int(ent.get("end", -1))
                if kind and 0 <= s < e <= len(para) and free(s, e):
                    taken.append((s, e))
                    found.append((p, s, e, kind))
        for m in DATE_TIME_RE.finditer(para):
            if free(m.start(), m.end()):
                taken.append((m.start(), m.end()))
                found.append((p, m.start(), m.end(), "When"))

    found.sort()
    points = [
        make_point(article.id, kind, article.paragraphs[p][s:e], Span(p, s, e))
        for p, s, e, kind in found
    ]
    points.extend(extract_why(article, cues))
    return _dedupe(points)
