"""Tail-level extraction: sentiment, persuasion tactics and opinions."""
from __future__ import annotations

import re
from typing import Iterable

from ..corpus import ArticleRecord
from ..textutil import iter_sentences, sentence_spans, tokenize
from .model import PlotPoint, Span, make_point
from .resources import DEFAULT_OPINION_CUES, SentimentLexicon, TacticRuleSet

_CLAUSE_END = re.compile(r"[,;:]")
_TRIM = " \t.!?\"'“”‘’)("


def _count_phrase(words: list[str], phrase: tuple[str, ...]) -> int:
    n = len(phrase)
    return sum(1 for i in range(len(words) - n + 1) if tuple(words[i:i + n]) == phrase)


def polarity(text: str, lex: SentimentLexicon) -> tuple[float, int, int]:
    words = [t.text.lower() for t in tokenize(text)]
    counts = {}
    for term in lex.positive | lex.negative:
        counts[term] = _count_phrase(words, tuple(t.text.lower() for t in tokenize(term)))
    pos = sum(counts[t] for t in lex.positive)
    neg = sum(counts[t] for t in lex.negative)
    return (pos - neg) / max(1, pos + neg), pos, neg


def sentiment_label(score: float, lex: SentimentLexicon) -> str:
    if score <= lex.neg_cut:
        return "negative"
    if score >= lex.pos_cut:
        return "positive"
    return "neutral"


def extract_sentiment(article: ArticleRecord, lex: SentimentLexicon) -> PlotPoint:
    score, pos, neg = polarity(article.body_text, lex)
    return make_point(
        article.id, "Sentiment", sentiment_label(score, lex),
        polarity=score, positive_hits=pos, negative_hits=neg,
    )


def _snippet(para: str, start: int, end: int) -> tuple[int, int]:
    """Widen a match to whole words and run it to the end of its clause."""
    while start > 0 and (para[start - 1].isalnum() or para[start - 1] in "-'’"):
        start -= 1
    sent_end = next((e for s, e in sentence_spans(para) if s <= start < e), len(para))
    stop = _CLAUSE_END.search(para, end, sent_end)
    stop_at = stop.start() if stop else sent_end
    while stop_at > start and para[stop_at - 1] in _TRIM:
        stop_at -= 1
    return start, max(stop_at, end)


def extract_tactics(article: ArticleRecord, rules: TacticRuleSet, classifier=None) -> list[PlotPoint]:
    """Multi-label persuasion tactics per paragraph.

    Each rule contributes at most one point per paragraph: the earliest match
    of any of its patterns, widened to a clause snippet. ``classifier`` is an
    optional remote annotator whose entity labels are tactic names.
    """
    compiled = [(r.label, r.compiled()) for r in rules.rules]
    points = []
    for p, para in enumerate(article.paragraphs):
        labels_seen = set()
        for label, patterns in compiled:
            best = None
            for pat in patterns:
                for m in pat.finditer(para):
                    if m.end() > m.start():
                        if best is None or m.start() < best[0]:
                            best = (m.start(), m.end())
                        break
            if best is None:
                continue
            s, e = _snippet(para, *best)
            labels_seen.add(label)
            points.append(make_point(article.id, "PersTactic", para[s:e], Span(p, s, e), label=label))
        if classifier is not None:
            for ent in classifier.annotate(para):
                label = ent.get("label")
                s, e = int(ent.get("start", -1)), int(ent.get("end", -1))
                if not label or label in labels_seen or not 0 <= s < e <= len(para):
                    continue
                labels_seen.add(label)
                points.append(make_point(article.id, "PersTactic", para[s:e], Span(p, s, e), label=label))
    return points


def extract_opinions(article: ArticleRecord, subjective_cues: Iterable[str] = DEFAULT_OPINION_CUES) -> list[PlotPoint]:
    cue_tokens = [tuple(t.text.lower() for t in tokenize(c)) for c in subjective_cues]
    cue_tokens = [c for c in cue_tokens if c]
    points = []
    for sent in iter_sentences(list(article.paragraphs)):
        words = [t.text.lower() for t in tokenize(sent.text)]
        if any(_count_phrase(words, c) for c in cue_tokens):
            points.append(make_point(article.id, "Opinion", sent.text, Span(sent.paragraph, sent.start, sent.end)))
    return points
