from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..corpus import ArticleRecord
from .body import MIN_QUOTE_WORDS, extract_evidence, extract_media, extract_quotes
from .lead import extract_lead
from .model import Diagnostic, ExtractionResult
from .resources import DEFAULT_OPINION_CUES, CausalCueSet, Gazetteer, SentimentLexicon, TacticRuleSet
from .tail import extract_opinions, extract_sentiment, extract_tactics

DEFAULT_EVIDENCE_K = 4


@dataclass(frozen=True)
class NpceResources:
    """Everything the extractor needs besides the article. Immutable, shareable."""

    gazetteer: Gazetteer = field(default_factory=Gazetteer)
    cues: CausalCueSet = field(default_factory=CausalCueSet)
    lexicon: SentimentLexicon = field(default_factory=SentimentLexicon.default)
    tactics: TacticRuleSet = field(default_factory=TacticRuleSet.default)
    opinion_cues: Sequence[str] = DEFAULT_OPINION_CUES
    evidence_k: int = DEFAULT_EVIDENCE_K
    min_quote_words: int = MIN_QUOTE_WORDS
    ner: Optional[object] = None
    tactic_classifier: Optional[object] = None


def run_npce(
    article: ArticleRecord,
    gaz: Gazetteer,
    cues: CausalCueSet,
    lex: SentimentLexicon,
    rules: TacticRuleSet,
    k: int = DEFAULT_EVIDENCE_K,
    *,
    opinion_cues: Sequence[str] = DEFAULT_OPINION_CUES,
    min_quote_words: int = MIN_QUOTE_WORDS,
    ner=None,
    tactic_classifier=None,
) -> ExtractionResult:
    """Run every extractor over one article, Lead then Body then Tail."""
    diagnostics: list[Diagnostic] = []
    points = []
    points += extract_lead(article, gaz, cues, ner=ner)
    points += extract_evidence(article, k)
    points += extract_quotes(article, min_quote_words, diagnostics)
    points += extract_media(article)
    points += extract_opinions(article, opinion_cues)
    points += extract_tactics(article, rules, tactic_classifier)
    points.append(extract_sentiment(article, lex))

    unique = []
    seen = set()
    for p in points:
        if p.id not in seen:
            seen.add(p.id)
            unique.append(p)
    return ExtractionResult(article.id, unique, {article.id: [p.id for p in unique]}, diagnostics)


def run_with(article: ArticleRecord, res: NpceResources) -> ExtractionResult:
    return run_npce(
        article, res.gazetteer, res.cues, res.lexicon, res.tactics, res.evidence_k,
        opinion_cues=res.opinion_cues, min_quote_words=res.min_quote_words,
        ner=res.ner, tactic_classifier=res.tactic_classifier,
    )
