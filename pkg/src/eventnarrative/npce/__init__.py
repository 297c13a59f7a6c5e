"""Plot-point extraction over the three pyramid levels (Lead, Body, Tail)."""
from .body import cluster_sentences, extract_evidence, extract_media, extract_quotes
from .lead import extract_lead, extract_why, gazetteer_matches
from .model import (
    BODY_KINDS, KINDS, LEAD_KINDS, LEVEL_OF, TAIL_KINDS,
    Diagnostic, ExtractionResult, PlotPoint, Span, make_point,
)
from .pipeline import NpceResources, run_npce, run_with
from .resources import CausalCueSet, Gazetteer, SentimentLexicon, TacticRule, TacticRuleSet, load_terms
from .tail import extract_opinions, extract_sentiment, extract_tactics

__all__ = [
    "BODY_KINDS", "KINDS", "LEAD_KINDS", "LEVEL_OF", "TAIL_KINDS",
    "CausalCueSet", "Diagnostic", "ExtractionResult", "Gazetteer", "NpceResources",
    "PlotPoint", "SentimentLexicon", "Span", "TacticRule", "TacticRuleSet",
    "cluster_sentences", "extract_evidence", "extract_lead", "extract_media",
    "extract_opinions", "extract_quotes", "extract_sentiment", "extract_tactics",
    "extract_why", "gazetteer_matches", "load_terms", "make_point", "run_npce", "run_with",
]
