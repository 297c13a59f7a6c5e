"""RDF terms, the indexed triple store, Turtle I/O and the narrative ontology."""
from .ontology import (
    CLASSES, HAS_PLOT_POINT, HEADLINE, LEAF_CLASSES, LEVEL_CLASSES, NEWS_ARTICLE, SCHEMA, VALUE,
    article_iri, assert_article, assert_plot_point, check_wellformed, leaf_class,
    matching_articles, point_iri, subgraph_for_event,
)
from .store import Graph
from .terms import EPG, IRI, NARR, RDF, RDF_TYPE, TYPE, XSD, XSD_DATETIME, XSD_STRING, Literal, Term, Triple, narr, term_key
from .turtle import PREFIXES, parse_turtle, serialize_turtle

EventPlotGraph = Graph

__all__ = [
    "CLASSES", "EPG", "HAS_PLOT_POINT", "HEADLINE", "IRI", "LEAF_CLASSES", "LEVEL_CLASSES", "Literal",
    "NARR", "NEWS_ARTICLE", "PREFIXES", "RDF", "RDF_TYPE", "SCHEMA", "TYPE", "Term", "Triple",
    "VALUE", "XSD", "XSD_DATETIME", "XSD_STRING", "EventPlotGraph", "Graph",
    "article_iri", "assert_article", "assert_plot_point", "check_wellformed", "leaf_class",
    "matching_articles", "narr", "parse_turtle", "point_iri", "serialize_turtle",
    "subgraph_for_event", "term_key",
]
