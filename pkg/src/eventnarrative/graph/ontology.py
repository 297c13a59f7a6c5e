"""Narrative ontology schema and the operations that populate an event plot graph."""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..corpus import ArticleRecord, format_timestamp
from ..errors import InvalidRegex, UnknownArticle
from ..npce.model import PlotPoint
from .store import Graph
from .terms import EPG, IRI, NARR, TYPE, XSD_DATETIME, Literal, Triple, narr

# class -> parent; NewsArticle and PlotPoint are the roots
SUBCLASS_OF = {
    "Lead": "PlotPoint", "Body": "PlotPoint", "Tail": "PlotPoint",
    "Who": "Lead", "What": "Lead", "When": "Lead", "Where": "Lead", "Why": "Lead",
    "Evidence": "Body", "Quote": "Body", "MediaObject": "Body",
    "Opinion": "Tail", "PersTactic": "Tail", "Sentiment": "Tail",
}
CLASSES = ("NewsArticle", "PlotPoint") + tuple(SUBCLASS_OF)
LEAF_CLASSES = (
    "Who", "What", "When", "Where", "Why",
    "Evidence", "Quote", "MediaObject",
    "Opinion", "PersTactic", "Sentiment",
)
LEVEL_CLASSES = {
    "Lead": ("Who", "What", "When", "Where", "Why"),
    "Body": ("Evidence", "Quote", "MediaObject"),
    "Tail": ("Opinion", "PersTactic", "Sentiment"),
}
PROPERTIES = ("articleHeadline", "authorOfArticle", "publishedBy", "publishedDate", "hasPlotPoint", "value")

KIND_CLASS = {k: k for k in LEAF_CLASSES}
KIND_CLASS.update({"Photo": "MediaObject", "Video": "MediaObject", "Audio": "MediaObject"})

NEWS_ARTICLE = narr("NewsArticle")
PLOT_POINT = narr("PlotPoint")
HEADLINE = narr("articleHeadline")
AUTHOR = narr("authorOfArticle")
PUBLISHED_BY = narr("publishedBy")
PUBLISHED_DATE = narr("publishedDate")
HAS_PLOT_POINT = narr("hasPlotPoint")
VALUE = narr("value")


@dataclass(frozen=True)
class EnoSchema:
    subclass_of: dict

    def ancestors(self, cls: str) -> list[str]:
        chain = [cls]
        while chain[-1] in self.subclass_of:
            chain.append(self.subclass_of[chain[-1]])
        return chain

    def classes(self) -> tuple[str, ...]:
        return CLASSES


SCHEMA = EnoSchema(SUBCLASS_OF)


def article_iri(article_id: str) -> IRI:
    return IRI(f"{EPG}News{article_id}")


def point_iri(point_id: str) -> IRI:
    return IRI(f"{EPG}Point{point_id}")


def assert_article(g: Graph, a: ArticleRecord) -> IRI:
    node = article_iri(a.id)
    triples = [
        Triple(node, TYPE, NEWS_ARTICLE),
        Triple(node, HEADLINE, Literal(a.headline)),
        Triple(node, PUBLISHED_BY, Literal(a.source)),
    ]
    triples += [Triple(node, AUTHOR, Literal(name)) for name in a.authors]
    if a.published is not None:
        triples.append(Triple(node, PUBLISHED_DATE, Literal(format_timestamp(a.published), XSD_DATETIME)))
    g.add_all(triples)
    return node


def assert_plot_point(g: Graph, article: IRI, p: PlotPoint) -> IRI:
    """Type the point with its leaf class and every ancestor, attach its value,
    and link it from the article."""
    if not g.contains(article, TYPE, NEWS_ARTICLE):
        raise UnknownArticle(f"{article.value} is not typed narr:NewsArticle")
    node = point_iri(p.id)
    triples = [Triple(node, TYPE, narr(c)) for c in SCHEMA.ancestors(KIND_CLASS[p.kind])]
    triples.append(Triple(node, VALUE, Literal(p.surface_text)))
    triples.append(Triple(article, HAS_PLOT_POINT, node))
    g.add_all(triples)
    return node


def check_wellformed(g: Graph) -> list[str]:
    """Violations: plot points without exactly one leaf class or without an
    incoming hasPlotPoint edge from a news article."""
    point_classes = {narr(c) for c in ("PlotPoint",) + tuple(SUBCLASS_OF)}
    leaves = {narr(c) for c in LEAF_CLASSES}
    nodes = sorted({t.s for c in point_classes for t in g.triples(None, TYPE, c)}, key=lambda i: i.value)
    problems = []
    for node in nodes:
        types = {t.o for t in g.triples(node, TYPE, None)}
        n_leaf = len(types & leaves)
        if n_leaf != 1:
            problems.append(f"{node.value}: {n_leaf} leaf classes (expected 1)")
        parents = [t.s for t in g.triples(None, HAS_PLOT_POINT, node)]
        if not any(g.contains(s, TYPE, NEWS_ARTICLE) for s in parents):
            problems.append(f"{node.value}: no incoming hasPlotPoint from a NewsArticle")
    return problems


def compile_event_regex(event_query: str) -> re.Pattern:
    if not event_query:
        raise ValueError("event query must be non-empty")
    try:
        return re.compile(event_query, re.IGNORECASE)
    except re.error as exc:
        raise InvalidRegex(f"{event_query!r}: {exc}") from exc


def matching_articles(g: Graph, event_query: str) -> list[IRI]:
    rx = compile_event_regex(event_query)
    out = []
    for t in g.triples(None, TYPE, NEWS_ARTICLE):
        if any(rx.search(str(h)) for h in g.objects(t.s, HEADLINE)):
            out.append(t.s)
    return out


def subgraph_for_event(g: Graph, event_query: str) -> Graph:
    """Closure of the articles whose headline matches ``event_query``: their
    own triples plus every triple about a point they link to."""
    sub = Graph()
    for node in matching_articles(g, event_query):
        sub.add_all(g.triples(node, None, None))
        for edge in g.triples(node, HAS_PLOT_POINT, None):
            if isinstance(edge.o, IRI):
                sub.add_all(g.triples(edge.o, None, None))
    return sub


def leaf_class(g: Graph, node: IRI) -> str | None:
    for t in g.triples(node, TYPE, None):
        if isinstance(t.o, IRI) and t.o.value.startswith(NARR):
            local = t.o.value[len(NARR):]
            if local in LEAF_CLASSES:
                return local
    return None
