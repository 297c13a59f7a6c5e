"""Narrative prompt sets retrieved from the graph, and their keyword prompts."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import EmptyRetrieval, EmptySection
from ..graph import Graph, leaf_class, term_key
from ..sparql import Var, execute, level_template
from ..textutil import normalize_phrase

SECTIONS = ("lead", "body", "tail")

# pyramid order of leaf classes; keywords are sorted by this, then by value
CLASS_ORDER = (
    "Who", "What", "When", "Where", "Why",
    "Evidence", "Quote", "MediaObject",
    "Opinion", "PersTactic", "Sentiment",
)
DEFAULT_LEAD_CLASSES = ("Who", "What", "When", "Where", "Why")
DEFAULT_BODY_CLASSES = ("Evidence", "Quote")
DEFAULT_TAIL_CLASSES = ("PersTactic",)

PROMPT_TEMPLATE_VERSION = "1"
INSTRUCTIONS = {
    "lead": "Write the lead of an intelligence report on who, what, when, where and why, using these keywords",
    "body": "Write the body of an intelligence report on the evidence and statements, using these keywords",
    "tail": "Write a brief closing remark on how the event was framed, using these keywords",
}
_POINT, _VALUE = Var("point"), Var("value")
_PROMPT_RE = re.compile(r"^(?P<instruction>.*?): <(?P<body>.*)>$", re.DOTALL)


@dataclass
class NarrativePromptSet:
    event_query: str
    lead: tuple[str, ...] = ()
    body: tuple[str, ...] = ()
    tail: tuple[str, ...] = ()
    # section -> keyword -> plot point IRI
    provenance: dict[str, dict[str, str]] = field(default_factory=dict)

    def keywords(self, section: str) -> tuple[str, ...]:
        if section not in SECTIONS:
            raise ValueError(f"unknown section {section!r}")
        return getattr(self, section)

    def is_empty(self) -> bool:
        return not (self.lead or self.body or self.tail)

    def to_dict(self) -> dict:
        return {
            "event_query": self.event_query,
            "lead": list(self.lead),
            "body": list(self.body),
            "tail": list(self.tail),
            "provenance": self.provenance,
        }


def _section_keywords(g: Graph, section: str, event: str, classes, raw: bool):
    rows = []
    for row in execute(g, level_template(section, event, raw)):
        point, value = row.get(_POINT), row.get(_VALUE)
        if point is None or value is None:
            continue
        cls = leaf_class(g, point)
        if cls not in classes:
            continue
        rows.append((CLASS_ORDER.index(cls), term_key(value), point.value, str(value)))
    rows.sort()
    keywords: list[str] = []
    provenance: dict[str, str] = {}
    seen = set()
    for _, _, iri, value in rows:
        norm = normalize_phrase(value) or value.casefold()
        if not value.strip() or norm in seen:
            continue
        seen.add(norm)
        keywords.append(value)
        provenance[value] = iri
    return tuple(keywords), provenance


def build_prompt_set(
    g: Graph,
    event: str,
    *,
    lead_classes=DEFAULT_LEAD_CLASSES,
    body_classes=DEFAULT_BODY_CLASSES,
    tail_classes=DEFAULT_TAIL_CLASSES,
    raw: bool = False,
) -> NarrativePromptSet:
    """Run the three level templates and keep the values of the selected classes.

    Keywords are deduplicated case- and punctuation-insensitively; the first
    in (class order, value order) wins and supplies the provenance IRI.
    Raises EmptyRetrieval when every section comes back empty.
    """
    if not event:
        raise ValueError("event must be non-empty")
    ps = NarrativePromptSet(event)
    for section, classes in (("lead", lead_classes), ("body", body_classes), ("tail", tail_classes)):
        kws, prov = _section_keywords(g, section, event, tuple(classes), raw)
        setattr(ps, section, kws)
        ps.provenance[section] = prov
    if ps.is_empty():
        raise EmptyRetrieval(f"no plot points retrieved for event {event!r}")
    return ps


def linearize(ps: NarrativePromptSet, section: str) -> str:
    keywords = ps.keywords(section)
    if not keywords:
        raise EmptySection(f"{section} section of {ps.event_query!r} has no keywords")
    return f"{INSTRUCTIONS[section]}: <{', '.join(keywords)}>"


def split_prompt(prompt: str) -> tuple[str, list[str]]:
    """Inverse of :func:`linearize` up to commas inside keywords:
    ``(instruction, comma-separated pieces)``."""
    m = _PROMPT_RE.match(prompt.strip())
    if not m:
        return "", [prompt.strip()] if prompt.strip() else []
    body = m.group("body")
    return m.group("instruction"), [p for p in body.split(", ")] if body else []


def section_of_instruction(instruction: str):
    for section, text in INSTRUCTIONS.items():
        if instruction == text:
            return section
    return None


def keyword_points(ps: NarrativePromptSet, section: str) -> list[str]:
    return [ps.provenance.get(section, {}).get(k) for k in ps.keywords(section)]


__all__ = [
    "CLASS_ORDER", "INSTRUCTIONS", "PROMPT_TEMPLATE_VERSION", "SECTIONS",
    "NarrativePromptSet", "build_prompt_set", "linearize", "split_prompt",
]
