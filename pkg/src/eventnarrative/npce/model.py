from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

LEAD_KINDS = ("Who", "What", "When", "Where", "Why")
BODY_KINDS = ("Evidence", "Quote", "Photo", "Video", "Audio")
TAIL_KINDS = ("Opinion", "PersTactic", "Sentiment")
KINDS = LEAD_KINDS + BODY_KINDS + TAIL_KINDS

LEVEL_OF = {k: "Lead" for k in LEAD_KINDS}
LEVEL_OF.update({k: "Body" for k in BODY_KINDS})
LEVEL_OF.update({k: "Tail" for k in TAIL_KINDS})

# entity label -> 5W kind
LABEL_KIND = {
    "PERSON": "Who", "NORP": "Who", "ORG": "Who",
    "EVENT": "What", "FAC": "What", "PRODUCT": "What", "WORK_OF_ART": "What",
    "LAW": "What", "MONEY": "What", "LANGUAGE": "What", "PERCENT": "What",
    "QUANTITY": "What", "ORDINAL": "What", "CARDINAL": "What",
    "DATE": "When", "TIME": "When",
    "GPE": "Where", "LOC": "Where",
}
ENTITY_LABELS = tuple(LABEL_KIND)


@dataclass(frozen=True)
class Span:
    paragraph: int
    start: int
    end: int


@dataclass(frozen=True)
class PlotPoint:
    id: str
    article_id: str
    level: str
    kind: str
    surface_text: str
    span: Optional[Span] = None
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in LEVEL_OF:
            raise ValueError(f"unknown plot point kind {self.kind!r}")
        if LEVEL_OF[self.kind] != self.level:
            raise ValueError(f"{self.kind} belongs to {LEVEL_OF[self.kind]}, not {self.level}")
        if not self.surface_text:
            raise ValueError("surface_text must be non-empty")

    def __eq__(self, other):
        if not isinstance(other, PlotPoint):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(self.id)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "article_id": self.article_id,
            "level": self.level,
            "kind": self.kind,
            "surface_text": self.surface_text,
            "span": None if self.span is None else [self.span.paragraph, self.span.start, self.span.end],
            "meta": dict(self.meta),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "PlotPoint":
        span = d.get("span")
        return cls(
            id=d["id"],
            article_id=d["article_id"],
            level=d["level"],
            kind=d["kind"],
            surface_text=d["surface_text"],
            span=None if span is None else Span(*span),
            meta=dict(d.get("meta") or {}),
        )


def make_point(
    article_id: str,
    kind: str,
    surface_text: str,
    span: Optional[Span] = None,
    **meta,
) -> PlotPoint:
    """Build a point whose id is a hash of everything that identifies it."""
    key = "|".join([
        article_id,
        kind,
        surface_text,
        "" if span is None else f"{span.paragraph}:{span.start}:{span.end}",
        str(meta.get("label", "")),
    ])
    pid = hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]
    return PlotPoint(pid, article_id, LEVEL_OF[kind], kind, surface_text, span, meta)


@dataclass
class Diagnostic:
    article_id: str
    code: str
    message: str


@dataclass
class ExtractionResult:
    article_id: str
    plot_points: list[PlotPoint]
    mapping: dict[str, list[str]]
    diagnostics: list[Diagnostic] = field(default_factory=list)
