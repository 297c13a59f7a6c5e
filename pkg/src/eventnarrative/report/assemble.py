"""Assemble generated sections into an intelligence report with provenance."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

from ..corpus import format_timestamp, parse_timestamp
from ..graph import Graph
from ..textutil import contains_phrase, word_count
from .backends import Backend, BackendSpec, StubBackend, generate_section
from .prompts import (
    DEFAULT_BODY_CLASSES, DEFAULT_LEAD_CLASSES, DEFAULT_TAIL_CLASSES, PROMPT_TEMPLATE_VERSION, SECTIONS,
    NarrativePromptSet, build_prompt_set, linearize,
)

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
HEADINGS = {"lead": "Lead", "body": "Body", "tail": "Tail"}


@dataclass(frozen=True)
class GenerationConfig:
    lead_body_word_cap: int = 500
    tail_word_cap: int = 100
    backend: BackendSpec = field(default_factory=BackendSpec)
    lead_classes: tuple[str, ...] = DEFAULT_LEAD_CLASSES
    body_classes: tuple[str, ...] = DEFAULT_BODY_CLASSES
    tail_classes: tuple[str, ...] = DEFAULT_TAIL_CLASSES
    parallel: bool = False

    def __post_init__(self):
        if self.lead_body_word_cap < 1 or self.tail_word_cap < 1:
            raise ValueError("word caps must be at least 1")

    def cap(self, section: str) -> int:
        return self.tail_word_cap if section == "tail" else self.lead_body_word_cap


@dataclass
class IntelligenceReport:
    event_query: str
    sections: dict[str, str]
    section_provenance: dict[str, list[str]]
    keyword_coverage: dict[str, float]
    matched_keywords: dict[str, list[str]]
    generated_at: datetime
    backend_id: str
    prompt_version: str = PROMPT_TEMPLATE_VERSION

    def word_counts(self) -> dict[str, int]:
        return {s: word_count(t) for s, t in self.sections.items()}

    def text(self) -> str:
        return "\n\n".join(self.sections[s] for s in SECTIONS if s in self.sections)

    def all_matched_keywords(self) -> list[str]:
        return [k for s in SECTIONS for k in self.matched_keywords.get(s, [])]

    def to_dict(self) -> dict:
        return {
            "event_query": self.event_query,
            "sections": self.sections,
            "section_provenance": self.section_provenance,
            "keyword_coverage": self.keyword_coverage,
            "matched_keywords": self.matched_keywords,
            "word_counts": self.word_counts(),
            "generated_at": format_timestamp(self.generated_at),
            "backend_id": self.backend_id,
            "prompt_version": self.prompt_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "IntelligenceReport":
        generated = parse_timestamp(d.get("generated_at", "")) or EPOCH
        return cls(
            event_query=d["event_query"],
            sections=dict(d["sections"]),
            section_provenance={k: list(v) for k, v in d.get("section_provenance", {}).items()},
            keyword_coverage={k: float(v) for k, v in d.get("keyword_coverage", {}).items()},
            matched_keywords={k: list(v) for k, v in d.get("matched_keywords", {}).items()},
            generated_at=generated,
            backend_id=d.get("backend_id", ""),
            prompt_version=d.get("prompt_version", PROMPT_TEMPLATE_VERSION),
        )

    def render_markdown(self) -> str:
        lines = [f"# Intelligence report: {self.event_query}", ""]
        for s in SECTIONS:
            if s not in self.sections:
                continue
            lines += [f"## {HEADINGS[s]}", "", self.sections[s], ""]
            lines.append(f"_Keyword coverage: {self.keyword_coverage[s]:.2f}_")
            lines.append("")
        lines.append(f"Generated {format_timestamp(self.generated_at)} by `{self.backend_id}`.")
        return "\n".join(lines) + "\n"


def keyword_coverage(text: str, keywords) -> tuple[float, list[str]]:
    keywords = list(keywords)
    matched = [k for k in keywords if contains_phrase(text, k)]
    return (len(matched) / len(keywords) if keywords else 0.0), matched


def assemble_report(
    ps: NarrativePromptSet,
    lead_text: Optional[str],
    body_text: Optional[str],
    tail_text: Optional[str],
    backend_id: str,
    generated_at: Optional[datetime] = None,
) -> IntelligenceReport:
    """Sections whose keyword list is empty are left out, along with their
    coverage; the others get coverage by whole-phrase containment."""
    texts = {"lead": lead_text, "body": body_text, "tail": tail_text}
    sections, provenance, coverage, matched = {}, {}, {}, {}
    for s in SECTIONS:
        keywords = ps.keywords(s)
        if not keywords:
            continue
        text = texts[s] or ""
        sections[s] = text
        provenance[s] = [ps.provenance[s][k] for k in keywords]
        coverage[s], matched[s] = keyword_coverage(text, keywords)
    return IntelligenceReport(
        event_query=ps.event_query,
        sections=sections,
        section_provenance=provenance,
        keyword_coverage=coverage,
        matched_keywords=matched,
        generated_at=generated_at or datetime.now(timezone.utc),
        backend_id=backend_id,
    )


def generate_report(
    g: Graph,
    event: str,
    config: GenerationConfig = GenerationConfig(),
    backend: Optional[Backend] = None,
    generated_at: Optional[datetime] = None,
) -> IntelligenceReport:
    """Retrieve, prompt and generate each section independently.

    Under the stub backend the timestamp defaults to the epoch so repeated
    runs produce identical bytes.
    """
    backend = backend or StubBackend()
    ps = build_prompt_set(
        g, event,
        lead_classes=config.lead_classes,
        body_classes=config.body_classes,
        tail_classes=config.tail_classes,
    )
    wanted = [s for s in SECTIONS if ps.keywords(s)]

    def run(section: str) -> str:
        return generate_section(backend, linearize(ps, section), config.cap(section))

    if config.parallel and len(wanted) > 1:
        with ThreadPoolExecutor(max_workers=len(wanted)) as pool:
            texts = dict(zip(wanted, pool.map(run, wanted)))
    else:
        texts = {s: run(s) for s in wanted}
    if generated_at is None and isinstance(backend, StubBackend):
        generated_at = EPOCH
    return assemble_report(
        ps, texts.get("lead"), texts.get("body"), texts.get("tail"), backend.backend_id, generated_at
    )
