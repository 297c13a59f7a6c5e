"""Pipeline configuration: one INI file, validated in full before any work.

Relative paths are resolved against the directory holding the config file.

.. code-block:: ini

    [paths]
    store = data/articles.jsonl
    plot_points = data/plot_points.jsonl
    graph = data/epg.ttl
    reports = reports

    [resources]
    gazetteer = gazetteer.tsv
    causal_cues = cues.txt

    [extraction]
    evidence_k = 4

    [generation]
    lead_body_word_cap = 500
    tail_word_cap = 100

    [backend]
    kind = stub

    [feed:example]
    url = https://news.example.com/rss.xml
    kind = rss
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .corpus import FeedSource
from .errors import ConfigError
from .npce import CausalCueSet, Gazetteer, NpceResources, SentimentLexicon, TacticRuleSet, load_terms
from .npce.remote import RemoteAnnotator
from .npce.resources import DEFAULT_OPINION_CUES
from .report import BackendSpec, GenerationConfig
from .report.prompts import CLASS_ORDER

RESOURCE_KEYS = ("gazetteer", "causal_cues", "positive", "negative", "tactics", "opinion_cues")


@dataclass(frozen=True)
class EvaluationSettings:
    kappa_threshold: float = 0.6
    labels: Optional[tuple[str, ...]] = None


@dataclass
class PipelineConfig:
    path: Path
    feeds: list[FeedSource]
    store: Path
    plot_points: Path
    graph: Path
    reports: Path
    resource_paths: dict[str, Path]
    resources: NpceResources
    generation: GenerationConfig
    evaluation: EvaluationSettings = field(default_factory=EvaluationSettings)


def _split_list(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


class _Checker:
    def __init__(self, cp: configparser.ConfigParser, base: Path):
        self.cp = cp
        self.base = base
        self.problems: list[str] = []

    def get(self, section: str, key: str, default=None, required: bool = False) -> Optional[str]:
        if self.cp.has_option(section, key):
            value = self.cp.get(section, key).strip()
            if value:
                return value
        if required:
            self.problems.append(f"{section}.{key}: required")
        return default

    def number(self, section: str, key: str, default, kind=int, check=None, rule: str = ""):
        raw = self.get(section, key)
        if raw is None:
            return default
        try:
            value = kind(raw)
        except ValueError:
            self.problems.append(f"{section}.{key}: {raw!r} is not a valid {kind.__name__}")
            return default
        if check is not None and not check(value):
            self.problems.append(f"{section}.{key}: {raw!r} {rule}")
            return default
        return value

    def path(self, section: str, key: str, default=None, required=False, must_exist=False) -> Optional[Path]:
        raw = self.get(section, key, default, required)
        if raw is None:
            return None
        p = Path(raw)
        p = p if p.is_absolute() else self.base / p
        if must_exist and not p.exists():
            self.problems.append(f"{section}.{key}: {p} does not exist")
        return p

    def boolean(self, section: str, key: str, default: bool) -> bool:
        raw = self.get(section, key)
        if raw is None:
            return default
        value = raw.lower()
        if value in ("1", "true", "yes", "on"):
            return True
        if value in ("0", "false", "no", "off"):
            return False
        self.problems.append(f"{section}.{key}: {raw!r} is not a boolean")
        return default

    def classes(self, section: str, key: str, default: tuple[str, ...]) -> tuple[str, ...]:
        raw = self.get(section, key)
        if raw is None:
            return default
        names = _split_list(raw)
        bad = [n for n in names if n not in CLASS_ORDER]
        if bad:
            self.problems.append(f"{section}.{key}: unknown classes {', '.join(bad)}")
            return default
        return names


def _load_resources(c: _Checker, paths: dict[str, Optional[Path]]) -> NpceResources:
    """Load the extraction resources, recording (not raising) any failure."""
    def attempt(key, loader, default):
        p = paths.get(key)
        if p is None or not p.exists():
            return default
        try:
            return loader(p)
        except (OSError, ValueError) as exc:
            c.problems.append(f"resources.{key}: {exc}")
            return default

    neg_cut = c.number("extraction", "neg_cut", -0.1, float, lambda v: v < 0, "must be negative")
    pos_cut = c.number("extraction", "pos_cut", 0.1, float, lambda v: v > 0, "must be positive")
    if (paths.get("positive") is None) != (paths.get("negative") is None):
        c.problems.append("resources.positive/negative: give both lexicon files or neither")
    lexicon = SentimentLexicon.default(neg_cut, pos_cut)
    if paths.get("positive") and paths.get("negative") and paths["positive"].exists() and paths["negative"].exists():
        try:
            lexicon = SentimentLexicon.load(paths["positive"], paths["negative"], neg_cut, pos_cut)
        except (OSError, ValueError) as exc:
            c.problems.append(f"resources.positive/negative: {exc}")

    ner_endpoint = c.get("extraction", "ner_endpoint")
    timeout = c.number("extraction", "ner_timeout", 10.0, float, lambda v: v > 0, "must be positive")
    return NpceResources(
        gazetteer=attempt("gazetteer", Gazetteer.load, Gazetteer()),
        cues=attempt("causal_cues", CausalCueSet.load, CausalCueSet()),
        lexicon=lexicon,
        tactics=attempt("tactics", TacticRuleSet.load, TacticRuleSet.default()),
        opinion_cues=attempt("opinion_cues", load_terms, DEFAULT_OPINION_CUES),
        evidence_k=c.number("extraction", "evidence_k", 4, int, lambda v: v >= 1, "must be at least 1"),
        min_quote_words=c.number("extraction", "min_quote_words", 3, int, lambda v: v >= 1, "must be at least 1"),
        ner=RemoteAnnotator(ner_endpoint, timeout) if ner_endpoint else None,
    )


def _load_backend(c: _Checker) -> BackendSpec:
    kind = c.get("backend", "kind", "stub")
    if kind not in ("stub", "remote"):
        c.problems.append(f"backend.kind: {kind!r} is not 'stub' or 'remote'")
        return BackendSpec()
    endpoint = c.get("backend", "endpoint", "", required=kind == "remote")
    timeout = c.number("backend", "timeout", 30.0, float, lambda v: v > 0, "must be positive")
    retries = c.number("backend", "max_retries", 3, int, lambda v: v >= 0, "must be non-negative")
    if kind == "remote" and not endpoint:
        return BackendSpec()
    return BackendSpec(kind, endpoint or "", c.get("backend", "model", ""), c.get("backend", "token_env", ""),
                       timeout, retries)


def load_config(path) -> PipelineConfig:
    """Parse and validate ``path``; every problem is reported in one ConfigError."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError([f"config: {path} does not exist"])
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read(path, encoding="utf-8")
    except (configparser.Error, UnicodeDecodeError) as exc:
        raise ConfigError([f"config: cannot parse {path}: {exc}"]) from exc
    c = _Checker(cp, path.parent.resolve())

    store = c.path("paths", "store", required=True)
    graph = c.path("paths", "graph", required=True)
    plot_points = c.path("paths", "plot_points", "plot_points.jsonl")
    reports = c.path("paths", "reports", "reports")

    resource_paths = {k: c.path("resources", k, must_exist=True) for k in RESOURCE_KEYS}
    resources = _load_resources(c, resource_paths)

    feeds = []
    for section in cp.sections():
        if not section.startswith("feed:"):
            continue
        name = section[len("feed:"):].strip()
        url = c.get(section, "url", required=True)
        kind = c.get(section, "kind", "rss")
        if not name:
            c.problems.append(f"{section}: feed name is empty")
        elif url:
            try:
                feeds.append(FeedSource(name, url, kind))
            except ValueError as exc:
                c.problems.append(f"{section}: {exc}")

    lead_cap = c.number("generation", "lead_body_word_cap", 500, int, lambda v: v >= 1, "must be at least 1")
    tail_cap = c.number("generation", "tail_word_cap", 100, int, lambda v: v >= 1, "must be at least 1")
    lead_classes = c.classes("generation", "lead_classes", ("Who", "What", "When", "Where", "Why"))
    if not c.boolean("generation", "include_why", True):
        lead_classes = tuple(x for x in lead_classes if x != "Why")
    generation = GenerationConfig(
        lead_body_word_cap=lead_cap,
        tail_word_cap=tail_cap,
        backend=_load_backend(c),
        lead_classes=lead_classes,
        body_classes=c.classes("generation", "body_classes", ("Evidence", "Quote")),
        tail_classes=c.classes("generation", "tail_classes", ("PersTactic",)),
        parallel=c.boolean("generation", "parallel", False),
    )

    labels = c.get("evaluation", "labels")
    evaluation = EvaluationSettings(
        kappa_threshold=c.number("evaluation", "kappa_threshold", 0.6, float, lambda v: -1 <= v <= 1,
                                 "must lie in [-1, 1]"),
        labels=_split_list(labels) if labels else None,
    )

    if c.problems:
        raise ConfigError(c.problems)
    return PipelineConfig(
        path=path, feeds=feeds, store=store, plot_points=plot_points, graph=graph, reports=reports,
        resource_paths={k: v for k, v in resource_paths.items() if v is not None},
        resources=resources, generation=generation, evaluation=evaluation,
    )
