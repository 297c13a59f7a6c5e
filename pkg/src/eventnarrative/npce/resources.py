"""Gazetteers, cue lists, lexicons and tactic rules, plus their file loaders.

File formats (UTF-8, ``#`` comment lines and blank lines ignored):

* gazetteer: ``surface<TAB>LABEL``
* term lists (cues, lexicons): one term per line
* tactic rules: ``label<TAB>pattern1|pattern2``
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources as _res
from pathlib import Path
from typing import Iterable

from ..textutil import tokenize
from .model import ENTITY_LABELS

DEFAULT_CAUSAL_CUES = ("cause", "causing", "caused by", "because", "since", "after", "for", "as", "of")
GUARDED_CUES = frozenset({"for", "as", "of", "since", "after"})
DEFAULT_OPINION_CUES = ("believe", "clearly", "should", "outrageous", "in my view")


def _read_lines(path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    return [ln.rstrip("\r") for ln in text.split("\n") if ln.strip() and not ln.lstrip().startswith("#")]


def _data_lines(name: str) -> list[str]:
    text = _res.files("eventnarrative.data").joinpath(name).read_text(encoding="utf-8")
    return [ln for ln in text.split("\n") if ln.strip() and not ln.lstrip().startswith("#")]


@dataclass(frozen=True)
class Gazetteer:
    """Surface form -> entity label. First entry wins on duplicate surfaces."""

    entries: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for surface, label in self.entries.items():
            if not surface.strip():
                raise ValueError("gazetteer surface forms must be non-empty")
            if label not in ENTITY_LABELS:
                raise ValueError(f"unknown entity label {label!r} for {surface!r}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "Gazetteer":
        entries: dict[str, str] = {}
        for surface, label in pairs:
            entries.setdefault(surface.strip(), label.strip())
        return cls(entries)

    @classmethod
    def load(cls, path) -> "Gazetteer":
        pairs = []
        for n, line in enumerate(_read_lines(path), 1):
            if "\t" not in line:
                raise ValueError(f"{path}: entry {n} is not 'surface<TAB>label'")
            surface, label = line.split("\t", 1)
            pairs.append((surface, label))
        return cls.from_pairs(pairs)

    def token_index(self) -> dict[tuple[str, ...], tuple[str, str]]:
        """Token tuple -> (surface, label), for longest-match scanning."""
        index: dict[tuple[str, ...], tuple[str, str]] = {}
        for surface, label in self.entries.items():
            toks = tuple(t.text for t in tokenize(surface))
            if toks:
                index.setdefault(toks, (surface, label))
        return index

    def by_length(self) -> list[tuple[str, str]]:
        return sorted(self.entries.items(), key=lambda kv: -len(tokenize(kv[0])))


@dataclass(frozen=True)
class CausalCueSet:
    cues: tuple[str, ...] = DEFAULT_CAUSAL_CUES

    def __post_init__(self):
        if not self.cues:
            raise ValueError("cue set must be non-empty")
        if any(c != c.lower() for c in self.cues):
            raise ValueError("cues must be lowercase")

    @classmethod
    def load(cls, path) -> "CausalCueSet":
        return cls(tuple(ln.strip() for ln in _read_lines(path)))


@dataclass(frozen=True)
class SentimentLexicon:
    positive: frozenset[str]
    negative: frozenset[str]
    neg_cut: float = -0.1
    pos_cut: float = 0.1

    def __post_init__(self):
        if self.positive & self.negative:
            raise ValueError(f"terms in both polarities: {sorted(self.positive & self.negative)}")
        if not self.neg_cut < 0 < self.pos_cut:
            raise ValueError("thresholds must satisfy neg_cut < 0 < pos_cut")

    @classmethod
    def load(cls, positive_path, negative_path, neg_cut=-0.1, pos_cut=0.1) -> "SentimentLexicon":
        return cls(
            frozenset(t.strip().lower() for t in _read_lines(positive_path)),
            frozenset(t.strip().lower() for t in _read_lines(negative_path)),
            neg_cut,
            pos_cut,
        )

    @classmethod
    def default(cls, neg_cut=-0.1, pos_cut=0.1) -> "SentimentLexicon":
        return cls(
            frozenset(t.strip().lower() for t in _data_lines("positive.txt")),
            frozenset(t.strip().lower() for t in _data_lines("negative.txt")),
            neg_cut,
            pos_cut,
        )


@dataclass(frozen=True)
class TacticRule:
    label: str
    patterns: tuple[str, ...]

    def compiled(self) -> list[re.Pattern]:
        return [re.compile(p, re.IGNORECASE) for p in self.patterns]


@dataclass(frozen=True)
class TacticRuleSet:
    rules: tuple[TacticRule, ...] = ()

    def __post_init__(self):
        labels = [r.label for r in self.rules]
        if len(labels) != len(set(labels)):
            raise ValueError("tactic labels must be unique")
        for r in self.rules:
            if not r.patterns:
                raise ValueError(f"tactic {r.label!r} has no patterns")
            try:
                r.compiled()
            except re.error as exc:
                raise ValueError(f"tactic {r.label!r}: bad pattern: {exc}") from exc

    @classmethod
    def parse(cls, lines: Iterable[str]) -> "TacticRuleSet":
        rules = []
        for line in lines:
            if "\t" not in line:
                raise ValueError(f"tactic rule is not 'label<TAB>patterns': {line!r}")
            label, pats = line.split("\t", 1)
            rules.append(TacticRule(label.strip(), tuple(p for p in pats.strip().split("|") if p)))
        return cls(tuple(rules))

    @classmethod
    def load(cls, path) -> "TacticRuleSet":
        return cls.parse(_read_lines(path))

    @classmethod
    def default(cls) -> "TacticRuleSet":
        return cls.parse(_data_lines("tactics.tsv"))


def load_terms(path) -> tuple[str, ...]:
    return tuple(ln.strip().lower() for ln in _read_lines(path))


STOPWORDS = frozenset(w.strip().lower() for w in _data_lines("stopwords.txt"))
