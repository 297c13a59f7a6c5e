"""Report scoring: ROUGE-n, support/contradiction against gold plot points,
Cohen's kappa for annotator agreement, and Likert averaging."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import LabelOutsideSet, ScoreOutOfRange
from .textutil import contains_phrase, normalize_phrase

_ROUGE_TOKEN = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class ReferenceText:
    event_query: str
    text: str
    origin: str = "local"

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("reference text must be non-empty")


@dataclass(frozen=True)
class RougeScore:
    n: int
    recall: float
    precision: float
    f1: float
    overlap: int = 0

    def to_dict(self) -> dict:
        return {"n": self.n, "recall": self.recall, "precision": self.precision, "f1": self.f1}


def rouge_tokens(text: str) -> list[str]:
    return [t.lower() for t in _ROUGE_TOKEN.findall(text)]


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: str, reference: str, n: int = 1) -> RougeScore:
    """Clipped n-gram overlap. Texts shorter than ``n`` tokens score zero."""
    if n not in (1, 2):
        raise ValueError("n must be 1 or 2")
    cand, ref = ngrams(rouge_tokens(candidate), n), ngrams(rouge_tokens(reference), n)
    overlap = sum((cand & ref).values())
    n_cand, n_ref = sum(cand.values()), sum(ref.values())
    recall = overlap / n_ref if n_ref else 0.0
    precision = overlap / n_cand if n_cand else 0.0
    f1 = 0.0 if recall + precision == 0 else 2 * recall * precision / (recall + precision)
    return RougeScore(n, recall, precision, f1, overlap)


@dataclass(frozen=True)
class GoldPlotSet:
    event_query: str
    points: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SuppContScore:
    supp: int
    cont: int
    gold_size: int
    supported: tuple[str, ...] = ()
    missing: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "supp": self.supp, "cont": self.cont, "gold_size": self.gold_size,
            "supported": list(self.supported), "missing": list(self.missing),
        }


def supp_cont(report_keywords: Iterable[str], gold: GoldPlotSet) -> SuppContScore:
    """Gold points found (after normalization) among the report's matched
    keywords count as support; the rest count as contradicting."""
    if not gold.points:
        raise ValueError("gold set must be non-empty")
    have = {normalize_phrase(k) for k in report_keywords}
    supported = tuple(p for p in gold.points if normalize_phrase(p) in have)
    missing = tuple(p for p in gold.points if normalize_phrase(p) not in have)
    return SuppContScore(len(supported), len(missing), len(gold.points), supported, missing)


@dataclass
class AnnotationTable:
    items: list[str]
    labels_a: list[str]
    labels_b: list[str]
    label_set: Optional[frozenset] = None

    def __post_init__(self):
        if not (len(self.items) == len(self.labels_a) == len(self.labels_b)):
            raise ValueError("items and both label columns must have equal lengths")
        if self.label_set is not None:
            for label in list(self.labels_a) + list(self.labels_b):
                if label not in self.label_set:
                    raise LabelOutsideSet(f"label {label!r} is not in {sorted(self.label_set)}")


def cohen_kappa(t: AnnotationTable) -> float:
    n = len(t.items)
    if n == 0:
        raise ValueError("annotation table has no items")
    agree = sum(a == b for a, b in zip(t.labels_a, t.labels_b))
    ca, cb = Counter(t.labels_a), Counter(t.labels_b)
    chance = sum(ca[k] * cb[k] for k in ca.keys() | cb.keys())
    if chance == n * n:
        return 1.0 if agree == n else 0.0
    # (p_o - p_e) / (1 - p_e) scaled by n*n, so the only rounding is the final division
    return (n * agree - chance) / (n * n - chance)


def filter_gold_by_kappa(
    candidates: Iterable[tuple[str, AnnotationTable]],
    threshold: float = 0.6,
    event_query: str = "",
) -> GoldPlotSet:
    """Keep the points whose annotators agreed with kappa strictly above ``threshold``."""
    if not -1 <= threshold <= 1:
        raise ValueError("threshold must lie in [-1, 1]")
    kept = tuple(point for point, table in candidates if cohen_kappa(table) > threshold)
    return GoldPlotSet(event_query, kept)


def likert_average(scores: Sequence[int]) -> float:
    if not scores:
        raise ValueError("no scores to average")
    for s in scores:
        if isinstance(s, bool) or not isinstance(s, int) or not 1 <= s <= 5:
            raise ScoreOutOfRange(f"Likert score {s!r} is not an integer in 1..5")
    return sum(scores) / len(scores)


# ---------------------------------------------------------------- file formats

def read_gold(path) -> GoldPlotSet:
    """``#event: <query>`` header, then one keyword per line."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    event = ""
    points: list[str] = []
    for line in lines:
        if line.startswith("#"):
            m = re.match(r"#\s*event:\s*(.*)$", line)
            if m:
                event = m.group(1).strip()
            continue
        if line.strip():
            points.append(line.strip())
    if not event:
        raise ValueError(f"{path}: missing '#event:' header")
    return GoldPlotSet(event, tuple(dict.fromkeys(points)))


def write_gold(gold: GoldPlotSet, path) -> None:
    Path(path).write_text(f"#event: {gold.event_query}\n" + "".join(p + "\n" for p in gold.points), encoding="utf-8")


def read_annotations(path, label_set: Optional[Iterable[str]] = None) -> AnnotationTable:
    """``item<TAB>labelA<TAB>labelB`` rows; ``#`` lines are comments."""
    items, a, b = [], [], []
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{path}:{n}: expected 3 tab-separated fields, found {len(parts)}")
        items.append(parts[0])
        a.append(parts[1].strip())
        b.append(parts[2].strip())
    return AnnotationTable(items, a, b, frozenset(label_set) if label_set is not None else None)


def read_scores(path) -> list[int]:
    out = []
    for tok in Path(path).read_text(encoding="utf-8").split():
        try:
            out.append(int(tok))
        except ValueError as exc:
            raise ScoreOutOfRange(f"{tok!r} is not an integer score") from exc
    return out


@dataclass
class ScoreReport:
    event_query: str
    rouge: dict[str, RougeScore]
    supp_cont: Optional[SuppContScore] = None
    kappa: dict[str, float] = field(default_factory=dict)
    fluency: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "event_query": self.event_query,
            "rouge": {k: v.to_dict() for k, v in self.rouge.items()},
            "supp_cont": self.supp_cont.to_dict() if self.supp_cont else None,
            "kappa": self.kappa,
            "fluency": self.fluency,
        }


def score_report(
    event_query: str,
    report_text: str,
    reference: ReferenceText,
    matched_keywords: Iterable[str] = (),
    gold: Optional[GoldPlotSet] = None,
    fluency: Optional[Sequence[int]] = None,
) -> ScoreReport:
    return ScoreReport(
        event_query,
        {"rouge1": rouge_n(report_text, reference.text, 1), "rouge2": rouge_n(report_text, reference.text, 2)},
        supp_cont(report_keyword_set(report_text, matched_keywords, gold), gold) if gold is not None else None,
        fluency=likert_average(fluency) if fluency is not None else None,
    )


def report_keyword_set(report_text: str, matched_keywords: Iterable[str], gold: GoldPlotSet) -> list[str]:
    """Keywords credited to a report: its matched prompt keywords plus any
    gold point that appears in its text under the same phrase matching."""
    out = list(matched_keywords)
    out += [p for p in gold.points if contains_phrase(report_text, p)]
    return out
