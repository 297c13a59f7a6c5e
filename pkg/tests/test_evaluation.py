from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURES
from eventnarrative.errors import LabelOutsideSet, ScoreOutOfRange
from eventnarrative.evaluation import (
    AnnotationTable, GoldPlotSet, ReferenceText, cohen_kappa, filter_gold_by_kappa, likert_average, read_annotations,
    read_gold, read_scores, report_keyword_set, rouge_n, score_report, supp_cont, write_gold,
)
from eventnarrative.report import generate_report
from oracles import rouge_oracle

GOLD_FILE = FIXTURES / "eval" / "oceangate_gold.txt"
WORDS = ["the", "cat", "sat", "ran", "on", "mat", "Titan", "sub", "hull", "9pm"]


def _table(a, b, labels=None):
    return AnnotationTable([str(i) for i in range(len(a))], list(a), list(b), labels)


def _with_kappa(target: float) -> AnnotationTable:
    """400 items with balanced marginals, where kappa = agreements / 200 - 1."""
    x = round(100 * (1 + target))
    a = ["yes"] * 200 + ["no"] * 200
    b = ["yes"] * x + ["no"] * (200 - x) + ["no"] * x + ["yes"] * (200 - x)
    return _table(a, b)


# ---------------------------------------------------------------- ROUGE

def test_rouge_worked_examples():
    r1 = rouge_n("the cat sat", "the cat ran", 1)
    assert (r1.overlap, r1.recall, r1.precision) == (2, 2 / 3, 2 / 3)
    r2 = rouge_n("the cat sat", "the cat ran", 2)
    assert (r2.overlap, r2.recall) == (1, 1 / 2)


def test_rouge_degenerate_inputs():
    same = rouge_n("Coast Guard found debris.", "coast guard found DEBRIS", 2)
    assert same.recall == same.precision == same.f1 == 1.0
    assert rouge_n("alpha beta", "gamma delta", 1).f1 == 0.0
    assert rouge_n("", "gamma", 1).recall == 0.0
    assert rouge_n("one", "one", 2).recall == 0.0
    with pytest.raises(ValueError):
        rouge_n("a", "a", 3)


def test_rouge_clips_repeated_ngrams():
    r = rouge_n("the the the the", "the cat", 1)
    assert r.overlap == 1 and r.recall == 0.5 and r.precision == 0.25


texts = st.lists(st.sampled_from(WORDS), max_size=40).map(" ".join)


@given(texts, texts, st.sampled_from([1, 2]))
def test_rouge_matches_oracle(candidate, reference, n):
    got = rouge_n(candidate, reference, n)
    overlap, n_cand, n_ref = rouge_oracle(candidate, reference, n)
    assert got.overlap == overlap
    assert abs(got.recall - (overlap / n_ref if n_ref else 0.0)) <= 1e-12
    assert abs(got.precision - (overlap / n_cand if n_cand else 0.0)) <= 1e-12


@given(texts, texts, st.sampled_from([1, 2]))
def test_rouge_swap_and_bounds(candidate, reference, n):
    ab, ba = rouge_n(candidate, reference, n), rouge_n(reference, candidate, n)
    assert (ab.recall, ab.precision) == (ba.precision, ba.recall)
    assert abs(ab.f1 - ba.f1) <= 1e-12
    assert all(0.0 <= x <= 1.0 for x in (ab.recall, ab.precision, ab.f1))
    assert rouge_n(candidate + " " + reference, reference, n).recall >= ab.recall


# ---------------------------------------------------------------- Supp / Cont

def test_supp_cont_examples():
    gold = GoldPlotSet("e", tuple(f"point {i}" for i in range(15)))
    assert supp_cont(gold.points, gold).supp == 15
    assert (supp_cont([], gold).supp, supp_cont([], gold).cont) == (0, 15)
    with pytest.raises(ValueError):
        supp_cont(["x"], GoldPlotSet("e", ()))


def test_supp_cont_on_fixture_report(fixture_graph):
    gold = read_gold(GOLD_FILE)
    assert len(gold) == 16 and gold.event_query == "Oceangate"
    report = generate_report(fixture_graph, "Oceangate")
    score = supp_cont(report_keyword_set(report.text(), report.all_matched_keywords(), gold), gold)
    assert (score.supp, score.cont) == (13, 3)
    assert score.missing == ("Greece migrant vessel", "Horizon Arctic", "Deep Energy")


def test_supp_cont_partition_under_perturbation(fixture_graph):
    gold = read_gold(GOLD_FILE)
    report = generate_report(fixture_graph, "Oceangate")
    keywords = report_keyword_set(report.text(), report.all_matched_keywords(), gold)
    rng = random.Random(3)
    for _ in range(100):
        picked = rng.sample(keywords, rng.randint(0, len(keywords)))
        noisy = [rng.choice([k.upper(), k.lower(), k.replace(" ", "-"), k + "!", "noise " + k]) for k in picked]
        noisy += rng.sample(["Greece migrant vessel", "unrelated", "Horizon-Arctic"], rng.randint(0, 3))
        s = supp_cont(noisy, gold)
        assert s.supp + s.cont == 16 and s.supp >= 0 and s.cont >= 0


# ---------------------------------------------------------------- kappa

def test_kappa_examples():
    assert cohen_kappa(_table(["y", "n", "y", "n"], ["y", "n", "y", "n"])) == 1.0
    assert cohen_kappa(_table(["yes"] * 100, ["yes"] * 50 + ["no"] * 50)) == 0.0
    a = ["yes"] * 6 + ["no"] * 4
    b = ["yes"] * 5 + ["no"] + ["yes"] + ["no"] * 3
    assert abs(cohen_kappa(_table(a, b)) - 0.5833) <= 1e-4
    assert cohen_kappa(_table(["x"] * 3, ["x"] * 3)) == 1.0


def test_kappa_agrees_with_sklearn():
    metrics = pytest.importorskip("sklearn.metrics")
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(2, 30)
        a = [rng.choice("abc") for _ in range(n)]
        b = [x if rng.random() < 0.6 else rng.choice("abc") for x in a]
        if len(set(a) | set(b)) == 1:
            continue
        assert abs(cohen_kappa(_table(a, b)) - metrics.cohen_kappa_score(a, b)) <= 1e-12


def test_kappa_label_set_and_shape():
    with pytest.raises(LabelOutsideSet):
        _table(["yes"], ["maybe"], frozenset({"yes", "no"}))
    with pytest.raises(ValueError):
        AnnotationTable(["1"], ["yes"], [])
    with pytest.raises(ValueError):
        cohen_kappa(_table([], []))


def test_filter_gold_by_kappa_is_strict():
    assert [cohen_kappa(_with_kappa(k)) for k in (0.59, 0.6, 0.61)] == [0.59, 0.6, 0.61]
    candidates = [("low", _with_kappa(0.59)), ("high", _with_kappa(0.61)), ("edge", _with_kappa(0.6))]
    assert filter_gold_by_kappa(candidates, 0.6, "e").points == ("high",)
    perfect = [(f"p{i}", _table(["y", "n"], ["y", "n"])) for i in range(3)]
    assert len(filter_gold_by_kappa(perfect)) == 3
    assert len(filter_gold_by_kappa([("z", _table(["yes"] * 4, ["yes", "yes", "no", "no"]))])) == 0
    with pytest.raises(ValueError):
        filter_gold_by_kappa([], 1.5)


# ---------------------------------------------------------------- Likert

def test_likert():
    assert likert_average([5, 5, 5]) == 5.0
    assert likert_average([4, 4, 5, 4, 4]) == 4.2
    assert likert_average([1]) == 1.0
    for bad in ([0], [6], [4.5], [True], []):
        with pytest.raises((ScoreOutOfRange, ValueError)):
            likert_average(bad)


# ---------------------------------------------------------------- files and scoring

def test_gold_and_annotation_files(tmp_path):
    gold = GoldPlotSet("derailment", ("Ohio", "9pm"))
    write_gold(gold, tmp_path / "g.txt")
    assert read_gold(tmp_path / "g.txt") == gold
    (tmp_path / "nohead.txt").write_text("Ohio\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_gold(tmp_path / "nohead.txt")
    (tmp_path / "a.tsv").write_text("#point: Ohio\n1\tyes\tyes\n2\tno\tyes\n", encoding="utf-8")
    t = read_annotations(tmp_path / "a.tsv", {"yes", "no"})
    assert t.labels_a == ["yes", "no"] and t.labels_b == ["yes", "yes"]
    (tmp_path / "bad.tsv").write_text("1\tyes\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_annotations(tmp_path / "bad.tsv")
    (tmp_path / "s.txt").write_text("4 4\n5 4 4\n", encoding="utf-8")
    assert likert_average(read_scores(tmp_path / "s.txt")) == 4.2
    (tmp_path / "s2.txt").write_text("4 four\n", encoding="utf-8")
    with pytest.raises(ScoreOutOfRange):
        read_scores(tmp_path / "s2.txt")


def test_score_report():
    ref = ReferenceText("e", "The Titan sub imploded near the wreck.")
    scores = score_report("e", "The Titan sub imploded near the wreck.", ref, ["Titan"],
                          GoldPlotSet("e", ("Titan", "wreck", "Ohio")), [4, 4, 5, 4, 4])
    doc = scores.to_dict()
    assert doc["rouge"]["rouge1"]["recall"] == 1.0
    assert doc["supp_cont"]["supp"] == 2 and doc["supp_cont"]["cont"] == 1
    assert doc["fluency"] == 4.2
    with pytest.raises(ValueError):
        ReferenceText("e", "  ")
