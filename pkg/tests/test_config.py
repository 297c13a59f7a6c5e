from __future__ import annotations

import pytest

from conftest import CORPUS
from eventnarrative.config import load_config
from eventnarrative.errors import ConfigError


def _write(tmp_path, text: str):
    path = tmp_path / "c.ini"
    path.write_text(text, encoding="utf-8")
    return path


def test_fixture_config_loads():
    cfg = load_config(CORPUS / "pipeline.ini")
    assert cfg.store == CORPUS.resolve() / "work" / "articles.jsonl"
    assert [f.name for f in cfg.feeds] == ["globalwire", "harbourpost"]
    assert cfg.resources.evidence_k == 2
    assert cfg.resources.gazetteer.entries["Stockton Rush"] == "PERSON"
    assert cfg.generation.lead_body_word_cap == 500 and cfg.generation.tail_word_cap == 100
    assert cfg.generation.backend.kind == "stub"
    assert cfg.generation.tail_classes == ("PersTactic",)
    assert cfg.evaluation.kappa_threshold == 0.6


def test_defaults_and_relative_paths(tmp_path):
    cfg = load_config(_write(tmp_path, "[paths]\nstore = a/s.jsonl\ngraph = /abs/g.ttl\n"))
    assert cfg.store == tmp_path.resolve() / "a" / "s.jsonl"
    assert str(cfg.graph) == "/abs/g.ttl"
    assert cfg.plot_points == tmp_path.resolve() / "plot_points.jsonl"
    assert cfg.reports == tmp_path.resolve() / "reports"
    assert cfg.resources.evidence_k == 4 and cfg.feeds == []
    assert cfg.generation.lead_classes == ("Who", "What", "When", "Where", "Why")


def test_every_problem_is_reported(tmp_path):
    path = _write(tmp_path, """
[paths]
graph = g.ttl
[resources]
gazetteer = missing.tsv
[extraction]
evidence_k = zero
neg_cut = 0.2
[generation]
tail_word_cap = 0
lead_classes = Who, Whom
parallel = maybe
[backend]
kind = remote
[feed:wire]
kind = rss
[evaluation]
kappa_threshold = 2
""")
    with pytest.raises(ConfigError) as info:
        load_config(path)
    problems = "\n".join(info.value.problems)
    for key in ("paths.store: required", "resources.gazetteer", "extraction.evidence_k", "extraction.neg_cut",
                "generation.tail_word_cap", "generation.lead_classes: unknown classes Whom",
                "generation.parallel", "backend.endpoint: required", "feed:wire.url: required",
                "evaluation.kappa_threshold"):
        assert key in problems, key


def test_generation_options(tmp_path):
    cfg = load_config(_write(tmp_path, """[paths]
store = s
graph = g
[generation]
include_why = no
tail_classes = PersTactic, Sentiment
parallel = yes
[backend]
kind = remote
endpoint = http://127.0.0.1:8000/complete
model = neo
token_env = EN_TOKEN
max_retries = 5
"""))
    gen = cfg.generation
    assert gen.lead_classes == ("Who", "What", "When", "Where")
    assert gen.tail_classes == ("PersTactic", "Sentiment") and gen.parallel
    assert (gen.backend.kind, gen.backend.model, gen.backend.max_retries) == ("remote", "neo", 5)


def test_missing_and_unparseable_files(tmp_path):
    with pytest.raises(ConfigError, match="does not exist"):
        load_config(tmp_path / "none.ini")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_config(_write(tmp_path, "no section header\n"))


def test_bad_resource_file_is_a_config_error(tmp_path):
    (tmp_path / "tactics.tsv").write_text("ethos\t(unclosed\n", encoding="utf-8")
    path = _write(tmp_path, "[paths]\nstore = s\ngraph = g\n[resources]\ntactics = tactics.tsv\n")
    with pytest.raises(ConfigError, match="resources.tactics"):
        load_config(path)
