"""Command-line pipeline: ingest, extract, assert, query, generate, evaluate, kappa.

Exit codes:

====  ==========================================================
0     success (an empty query result is still a success)
1     any other pipeline error
2     configuration error
3     every ingest source failed
4     store, plot-point, graph or input file could not be read
5     query syntax error or unsupported query feature
6     no plot points retrieved for the event
7     generation backend failed after retries
====  ==========================================================

Data goes to stdout; diagnostics and progress go to stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .config import EvaluationSettings, PipelineConfig, load_config
from .corpus import (
    ArticleRecord, ArticleStore, DirectoryFetcher, FeedSource, Fetcher, HttpFetcher, extract_article,
    import_report_document, load_store, parse_rss, save_store,
)
from .errors import (
    BackendError, CapUnsatisfiable, ConfigError, EmptyBody, EmptyRetrieval, InvalidRegex, IoFailure,
    LabelOutsideSet, MalformedFeed, PipelineError, QuerySyntax, ScoreOutOfRange, TurtleSyntax,
    UnboundFilterVariable, UnsupportedFeature,
)
from .evaluation import (
    ReferenceText, cohen_kappa, filter_gold_by_kappa, read_annotations, read_gold, read_scores, score_report,
    write_gold,
)
from .graph import Graph, article_iri, assert_article, assert_plot_point, check_wellformed, parse_turtle, serialize_turtle
from .npce import PlotPoint, run_with
from .report import IntelligenceReport, generate_report, make_backend
from .sparql import execute, level_template, parse_query

log = logging.getLogger("eventnarrative")

EXIT_OK, EXIT_ERROR, EXIT_CONFIG, EXIT_SOURCES, EXIT_READ, EXIT_QUERY, EXIT_EMPTY, EXIT_BACKEND = range(8)
DEFAULT_CONFIG = "eventnarrative.ini"


class CommandFailed(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(args, payload, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n")
    elif text:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------- loaders

def _open_store(path: Path, create: bool = False) -> ArticleStore:
    if not path.exists():
        if create:
            return ArticleStore(path)
        raise CommandFailed(EXIT_READ, f"article store {path} does not exist; run ingest first")
    try:
        store = load_store(path)
    except IoFailure as exc:
        raise CommandFailed(EXIT_READ, str(exc)) from exc
    for err in store.load_errors:
        log.warning("%s: %s", path, err)
    return store


def _read_points(path: Path) -> list[PlotPoint]:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CommandFailed(EXIT_READ, f"cannot read plot points {path}: {exc}") from exc
    points = []
    for n, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            points.append(PlotPoint.from_dict(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            raise CommandFailed(EXIT_READ, f"{path}:{n}: corrupt plot point: {exc}") from exc
    return points


def _read_graph(path: Path, missing_ok: bool = False) -> Graph:
    if not path.exists():
        if missing_ok:
            return Graph()
        raise CommandFailed(EXIT_READ, f"graph {path} does not exist; run assert first")
    try:
        return parse_turtle(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CommandFailed(EXIT_READ, f"cannot read graph {path}: {exc}") from exc
    except TurtleSyntax as exc:
        raise CommandFailed(EXIT_READ, f"{path}: {exc}") from exc


def _read_input(path: Path, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CommandFailed(EXIT_READ, f"cannot read {what} {path}: {exc}") from exc


# ---------------------------------------------------------------- ingest

def _ingest_feed(source: FeedSource, feed_xml: str, pages: Fetcher) -> list[ArticleRecord]:
    out = []
    for entry in parse_rss(feed_xml, source):
        try:
            out.append(extract_article(pages.fetch(entry.link), entry, source))
        except (EmptyBody, IoFailure) as exc:
            log.warning("%s: skipping %s: %s", source.name, entry.link, exc)
        except Exception as exc:  # network errors from the fetcher
            log.warning("%s: skipping %s: %s", source.name, entry.link, exc)
    return out


def _sources_from_files(root: Path, cfg: PipelineConfig):
    """(label, loader) pairs for every feed file and report document under ``root``."""
    known = {f.name: f for f in cfg.feeds}
    pages = DirectoryFetcher(root / "pages")
    sources = []
    for feed_path in sorted((root / "feeds").glob("*.xml")):
        source = known.get(feed_path.stem) or FeedSource(feed_path.stem, feed_path.resolve().as_uri(), "rss")

        def load(feed_path=feed_path, source=source):
            return _ingest_feed(source, feed_path.read_text(encoding="utf-8"), pages)

        sources.append((feed_path.name, load))
    for doc in sorted((root / "reports").glob("*")):
        if doc.suffix.lower() not in (".txt", ".html", ".htm"):
            continue
        source = FeedSource("reports", f"report:{doc.name}", "report")

        def load(doc=doc, source=source):
            return [import_report_document(doc.read_text(encoding="utf-8"), f"report:{doc.name}", source)]

        sources.append((doc.name, load))
    return sources


def _sources_from_network(cfg: PipelineConfig, fetcher: Fetcher):
    sources = []
    for source in cfg.feeds:
        if source.kind == "rss":
            def load(source=source):
                return _ingest_feed(source, fetcher.fetch(source.url), fetcher)
        else:
            def load(source=source):
                return [import_report_document(fetcher.fetch(source.url), source.url, source)]
        sources.append((source.name, load))
    return sources


def cmd_ingest(args, cfg: PipelineConfig, fetcher: Optional[Fetcher] = None) -> int:
    if args.from_files:
        root = Path(args.from_files)
        if not root.is_dir():
            raise CommandFailed(EXIT_READ, f"{root} is not a directory")
        sources = _sources_from_files(root, cfg)
    else:
        sources = _sources_from_network(cfg, fetcher or HttpFetcher())
    if not sources:
        raise CommandFailed(EXIT_SOURCES, "no ingest sources found")

    store = _open_store(cfg.store, create=True)
    before = len(store)
    failed = []
    for label, load in sources:
        try:
            records = load()
        except (MalformedFeed, IoFailure, EmptyBody, OSError) as exc:
            log.warning("source %s failed: %s", label, exc)
            failed.append(label)
            continue
        except Exception as exc:  # requests errors and the like
            log.warning("source %s failed: %s", label, exc)
            failed.append(label)
            continue
        store.extend(records)
    if len(failed) == len(sources):
        raise CommandFailed(EXIT_SOURCES, f"all {len(sources)} sources failed")
    try:
        save_store(store)
    except IoFailure as exc:
        raise CommandFailed(EXIT_READ, str(exc)) from exc
    added = len(store) - before
    _emit(args, {"added": added, "total": len(store), "failed_sources": failed},
          f"ingested {added} new article(s); store holds {len(store)}")
    return EXIT_OK


# ---------------------------------------------------------------- extract / assert

def cmd_extract(args, cfg: PipelineConfig) -> int:
    store = _open_store(cfg.store)
    articles = list(store)
    jobs = max(1, getattr(args, "jobs", 1) or 1)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda a: run_with(a, cfg.resources), articles))
    else:
        results = [run_with(a, cfg.resources) for a in articles]
    lines = []
    for res in results:
        for d in res.diagnostics:
            log.warning("%s: %s: %s", d.article_id, d.code, d.message)
        lines += [p.to_json() + "\n" for p in res.plot_points]
    _write_text(cfg.plot_points, "".join(lines))
    _emit(args, {"articles": len(articles), "plot_points": len(lines)},
          f"extracted {len(lines)} plot point(s) from {len(articles)} article(s)")
    return EXIT_OK


def cmd_assert(args, cfg: PipelineConfig) -> int:
    store = _open_store(cfg.store)
    points = _read_points(cfg.plot_points) if cfg.plot_points.exists() else []
    if not cfg.plot_points.exists():
        log.warning("plot point file %s does not exist; asserting articles only", cfg.plot_points)
    g = _read_graph(cfg.graph, missing_ok=True)
    for a in store:
        assert_article(g, a)
    skipped = 0
    for p in points:
        if p.article_id not in store:
            skipped += 1
            continue
        assert_plot_point(g, article_iri(p.article_id), p)
    if skipped:
        log.warning("skipped %d plot point(s) whose article is not in the store", skipped)
    for problem in check_wellformed(g):
        log.warning("well-formedness: %s", problem)
    _write_text(cfg.graph, serialize_turtle(g))
    _emit(args, {"triples": len(g)}, f"graph holds {len(g)} triple(s)")
    return EXIT_OK


# ---------------------------------------------------------------- query / generate

def cmd_query(args, cfg: PipelineConfig) -> int:
    g = _read_graph(cfg.graph)
    try:
        if args.file:
            query = parse_query(_read_input(Path(args.file), "query file"))
        else:
            query = level_template(args.level, args.event, args.raw)
        result = execute(g, query)
    except (QuerySyntax, UnsupportedFeature, UnboundFilterVariable, InvalidRegex) as exc:
        raise CommandFailed(EXIT_QUERY, f"query error: {exc}") from exc
    log.info("%d row(s)", len(result))
    if args.json:
        _emit(args, {"variables": [v.name for v in result.variables], "rows": result.to_records()}, "")
    else:
        sys.stdout.write(result.to_tsv())
    return EXIT_OK


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "-", text).strip("-").lower() or "event"


def cmd_generate(args, cfg: PipelineConfig) -> int:
    g = _read_graph(cfg.graph)
    backend = make_backend(cfg.generation.backend)
    try:
        report = generate_report(g, args.event, cfg.generation, backend)
    except EmptyRetrieval as exc:
        raise CommandFailed(EXIT_EMPTY, str(exc)) from exc
    except InvalidRegex as exc:
        raise CommandFailed(EXIT_QUERY, f"query error: {exc}") from exc
    except (BackendError, CapUnsatisfiable) as exc:
        raise CommandFailed(EXIT_BACKEND, f"generation failed: {exc}") from exc
    out = Path(args.out) if args.out else cfg.reports / f"{_slug(args.event)}.json"
    _write_text(out, report.to_json())
    _write_text(out.with_suffix(".md"), report.render_markdown())
    for section, cov in report.keyword_coverage.items():
        log.info("%s coverage %.2f (%d words)", section, cov, report.word_counts()[section])
    _emit(args, {"report": str(out), "keyword_coverage": report.keyword_coverage}, str(out))
    return EXIT_OK


# ---------------------------------------------------------------- evaluate / kappa

def _load_report_text(path: Path) -> tuple[str, list[str], str]:
    """(text, matched keywords, event query) from a report JSON or plain text file."""
    raw = _read_input(path, "report")
    if path.suffix.lower() == ".json":
        try:
            report = IntelligenceReport.from_dict(json.loads(raw))
        except (ValueError, KeyError, TypeError) as exc:
            raise CommandFailed(EXIT_READ, f"{path}: not a report document: {exc}") from exc
        return report.text(), report.all_matched_keywords(), report.event_query
    return raw, [], ""


def cmd_evaluate(args, cfg: Optional[PipelineConfig]) -> int:
    text, matched, event = _load_report_text(Path(args.report))
    ref_text, _, _ = _load_report_text(Path(args.reference))
    try:
        reference = ReferenceText(event, ref_text, str(args.reference))
    except ValueError as exc:
        raise CommandFailed(EXIT_READ, f"{args.reference}: {exc}") from exc
    gold = None
    if args.gold:
        _read_input(Path(args.gold), "gold file")
        try:
            gold = read_gold(args.gold)
        except ValueError as exc:
            raise CommandFailed(EXIT_READ, str(exc)) from exc
    fluency = None
    if args.fluency:
        _read_input(Path(args.fluency), "fluency file")
        fluency = read_scores(args.fluency)
    scores = score_report(event or (gold.event_query if gold else ""), text, reference, matched, gold, fluency)
    doc = json.dumps(scores.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        _write_text(Path(args.out), doc)
    if args.json or not args.out:
        sys.stdout.write(doc)
    r1, r2 = scores.rouge["rouge1"], scores.rouge["rouge2"]
    log.info("ROUGE-1 recall %.4f, ROUGE-2 recall %.4f", r1.recall, r2.recall)
    return EXIT_OK


def _point_name(path: Path) -> str:
    for line in path.read_text(encoding="utf-8").splitlines():
        m = re.match(r"#\s*point:\s*(.+)$", line)
        if m:
            return m.group(1).strip()
    return path.stem


def cmd_kappa(args, cfg: Optional[PipelineConfig]) -> int:
    settings = cfg.evaluation if cfg else EvaluationSettings()
    labels = tuple(x.strip() for x in args.labels.split(",")) if args.labels else settings.labels
    threshold = args.threshold if args.threshold is not None else settings.kappa_threshold
    candidates = []
    rows = []
    for name in args.files:
        path = Path(name)
        _read_input(path, "annotation file")
        try:
            table = read_annotations(path, labels)
        except ValueError as exc:
            raise CommandFailed(EXIT_READ, str(exc)) from exc
        point = _point_name(path)
        kappa = cohen_kappa(table)
        candidates.append((point, table))
        rows.append({"point": point, "kappa": kappa, "kept": kappa > threshold})
    gold = filter_gold_by_kappa(candidates, threshold, args.event or "")
    if args.gold_out:
        if not args.event:
            raise CommandFailed(EXIT_ERROR, "--gold-out needs --event")
        write_gold(gold, args.gold_out)
    _emit(args, {"threshold": threshold, "points": rows},
          "point\tkappa\tkept\n" + "".join(f"{r['point']}\t{r['kappa']:.4f}\t{str(r['kept']).lower()}\n" for r in rows))
    return EXIT_OK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eventnarrative", description=__doc__.split("\n")[0])
    parser.add_argument("--config", default=DEFAULT_CONFIG, help=f"config file (default: {DEFAULT_CONFIG})")
    parser.add_argument("--quiet", action="store_true", help="only log errors")
    parser.add_argument("--json", action="store_true", help="machine-readable stdout")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse feeds and pages into the article store")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--from-files", metavar="DIR", help="read feeds/, pages/ and reports/ under DIR")
    mode.add_argument("--fetch", action="store_true", help="download the configured feeds")

    p = sub.add_parser("extract", help="extract plot points from every stored article")
    p.add_argument("--jobs", type=int, default=1, help="worker threads")

    sub.add_parser("assert", help="assert articles and plot points into the Turtle graph")

    p = sub.add_parser("query", help="run a level template or a query file against the graph")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--event", help="event query matched against headlines")
    target.add_argument("--file", help="SPARQL query file")
    p.add_argument("--level", choices=("lead", "body", "tail"), default="lead")
    p.add_argument("--raw", action="store_true", help="treat --event as a regular expression")

    p = sub.add_parser("generate", help="generate an intelligence report for an event")
    p.add_argument("--event", required=True)
    p.add_argument("--out", help="report path (default: <reports>/<event>.json)")

    p = sub.add_parser("evaluate", help="score a report against a reference")
    p.add_argument("--report", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--gold", help="gold plot point file")
    p.add_argument("--fluency", help="file of 1..5 Likert scores")
    p.add_argument("--out", help="write the score document here")

    p = sub.add_parser("kappa", help="annotator agreement per plot point")
    p.add_argument("files", nargs="+", help="annotation files, one per plot point")
    p.add_argument("--labels", help="comma-separated label set")
    p.add_argument("--threshold", type=float, help="keep points with kappa above this")
    p.add_argument("--event", help="event query for the gold file header")
    p.add_argument("--gold-out", help="write retained points as a gold file")
    return parser


COMMANDS = {
    "ingest": cmd_ingest, "extract": cmd_extract, "assert": cmd_assert, "query": cmd_query,
    "generate": cmd_generate, "evaluate": cmd_evaluate, "kappa": cmd_kappa,
}
CONFIG_OPTIONAL = ("evaluate", "kappa")


def main(argv: Optional[Sequence[str]] = None, fetcher: Optional[Fetcher] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.ERROR if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        cfg = None
        if args.command not in CONFIG_OPTIONAL or Path(args.config).exists():
            cfg = load_config(args.config)
        if args.command == "ingest":
            return cmd_ingest(args, cfg, fetcher)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except CommandFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (LabelOutsideSet, ScoreOutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
