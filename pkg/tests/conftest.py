from __future__ import annotations

import json
import shutil
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from eventnarrative.cli import main
from eventnarrative.corpus import FeedSource, extract_article, parse_rss
from eventnarrative.graph import parse_turtle

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"
GRAPH_FIXTURE = FIXTURES / "oceangate_graph.ttl"


@pytest.fixture
def corpus_dir(tmp_path) -> Path:
    dest = tmp_path / "corpus"
    shutil.copytree(CORPUS, dest)
    return dest


@pytest.fixture
def mini_dir(tmp_path) -> Path:
    dest = tmp_path / "mini"
    shutil.copytree(FIXTURES / "mini", dest)
    return dest


@pytest.fixture(scope="session")
def fixture_graph():
    return parse_turtle(GRAPH_FIXTURE.read_text(encoding="utf-8"))


def run_pipeline(root: Path, *extra: str) -> Path:
    """ingest, extract and assert the corpus copy at ``root``; returns the graph path."""
    config = str(root / "pipeline.ini")
    for argv in (["ingest", "--from-files", str(root)], ["extract"], ["assert"]):
        code = main(["--quiet", "--config", config, *extra, *argv])
        assert code == 0, argv
    return root / "work" / "epg.ttl"


@pytest.fixture(scope="session")
def corpus_graph(tmp_path_factory):
    root = tmp_path_factory.mktemp("pipeline") / "corpus"
    shutil.copytree(CORPUS, root)
    return parse_turtle(run_pipeline(root).read_text(encoding="utf-8"))


def load_fixture_article(path_suffix: str):
    """Extract one corpus article straight from its feed entry and page."""
    for feed in sorted((CORPUS / "feeds").glob("*.xml")):
        source = FeedSource(feed.stem, f"https://example.invalid/{feed.name}")
        for entry in parse_rss(feed.read_text(encoding="utf-8"), source):
            if entry.link.endswith(path_suffix):
                host_path = entry.link.split("://", 1)[1]
                html = (CORPUS / "pages" / host_path).read_text(encoding="utf-8")
                return extract_article(html, entry, source)
    raise LookupError(path_suffix)


@pytest.fixture(scope="session")
def titan_article():
    return load_fixture_article("oceangate-titan-missing.html")


class _Handler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def _reply(self, status, body, content_type="application/json"):
        data = body.encode("utf-8") if isinstance(body, str) else body
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        payload = json.loads(self.rfile.read(length) or b"{}")
        server = self.server
        server.requests.append({"path": self.path, "json": payload, "headers": dict(self.headers)})
        status, body = server.respond(self.path, payload, len(server.requests))
        self._reply(status, body if isinstance(body, str) else json.dumps(body))

    def do_GET(self):
        server = self.server
        server.requests.append({"path": self.path, "json": None, "headers": dict(self.headers)})
        status, body = server.respond(self.path, None, len(server.requests))
        self._reply(status, body, "text/html; charset=utf-8")


@pytest.fixture
def http_server():
    """Local HTTP server; set ``server.respond = fn(path, json, n) -> (status, body)``."""
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    server.requests = []
    server.respond = lambda path, payload, n: (404, "{}")
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    server.url = f"http://127.0.0.1:{server.server_address[1]}"
    yield server
    server.shutdown()
    server.server_close()



ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or report.failed:
        if report.when == "call" or number not in ACCEPTANCE_RESULTS:
            ACCEPTANCE_RESULTS[number] = ("PASS" if report.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        status, title = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"{status} criterion {number}: {title}")
