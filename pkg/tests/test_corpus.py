from __future__ import annotations

from datetime import datetime, timezone

import pytest
from hypothesis import given, strategies as st

from conftest import CORPUS
from eventnarrative.corpus import (
    ArticleRecord, ArticleStore, DirectoryFetcher, FeedEntry, FeedSource, HttpFetcher, article_id,
    extract_article, format_timestamp, import_report_document, load_store, parse_rss, parse_timestamp, save_store,
)
from eventnarrative.errors import EmptyBody, IoFailure, MalformedFeed
from oracles import article_id_oracle

SRC = FeedSource("wire", "https://wire.example/rss.xml")
UTC = timezone.utc


def _record(n: int, **kw) -> ArticleRecord:
    body = f"Paragraph number {n}."
    base = dict(
        id=article_id(f"https://x.example/{n}", body), headline=f"Story {n}", authors=("A. Writer",),
        source="wire", url=f"https://x.example/{n}", published=datetime(2023, 6, 18, tzinfo=UTC),
        body_text=body, paragraphs=(body,), media_links=(("photo", "/a.jpg"),),
        fetched_at=datetime(2023, 6, 19, 8, 0, tzinfo=UTC),
    )
    base.update(kw)
    return ArticleRecord(**base)


def test_parse_rss_fixture_feed():
    xml = (CORPUS / "feeds" / "globalwire.xml").read_text(encoding="utf-8")
    entries = parse_rss(xml, SRC)
    assert len(entries) == 6
    first = entries[0]
    assert first.title == "Oceangate submersible missing near Titanic wreck"
    assert first.link == "https://news.globalwire.example/world/oceangate-titan-missing.html"
    assert first.authors == ("Dana Whitfield",)
    assert first.published == datetime(2023, 6, 18, 21, 0, tzinfo=UTC)


def test_parse_rss_skips_items_without_link_and_reads_dc_creator():
    xml = """<rss xmlns:dc="http://purl.org/dc/elements/1.1/"><channel>
      <item><title>No link</title></item>
      <item><title>Has &lt;b&gt;link&lt;/b&gt;</title><link>https://a.example/1</link>
        <dc:creator>Sam Lee</dc:creator><dc:date>2023-02-03T21:00:00Z</dc:date></item>
    </channel></rss>"""
    entries = parse_rss(xml, SRC)
    assert [e.link for e in entries] == ["https://a.example/1"]
    assert entries[0].title == "Has link"
    assert entries[0].authors == ("Sam Lee",)
    assert entries[0].published == datetime(2023, 2, 3, 21, 0, tzinfo=UTC)


def test_parse_rss_malformed():
    with pytest.raises(MalformedFeed):
        parse_rss("<rss><channel><item></channel>", SRC)


def test_extract_article_strips_boilerplate():
    page = CORPUS / "pages" / "news.globalwire.example" / "world" / "oceangate-titan-missing.html"
    entry = FeedEntry("Headline from feed", "https://news.globalwire.example/world/oceangate-titan-missing.html")
    a = extract_article(page.read_text(encoding="utf-8"), entry, SRC)
    assert a.headline == "Headline from feed"
    assert len(a.paragraphs) == 4
    assert a.paragraphs[0].startswith("The OceanGate Expeditions submersible")
    assert not any("Most read" in p or "Copyright" in p or p == "Home" for p in a.paragraphs)
    assert a.media_links == (("photo", "/img/titan-launch.jpg"),)
    # falls back to the page's published meta tag when the feed has no date
    assert a.published == datetime(2023, 6, 18, 21, 0, tzinfo=UTC)
    assert a.id == article_id_oracle(entry.link, " ".join(a.paragraphs))


def test_extract_article_fallbacks_and_media():
    html = """<html><head><title>Page title</title></head><body>
      <h1>Main heading</h1>
      <div><p>Short.</p></div>
      <div class="story"><p>First real paragraph of the story.</p><p>Second   paragraph
        with   spacing.</p>
        <video><source src="/v/clip.mp4"></video><audio src="/a/clip.mp3"></audio>
        <img src="/i/one.jpg"><img src="/i/one.jpg"></div>
      <script>var x = "<p>not text</p>";</script>
    </body></html>"""
    a = extract_article(html, FeedEntry("", "https://a.example/s"), SRC)
    assert a.headline == "Main heading"
    assert a.paragraphs == ("First real paragraph of the story.", "Second paragraph with spacing.")
    assert a.media_links == (("video", "/v/clip.mp4"), ("audio", "/a/clip.mp3"), ("photo", "/i/one.jpg"))


@pytest.mark.parametrize("html", ["", "   ", "<html><body><nav><p>Menu</p></nav></body></html>"])
def test_extract_article_empty_body(html):
    with pytest.raises(EmptyBody):
        extract_article(html, FeedEntry("t", "https://a.example/e"), SRC)


def test_import_report_document_plain_text():
    src = FeedSource("reports", "report:sitrep.txt", "report")
    text = "Situation report: derailment\n\nA train left the tracks.\nCrews responded.\n\nResidents left.\n"
    a = import_report_document(text, "report:sitrep.txt", src)
    assert a.headline == "Situation report: derailment"
    assert a.paragraphs == ("A train left the tracks. Crews responded.", "Residents left.")
    assert a.source == "reports"
    with pytest.raises(EmptyBody):
        import_report_document("Only a headline\n", "report:x", src)


def test_import_report_document_html_goes_through_extractor():
    src = FeedSource("reports", "report:x", "report")
    a = import_report_document("<html><body><p>Body text here.</p></body></html>", "report:x.html", src)
    assert a.paragraphs == ("Body text here.",)


def test_timestamps():
    assert parse_timestamp("Sun, 18 Jun 2023 21:00:00 GMT") == datetime(2023, 6, 18, 21, tzinfo=UTC)
    assert parse_timestamp("2023-06-18T21:00:00+02:00") == datetime(2023, 6, 18, 19, tzinfo=UTC)
    assert parse_timestamp("2023-06-18") == datetime(2023, 6, 18, tzinfo=UTC)
    assert parse_timestamp("yesterday") is None
    assert parse_timestamp(None) is None
    assert format_timestamp(datetime(2023, 6, 18, 21, tzinfo=UTC)) == "2023-06-18T21:00:00Z"


def test_record_round_trip():
    r = _record(1)
    assert ArticleRecord.from_dict(r.to_dict()) == r


def test_store_dedupes_by_id(tmp_path):
    store = ArticleStore(tmp_path / "s.jsonl")
    assert store.add(_record(1))
    assert not store.add(_record(1, headline="changed"))
    assert store.extend([_record(1), _record(2)]) == 1
    assert len(store) == 2 and _record(2).id in store


def test_store_save_load(tmp_path):
    store = ArticleStore(tmp_path / "sub" / "s.jsonl", [_record(1), _record(2)])
    save_store(store)
    loaded = load_store(store.path)
    assert loaded.records == store.records
    assert loaded.load_errors == []


def test_empty_store_is_zero_bytes(tmp_path):
    store = ArticleStore(tmp_path / "s.jsonl")
    save_store(store)
    assert store.path.read_bytes() == b""
    assert len(load_store(store.path)) == 0


def test_corrupt_lines_are_reported_and_skipped(tmp_path):
    store = ArticleStore(tmp_path / "s.jsonl", [_record(1), _record(2)])
    save_store(store)
    lines = store.path.read_text(encoding="utf-8").splitlines()
    store.path.write_text(lines[0] + "\n{not json\n" + '{"id": "x"}\n' + lines[1] + "\n", encoding="utf-8")
    loaded = load_store(store.path)
    assert [r.id for r in loaded] == [_record(1).id, _record(2).id]
    assert [e.line for e in loaded.load_errors] == [2, 3]


def test_load_missing_store(tmp_path):
    with pytest.raises(IoFailure):
        load_store(tmp_path / "missing.jsonl")


def test_directory_fetcher(tmp_path):
    (tmp_path / "a.example" / "news").mkdir(parents=True)
    (tmp_path / "a.example" / "news" / "x.html").write_text("X", encoding="utf-8")
    (tmp_path / "a.example" / "index.html").write_text("I", encoding="utf-8")
    f = DirectoryFetcher(tmp_path)
    assert f.fetch("https://a.example/news/x.html") == "X"
    assert f.fetch("https://a.example/") == "I"
    with pytest.raises(IoFailure):
        f.fetch("https://a.example/missing.html")


def test_http_fetcher(http_server):
    http_server.respond = lambda path, payload, n: (200, "<p>hello</p>") if path == "/ok" else (404, "gone")
    f = HttpFetcher(timeout=5)
    assert f.fetch(http_server.url + "/ok") == "<p>hello</p>"
    with pytest.raises(Exception):
        f.fetch(http_server.url + "/missing")


@given(st.text(max_size=30), st.text(max_size=60))
def test_article_id_matches_oracle(url, body):
    assert article_id(url, body) == article_id_oracle(url, body)
    assert len(article_id(url, body)) == 16
