"""News feed parsing, article extraction and the line-delimited article store."""
from __future__ import annotations

import hashlib
import json
import logging
import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from email.utils import parsedate_to_datetime
from pathlib import Path
from typing import Iterable, Optional, Protocol
from urllib.parse import urlsplit
from xml.etree import ElementTree as ET

from bs4 import BeautifulSoup

from .errors import CorruptRecord, EmptyBody, IoFailure, MalformedFeed

logger = logging.getLogger(__name__)

FEED_KINDS = ("rss", "report")
MEDIA_KINDS = ("photo", "video", "audio")


@dataclass(frozen=True)
class FeedSource:
    name: str
    url: str
    kind: str = "rss"

    def __post_init__(self):
        if not self.url:
            raise ValueError(f"feed source {self.name!r} has an empty url")
        if self.kind not in FEED_KINDS:
            raise ValueError(f"unknown feed kind {self.kind!r}")


@dataclass(frozen=True)
class FeedEntry:
    title: str
    link: str
    authors: tuple[str, ...] = ()
    summary: Optional[str] = None
    published: Optional[datetime] = None


@dataclass(frozen=True)
class ArticleRecord:
    id: str
    headline: str
    authors: tuple[str, ...]
    source: str
    url: str
    published: Optional[datetime]
    body_text: str
    paragraphs: tuple[str, ...]
    media_links: tuple[tuple[str, str], ...]
    fetched_at: datetime

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "headline": self.headline,
            "authors": list(self.authors),
            "source": self.source,
            "url": self.url,
            "published": format_timestamp(self.published),
            "body_text": self.body_text,
            "paragraphs": list(self.paragraphs),
            "media_links": [list(m) for m in self.media_links],
            "fetched_at": format_timestamp(self.fetched_at),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ArticleRecord":
        fetched = parse_timestamp(d["fetched_at"])
        if fetched is None:
            raise ValueError("fetched_at missing or unparseable")
        media = []
        for kind, url in d.get("media_links", []):
            if kind not in MEDIA_KINDS or not url:
                raise ValueError(f"bad media link {kind!r}, {url!r}")
            media.append((kind, url))
        return cls(
            id=str(d["id"]),
            headline=str(d["headline"]),
            authors=tuple(d.get("authors", [])),
            source=str(d["source"]),
            url=str(d["url"]),
            published=parse_timestamp(d.get("published")),
            body_text=str(d["body_text"]),
            paragraphs=tuple(d["paragraphs"]),
            media_links=tuple(media),
            fetched_at=fetched,
        )


def article_id(url: str, body_text: str) -> str:
    digest = hashlib.sha256(f"{url}\n{body_text}".encode("utf-8")).hexdigest()
    return digest[:16]


def utcnow() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def format_timestamp(ts: Optional[datetime]) -> Optional[str]:
    if ts is None:
        return None
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _to_utc(ts: datetime) -> datetime:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def parse_timestamp(value: Optional[str]) -> Optional[datetime]:
    """RFC 822 or ISO 8601 to an aware UTC datetime; None when unparseable."""
    if not value or not value.strip():
        return None
    value = value.strip()
    try:
        iso = value[:-1] + "+00:00" if value.endswith("Z") else value
        return _to_utc(datetime.fromisoformat(iso))
    except ValueError:
        pass
    try:
        return _to_utc(parsedate_to_datetime(value))
    except (TypeError, ValueError, IndexError):
        logger.debug("unparseable timestamp %r", value)
        return None


# ---------------------------------------------------------------- RSS


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _strip_markup(text: str) -> str:
    if "<" in text:
        text = BeautifulSoup(text, "html.parser").get_text(" ")
    return " ".join(text.split())


def parse_rss(feed_xml: str, source: FeedSource) -> list[FeedEntry]:
    """Parse an RSS 2.0 document into feed entries, in document order."""
    try:
        root = ET.fromstring(feed_xml.encode("utf-8") if isinstance(feed_xml, str) else feed_xml)
    except ET.ParseError as exc:
        raise MalformedFeed(f"{source.name}: {exc}") from exc

    entries = []
    for item in root.iter():
        if _local(item.tag) != "item":
            continue
        title = link = ""
        summary = None
        published = None
        authors: list[str] = []
        for child in item:
            name = _local(child.tag)
            text = (child.text or "").strip()
            if name == "title":
                title = _strip_markup(text)
            elif name == "link":
                link = text
            elif name in ("author", "creator"):
                if text:
                    authors.append(text)
            elif name == "description":
                summary = _strip_markup(text) or None
            elif name in ("pubDate", "date"):
                published = parse_timestamp(text)
        if not link:
            logger.warning("%s: skipping item %r without a link", source.name, title)
            continue
        entries.append(FeedEntry(title, link, tuple(authors), summary, published))
    return entries


# ---------------------------------------------------------------- HTML

_STRIP_TAGS = ("script", "style", "noscript", "nav", "header", "footer", "aside", "form", "iframe", "template")


def _clean(text: str) -> str:
    return " ".join(text.split())


def extract_article(
    html: str,
    entry: FeedEntry,
    source: FeedSource,
    fetched_at: Optional[datetime] = None,
) -> ArticleRecord:
    """Pull headline, paragraphs and media links out of an article page.

    Body paragraphs come from the ``<p>`` elements of the single container
    holding the most paragraph text; navigation, scripts and styles are dropped
    first. Raises EmptyBody when no paragraph text survives.
    """
    if not html or not html.strip():
        raise EmptyBody(f"{entry.link}: empty document")
    soup = BeautifulSoup(html, "html.parser")

    media: list[tuple[str, str]] = []
    for tag in soup.find_all(["img", "video", "audio"]):
        if tag.find_parent(_STRIP_TAGS) is not None:
            continue
        kind = {"img": "photo", "video": "video", "audio": "audio"}[tag.name]
        src = (tag.get("src") or "").strip()
        if not src and tag.name != "img":
            nested = tag.find("source")
            src = (nested.get("src") or "").strip() if nested else ""
        if src and (kind, src) not in media:
            media.append((kind, src))

    h1 = soup.find("h1")
    h1_text = _clean(h1.get_text(" ")) if h1 else ""
    meta_published = soup.find("meta", attrs={"property": "article:published_time"})

    for tag in soup.find_all(_STRIP_TAGS):
        tag.decompose()

    groups: dict[int, list] = {}
    order: list[int] = []
    for p in soup.find_all("p"):
        text = _clean(p.get_text(" "))
        if not text:
            continue
        key = id(p.parent)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(text)
    if not order:
        raise EmptyBody(f"{entry.link}: no paragraph text")
    best = max(order, key=lambda k: (sum(len(t) for t in groups[k]), -order.index(k)))
    paragraphs = tuple(groups[best])
    body_text = " ".join(paragraphs)

    headline = entry.title or h1_text
    if not headline and soup.title is not None:
        headline = _clean(soup.title.get_text(" "))
    published = entry.published
    if published is None and meta_published is not None:
        published = parse_timestamp(meta_published.get("content"))

    return ArticleRecord(
        id=article_id(entry.link, body_text),
        headline=headline,
        authors=tuple(entry.authors),
        source=source.name,
        url=entry.link,
        published=published,
        body_text=body_text,
        paragraphs=paragraphs,
        media_links=tuple(media),
        fetched_at=fetched_at or utcnow(),
    )


def import_report_document(
    text: str,
    url: str,
    source: FeedSource,
    published: Optional[datetime] = None,
    fetched_at: Optional[datetime] = None,
) -> ArticleRecord:
    """Import a locally supplied report (plain text or loose HTML).

    Plain text: the first non-empty line is the headline and blank-line
    separated blocks are paragraphs. HTML goes through :func:`extract_article`.
    """
    if re.search(r"<\s*(p|html|body)\b", text, re.I):
        return extract_article(text, FeedEntry("", url, (), None, published), source, fetched_at)
    lines = text.strip().splitlines()
    if not lines:
        raise EmptyBody(f"{url}: empty document")
    headline = _clean(lines[0])
    rest = "\n".join(lines[1:])
    paragraphs = tuple(p for p in (_clean(b) for b in re.split(r"\n\s*\n", rest)) if p)
    if not paragraphs:
        raise EmptyBody(f"{url}: no paragraph text")
    body_text = " ".join(paragraphs)
    return ArticleRecord(
        id=article_id(url, body_text),
        headline=headline,
        authors=(),
        source=source.name,
        url=url,
        published=published,
        body_text=body_text,
        paragraphs=paragraphs,
        media_links=(),
        fetched_at=fetched_at or utcnow(),
    )


# ---------------------------------------------------------------- fetching


class Fetcher(Protocol):
    def fetch(self, url: str) -> str: ...


class HttpFetcher:
    """Plain GET with a timeout; the only networked piece of ingest."""

    def __init__(self, timeout: float = 20.0, user_agent: str = "eventnarrative/0.1"):
        self.timeout = timeout
        self.user_agent = user_agent

    def fetch(self, url: str) -> str:
        import requests

        resp = requests.get(url, timeout=self.timeout, headers={"User-Agent": self.user_agent})
        resp.raise_for_status()
        return resp.text


class DirectoryFetcher:
    """Resolve URLs against a mirrored directory tree: ``root/host/path``.

    ``http://news.example.com/a/b.html`` maps to ``root/news.example.com/a/b.html``;
    a path ending in ``/`` maps to ``index.html``.
    """

    def __init__(self, root: Path):
        self.root = Path(root)

    def path_for(self, url: str) -> Path:
        parts = urlsplit(url)
        path = parts.path or "/"
        if path.endswith("/"):
            path += "index.html"
        return self.root / parts.netloc / path.lstrip("/")

    def fetch(self, url: str) -> str:
        path = self.path_for(url)
        try:
            return path.read_text(encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"{url}: {exc}") from exc


# ---------------------------------------------------------------- store


@dataclass
class ArticleStore:
    path: Path
    records: list[ArticleRecord] = field(default_factory=list)
    load_errors: list[CorruptRecord] = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        self.path = Path(self.path)
        self._ids = {r.id for r in self.records}
        if len(self._ids) != len(self.records):
            raise ValueError("duplicate article ids in store")
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __contains__(self, article_id: str) -> bool:
        return article_id in self._ids

    def get(self, article_id: str) -> Optional[ArticleRecord]:
        for r in self.records:
            if r.id == article_id:
                return r
        return None

    def add(self, record: ArticleRecord) -> bool:
        """Append unless a record with the same id exists. Returns True if added."""
        with self._lock:
            if record.id in self._ids:
                return False
            self._ids.add(record.id)
            self.records.append(record)
            return True

    def extend(self, records: Iterable[ArticleRecord]) -> int:
        return sum(self.add(r) for r in records)


def save_store(store: ArticleStore) -> None:
    lines = [json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=True) + "\n" for r in store.records]
    try:
        store.path.parent.mkdir(parents=True, exist_ok=True)
        with open(store.path, "w", encoding="utf-8", newline="\n") as fh:
            fh.writelines(lines)
    except OSError as exc:
        raise IoFailure(f"cannot write {store.path}: {exc}") from exc


def load_store(path) -> ArticleStore:
    """Read a store file. Corrupt lines are skipped and reported on ``load_errors``."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            raw_lines = fh.read().split("\n")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc

    store = ArticleStore(path)
    for lineno, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        try:
            record = ArticleRecord.from_dict(json.loads(line))
        except (ValueError, KeyError, TypeError) as exc:
            err = CorruptRecord(lineno, str(exc))
            logger.warning("%s: %s", path, err)
            store.load_errors.append(err)
            continue
        if not store.add(record):
            logger.warning("%s: line %d duplicates article %s", path, lineno, record.id)
    return store
