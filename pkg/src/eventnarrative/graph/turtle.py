"""Canonical Turtle writer and a reader for the subset it emits.

The writer sorts subjects, predicates within a subject, and objects within
a predicate, so equal graphs always serialize to identical bytes. The reader
accepts prefix directives (``@prefix`` or ``PREFIX``), IRIs, prefixed names,
``a``, short double-quoted string literals with optional ``^^`` datatype, and
``;``/``,`` lists. Anything else is a :class:`TurtleSyntax` error.
"""
from __future__ import annotations

import bisect
import re
from itertools import groupby

from ..errors import TurtleSyntax
from .store import Graph
from .terms import EPG, IRI, NARR, RDF, RDF_TYPE, XSD, XSD_DATETIME, XSD_STRING, Literal, Triple, term_key

PREFIXES = {"epg": EPG, "narr": NARR, "rdf": RDF, "xsd": XSD}

_LOCAL_OK = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _iri(value: str, prefixes: dict[str, str]) -> str:
    best = None
    for name, ns in prefixes.items():
        if value.startswith(ns) and _LOCAL_OK.fullmatch(value[len(ns):]):
            if best is None or len(ns) > len(prefixes[best]):
                best = name
    if best is not None:
        return f"{best}:{value[len(prefixes[best]):]}"
    return f"<{value}>"


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _term(t, prefixes) -> str:
    if isinstance(t, IRI):
        return _iri(t.value, prefixes)
    lit = f'"{_escape(t.lexical)}"'
    if t.datatype != XSD_STRING:
        lit += "^^" + _iri(t.datatype, prefixes)
    return lit


def serialize_turtle(g: Graph, prefixes: dict[str, str] = PREFIXES) -> str:
    lines = [f"@prefix {name}: <{ns}> ." for name, ns in sorted(prefixes.items())]
    for subject, s_triples in groupby(g, key=lambda t: t.s):
        lines.append("")
        lines.append(_term(subject, prefixes))
        by_pred = [(p, [t.o for t in ts]) for p, ts in groupby(s_triples, key=lambda t: t.p)]
        for i, (pred, objects) in enumerate(by_pred):
            verb = "a" if pred.value == RDF_TYPE else _term(pred, prefixes)
            objs = ", ".join(_term(o, prefixes) for o in sorted(objects, key=term_key))
            end = " ." if i == len(by_pred) - 1 else " ;"
            lines.append(f"    {verb} {objs}{end}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- reader

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<directive>@prefix\b|@base\b|PREFIX\b|BASE\b)
  | (?P<dtmark>\^\^)
  | (?P<string>")
  | (?P<pname>(?:[A-Za-z](?:[\w.\-]*[\w\-])?)?:(?:[\w\-]|\.(?=[\w\-]))*)
  | (?P<a>a(?![\w:\-]))
  | (?P<punct>[.;,])
    """,
    re.VERBOSE,
)
_STRING_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", "b": "\b", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.prefixes: dict[str, str] = {}
        self._newlines = [i for i, ch in enumerate(text) if ch == "\n"]
        self._peeked = None

    def where(self, pos: int) -> tuple[int, int]:
        line = bisect.bisect_left(self._newlines, pos)
        col = pos - (self._newlines[line - 1] + 1 if line else 0)
        return line + 1, col + 1

    def fail(self, message: str, pos: int):
        raise TurtleSyntax(message, *self.where(pos))

    def _read_string(self, start: int) -> tuple[str, int]:
        if self.text.startswith('"""', start):
            self.fail("long string literals are not supported", start)
        i = start + 1
        out = []
        n = len(self.text)
        while i < n:
            ch = self.text[i]
            if ch == '"':
                return "".join(out), i + 1
            if ch in "\n\r":
                break
            if ch == "\\":
                if i + 1 >= n:
                    break
                esc = self.text[i + 1]
                if esc in _STRING_ESCAPES:
                    out.append(_STRING_ESCAPES[esc])
                    i += 2
                    continue
                width = {"u": 4, "U": 8}.get(esc)
                digits = self.text[i + 2:i + 2 + width] if width else ""
                if not width or len(digits) != width or not re.fullmatch(r"[0-9A-Fa-f]+", digits):
                    self.fail(f"invalid escape sequence \\{esc}", i)
                out.append(chr(int(digits, 16)))
                i += 2 + width
                continue
            out.append(ch)
            i += 1
        self.fail("unterminated string literal", start)

    def next(self):
        if self._peeked is not None:
            tok, self._peeked = self._peeked, None
            return tok
        while True:
            if self.pos >= len(self.text):
                return ("eof", None, self.pos)
            m = _TOKEN_RE.match(self.text, self.pos)
            if not m:
                self.fail(f"unexpected character {self.text[self.pos]!r}", self.pos)
            kind = m.lastgroup
            start = self.pos
            if kind == "string":
                value, self.pos = self._read_string(start)
                if self.text.startswith("@", self.pos):
                    self.fail("language-tagged literals are not supported", self.pos)
                return ("string", value, start)
            self.pos = m.end()
            if kind == "ws":
                continue
            return (kind, m.group(), start)

    def peek(self):
        if self._peeked is None:
            self._peeked = self.next()
        return self._peeked

    def expect_punct(self, ch: str):
        kind, value, pos = self.next()
        if kind != "punct" or value != ch:
            self.fail(f"expected {ch!r}, found {value!r}" if value else f"expected {ch!r} before end of input", pos)

    def resolve(self, kind: str, value: str, pos: int) -> IRI:
        if kind == "iri":
            raw = value[1:-1]
        else:
            prefix, local = value.split(":", 1)
            if prefix not in self.prefixes:
                self.fail(f"undeclared prefix {prefix!r}", pos)
            raw = self.prefixes[prefix] + local
        try:
            return IRI(raw)
        except ValueError:
            self.fail(f"invalid IRI {raw!r}", pos)

    def iri(self, what: str) -> IRI:
        kind, value, pos = self.next()
        if kind not in ("iri", "pname"):
            self.fail(f"expected {what} IRI, found {value!r}", pos)
        return self.resolve(kind, value, pos)

    def obj(self):
        kind, value, pos = self.next()
        if kind in ("iri", "pname"):
            return self.resolve(kind, value, pos)
        if kind != "string":
            self.fail(f"expected object, found {value!r}", pos)
        datatype = XSD_STRING
        if self.peek()[0] == "dtmark":
            self.next()
            datatype = self.iri("datatype").value
        if datatype not in (XSD_STRING, XSD_DATETIME):
            self.fail(f"unsupported datatype <{datatype}>", pos)
        try:
            return Literal(value, datatype)
        except ValueError as exc:
            self.fail(str(exc), pos)

    def directive(self, word: str, pos: int):
        if word.lower() in ("@base", "base"):
            self.fail("base directives are not supported", pos)
        kind, value, ppos = self.next()
        if kind != "pname" or not value.endswith(":") or value.count(":") != 1:
            self.fail("expected prefix name", ppos)
        kind2, iri, ipos = self.next()
        if kind2 != "iri":
            self.fail("expected namespace IRI", ipos)
        self.prefixes[value[:-1]] = iri[1:-1]
        if word == "@prefix":
            self.expect_punct(".")

    def parse(self) -> Graph:
        g = Graph()
        while True:
            kind, value, pos = self.peek()
            if kind == "eof":
                return g
            if kind == "directive":
                self.next()
                self.directive(value, pos)
                continue
            subject = self.iri("subject")
            while True:
                kind, value, pos = self.next()
                if kind == "a":
                    pred = IRI(RDF_TYPE)
                elif kind in ("iri", "pname"):
                    pred = self.resolve(kind, value, pos)
                else:
                    self.fail(f"expected predicate, found {value!r}", pos)
                g.add(Triple(subject, pred, self.obj()))
                while self.peek()[:2] == ("punct", ","):
                    self.next()
                    g.add(Triple(subject, pred, self.obj()))
                kind, value, pos = self.next()
                if (kind, value) == ("punct", "."):
                    break
                if (kind, value) != ("punct", ";"):
                    self.fail(f"expected ';' or '.', found {value!r}", pos)
                # trailing ';' before '.'
                if self.peek()[:2] == ("punct", "."):
                    self.next()
                    break


def parse_turtle(text: str) -> Graph:
    return _Reader(text).parse()
