"""Parser for the SELECT subset used by the retrieval templates.

Supported: ``PREFIX`` declarations, ``SELECT [DISTINCT] ?v... | *``, an
optional ``WHERE``, basic triple patterns (with ``;`` and ``,`` lists and
``a`` for ``rdf:type``), one ``{...} UNION {...}`` block, and
``FILTER regex(str(?v), "pattern"[, "flags"])``. Everything else is rejected
with :class:`UnsupportedFeature` or :class:`QuerySyntax`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from ..errors import InvalidRegex, QuerySyntax, UnsupportedFeature
from ..graph.terms import EPG, IRI, NARR, RDF, RDF_TYPE, XSD, XSD_DATETIME, XSD_STRING, Literal

DEFAULT_PREFIXES = {"rdf": RDF, "xsd": XSD, "narr": NARR, "epg": EPG}

UNSUPPORTED_KEYWORDS = frozenset("""
    OPTIONAL ORDER LIMIT OFFSET GROUP HAVING BIND VALUES MINUS SERVICE GRAPH
    CONSTRUCT ASK DESCRIBE INSERT DELETE FROM NAMED EXISTS NOT COUNT SUM AVG MIN
    MAX SAMPLE GROUP_CONCAT REDUCED BASE LOAD CLEAR DROP CREATE WITH USING AS
""".split())

_REGEX_FLAGS = {"i": re.IGNORECASE, "s": re.DOTALL, "m": re.MULTILINE, "x": re.VERBOSE}


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


Node = Union[Var, IRI, Literal]


@dataclass(frozen=True)
class TriplePattern:
    s: Node
    p: Node
    o: Node

    def variables(self) -> set[Var]:
        return {x for x in (self.s, self.p, self.o) if isinstance(x, Var)}


@dataclass(frozen=True)
class RegexFilter:
    variable: Var
    pattern: str
    flags: str = "i"
    use_str: bool = True

    def compiled(self) -> re.Pattern:
        bits = 0
        for f in self.flags:
            bits |= _REGEX_FLAGS[f]
        return re.compile(self.pattern, bits)


@dataclass(frozen=True)
class PatternGroup:
    patterns: tuple[TriplePattern, ...] = ()
    filters: tuple[RegexFilter, ...] = ()

    def variables(self) -> set[Var]:
        out: set[Var] = set()
        for tp in self.patterns:
            out |= tp.variables()
        return out


@dataclass(frozen=True)
class SelectQuery:
    distinct: bool
    projection: tuple[Var, ...]
    patterns: tuple[TriplePattern, ...] = ()
    filters: tuple[RegexFilter, ...] = ()
    unions: Optional[tuple[PatternGroup, ...]] = None

    def variables(self) -> set[Var]:
        out = PatternGroup(self.patterns).variables()
        for grp in self.unions or ():
            out |= grp.variables()
        return out

    def pattern_count(self) -> int:
        return len(self.patterns) + sum(len(g.patterns) for g in self.unions or ())


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<var>[?$][A-Za-z_][\w]*)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*"|'(?:[^'\\\n\r]|\\.)*')
  | (?P<bnode>_:[\w\-]*|\[\s*\])
  | (?P<pname>(?:[A-Za-z](?:[\w.\-]*[\w\-])?)?:(?:[\w\-]|\.(?=[\w\-]))*)
  | (?P<number>[+-]?\d+(?:\.\d+)?)
  | (?P<word>[A-Za-z_][\w]*)
  | (?P<dtmark>\^\^)
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<punct>[{}().,;*])
  | (?P<path>[/|^+!?])
    """,
    re.VERBOSE,
)
_STRING_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", "b": "\b", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(body: str, pos: int) -> str:
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            esc = body[i + 1]
            if esc not in _STRING_ESCAPES:
                raise QuerySyntax(f"invalid escape \\{esc} in string", pos + i)
            out.append(_STRING_ESCAPES[esc])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise QuerySyntax(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.prefixes = dict(DEFAULT_PREFIXES)

    # -- token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def is_word(self, word: str) -> bool:
        return self.tok.kind == "word" and self.tok.value.upper() == word

    def is_punct(self, ch: str) -> bool:
        return self.tok.kind == "punct" and self.tok.value == ch

    def expect_punct(self, ch: str) -> _Tok:
        if not self.is_punct(ch):
            self.error(f"expected '{ch}'")
        return self.advance()

    def expect_word(self, word: str) -> _Tok:
        if not self.is_word(word):
            self.error(f"expected {word}")
        return self.advance()

    def error(self, expected: str):
        t = self.tok
        self.check_unsupported(t)
        found = "end of query" if t.kind == "eof" else repr(t.value)
        raise QuerySyntax(f"{expected}, found {found}", t.pos)

    def check_unsupported(self, t: _Tok):
        if t.kind == "word" and t.value.upper() in UNSUPPORTED_KEYWORDS:
            raise UnsupportedFeature(t.value.upper())
        if t.kind == "bnode":
            raise UnsupportedFeature("blank node")
        if t.kind == "path":
            raise UnsupportedFeature("property path")
        if t.kind == "number":
            raise UnsupportedFeature("numeric literal")
        if t.kind == "lang":
            raise UnsupportedFeature("language tag")

    # -- grammar
    def query(self) -> SelectQuery:
        while self.is_word("PREFIX"):
            self.advance()
            name = self.advance()
            if name.kind != "pname" or not name.value.endswith(":") or name.value.count(":") != 1:
                self.i -= 1
                self.error("expected prefix name")
            iri = self.advance()
            if iri.kind != "iri":
                self.i -= 1
                self.error("expected namespace IRI")
            self.prefixes[name.value[:-1]] = iri.value[1:-1]
        self.expect_word("SELECT")
        distinct = False
        if self.is_word("DISTINCT"):
            self.advance()
            distinct = True
        projection: list[Var] = []
        star = False
        if self.is_punct("*"):
            self.advance()
            star = True
        else:
            while self.tok.kind == "var":
                v = Var(self.advance().value[1:])
                if v not in projection:
                    projection.append(v)
            if not projection:
                self.error("expected projected variable")
        if self.is_word("WHERE"):
            self.advance()
        patterns, filters, unions = self.group(top=True)
        if self.tok.kind != "eof":
            self.error("expected end of query")
        q = SelectQuery(distinct, tuple(projection), tuple(patterns), tuple(filters), unions)
        if q.pattern_count() == 0:
            raise QuerySyntax("query has no triple patterns", self.tok.pos)
        if star:
            q = SelectQuery(distinct, tuple(sorted(q.variables(), key=lambda v: v.name)), q.patterns, q.filters, q.unions)
        missing = [str(v) for v in q.projection if v not in q.variables()]
        if missing:
            raise QuerySyntax(f"projected variable(s) {', '.join(missing)} not used in any pattern", 0)
        return q

    def group(self, top: bool):
        self.expect_punct("{")
        patterns: list[TriplePattern] = []
        filters: list[RegexFilter] = []
        unions: Optional[tuple[PatternGroup, ...]] = None
        while not self.is_punct("}"):
            if self.is_word("FILTER"):
                filters.append(self.filter())
            elif self.is_punct("{"):
                if not top:
                    raise UnsupportedFeature("nested group")
                if unions is not None:
                    raise UnsupportedFeature("multiple UNION blocks")
                alts = []
                p, f, _ = self.group(top=False)
                alts.append(PatternGroup(tuple(p), tuple(f)))
                while self.is_word("UNION"):
                    self.advance()
                    p, f, _ = self.group(top=False)
                    alts.append(PatternGroup(tuple(p), tuple(f)))
                unions = tuple(alts)
            elif self.tok.kind == "eof":
                self.error("expected '}'")
            else:
                patterns.extend(self.triples())
                if not (self.is_punct("}") or self.is_word("FILTER") or self.is_punct("{")):
                    self.expect_punct(".")
                continue
            if self.is_punct("."):
                self.advance()
        self.advance()
        return patterns, filters, unions

    def triples(self) -> list[TriplePattern]:
        subject = self.node("subject")
        if isinstance(subject, Literal):
            raise QuerySyntax("literal in subject position", self.toks[self.i - 1].pos)
        out = []
        while True:
            if self.is_word("A"):
                self.advance()
                pred: Node = IRI(RDF_TYPE)
            else:
                pred = self.node("predicate")
                if isinstance(pred, Literal):
                    raise QuerySyntax("literal in predicate position", self.toks[self.i - 1].pos)
            out.append(TriplePattern(subject, pred, self.node("object")))
            while self.is_punct(","):
                self.advance()
                out.append(TriplePattern(subject, pred, self.node("object")))
            if not self.is_punct(";"):
                return out
            self.advance()
            if self.is_punct(".") or self.is_punct("}"):
                return out

    def node(self, role: str) -> Node:
        t = self.tok
        if t.kind == "var":
            self.advance()
            return Var(t.value[1:])
        if t.kind == "iri":
            self.advance()
            return self.make_iri(t.value[1:-1], t.pos)
        if t.kind == "pname":
            self.advance()
            return self.resolve(t)
        if t.kind == "string":
            self.advance()
            lexical = _unescape(t.value[1:-1], t.pos + 1)
            datatype = XSD_STRING
            if self.tok.kind == "dtmark":
                self.advance()
                dt = self.advance()
                if dt.kind == "iri":
                    datatype = dt.value[1:-1]
                elif dt.kind == "pname":
                    datatype = self.resolve(dt).value
                else:
                    self.i -= 1
                    self.error("expected datatype IRI")
                if datatype not in (XSD_STRING, XSD_DATETIME):
                    raise UnsupportedFeature(f"datatype <{datatype}>")
            self.check_unsupported(self.tok)
            try:
                return Literal(lexical, datatype)
            except ValueError as exc:
                raise QuerySyntax(str(exc), t.pos) from exc
        self.error(f"expected {role}")

    def make_iri(self, value: str, pos: int) -> IRI:
        try:
            return IRI(value)
        except ValueError as exc:
            raise QuerySyntax(str(exc), pos) from exc

    def resolve(self, t: _Tok) -> IRI:
        prefix, local = t.value.split(":", 1)
        if prefix not in self.prefixes:
            raise QuerySyntax(f"undeclared prefix {prefix!r}", t.pos)
        return self.make_iri(self.prefixes[prefix] + local, t.pos)

    def filter(self) -> RegexFilter:
        self.expect_word("FILTER")
        wrapped = self.is_punct("(")
        if wrapped:
            self.advance()
        fn = self.tok
        if fn.kind != "word":
            self.error("expected regex(...)")
        if fn.value.upper() != "REGEX":
            if fn.value.upper() in UNSUPPORTED_KEYWORDS:
                raise UnsupportedFeature(fn.value.upper())
            raise UnsupportedFeature(f"FILTER {fn.value}")
        self.advance()
        self.expect_punct("(")
        use_str = False
        if self.is_word("STR"):
            self.advance()
            self.expect_punct("(")
            use_str = True
        if self.tok.kind != "var":
            self.error("expected variable")
        var = Var(self.advance().value[1:])
        if use_str:
            self.expect_punct(")")
        self.expect_punct(",")
        if self.tok.kind != "string":
            self.error("expected regex pattern string")
        pat_tok = self.advance()
        pattern = _unescape(pat_tok.value[1:-1], pat_tok.pos + 1)
        flags = "i"
        if self.is_punct(","):
            self.advance()
            if self.tok.kind != "string":
                self.error("expected regex flags string")
            ftok = self.advance()
            flags = _unescape(ftok.value[1:-1], ftok.pos + 1)
            bad = set(flags) - set(_REGEX_FLAGS)
            if bad:
                raise UnsupportedFeature(f"regex flag(s) {''.join(sorted(bad))}")
        self.expect_punct(")")
        if wrapped:
            self.expect_punct(")")
        rf = RegexFilter(var, pattern, flags, use_str)
        try:
            rf.compiled()
        except re.error as exc:
            raise InvalidRegex(f"{pattern!r}: {exc}") from exc
        return rf


def parse_query(text: str) -> SelectQuery:
    return _Parser(text).query()
