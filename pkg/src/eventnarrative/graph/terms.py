from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD = "http://www.w3.org/2001/XMLSchema#"
NARR = "http://example.org/narrative#"
EPG = "http://example.org/epg/"

RDF_TYPE = RDF + "type"
XSD_STRING = XSD + "string"
XSD_DATETIME = XSD + "dateTime"

DATATYPES = {"string": XSD_STRING, "dateTime": XSD_DATETIME}

_DATETIME_RE = re.compile(
    r"-?\d{4,}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(?:\.\d+)?(?:Z|[+-]\d{2}:\d{2})?"
)


@dataclass(frozen=True)
class IRI:
    value: str

    def __post_init__(self):
        if not self.value or any(ch.isspace() for ch in self.value) or any(ch in '<>"{}|^`\\' for ch in self.value):
            raise ValueError(f"invalid IRI {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING

    def __post_init__(self):
        if self.datatype not in (XSD_STRING, XSD_DATETIME):
            raise ValueError(f"unsupported datatype {self.datatype!r}")
        if self.datatype == XSD_DATETIME and not _DATETIME_RE.fullmatch(self.lexical):
            raise ValueError(f"invalid xsd:dateTime {self.lexical!r}")

    def __str__(self) -> str:
        return self.lexical


Term = Union[IRI, Literal]


def term_key(t: Term) -> tuple:
    """Total order over terms: IRIs before literals, then by string form."""
    if isinstance(t, IRI):
        return (0, t.value, "")
    return (1, t.lexical, t.datatype)


@dataclass(frozen=True)
class Triple:
    s: IRI
    p: IRI
    o: Term

    def __post_init__(self):
        if not isinstance(self.s, IRI) or not isinstance(self.p, IRI):
            raise TypeError("subject and predicate must be IRIs")
        if not isinstance(self.o, (IRI, Literal)):
            raise TypeError("object must be an IRI or a Literal")

    def key(self) -> tuple:
        return (self.s.value, self.p.value, term_key(self.o))


def narr(local: str) -> IRI:
    return IRI(NARR + local)


TYPE = IRI(RDF_TYPE)
