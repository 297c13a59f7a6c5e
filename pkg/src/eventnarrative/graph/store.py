from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Iterator, Optional

from .terms import IRI, Term, Triple


class Graph:
    """A set of triples with subject, predicate and object indexes.

    Pattern lookups take ``None`` as a wildcard and return triples in
    canonical (subject, predicate, object) order.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._by_s: dict[IRI, set[Triple]] = defaultdict(set)
        self._by_p: dict[IRI, set[Triple]] = defaultdict(set)
        self._by_o: dict[Term, set[Triple]] = defaultdict(set)
        for t in triples:
            self.add(t)

    def add(self, triple: Triple) -> bool:
        if triple in self._triples:
            return False
        self._triples.add(triple)
        self._by_s[triple.s].add(triple)
        self._by_p[triple.p].add(triple)
        self._by_o[triple.o].add(triple)
        return True

    def add_all(self, triples: Iterable[Triple]) -> int:
        return sum(self.add(t) for t in triples)

    def remove(self, triple: Triple) -> bool:
        if triple not in self._triples:
            return False
        self._triples.discard(triple)
        for index, key in ((self._by_s, triple.s), (self._by_p, triple.p), (self._by_o, triple.o)):
            bucket = index[key]
            bucket.discard(triple)
            if not bucket:
                del index[key]
        return True

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self._triples, key=Triple.key))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __repr__(self) -> str:
        return f"<Graph {len(self)} triples>"

    def _candidates(self, s, p, o) -> Iterable[Triple]:
        buckets = []
        if s is not None:
            buckets.append(self._by_s.get(s, set()))
        if p is not None:
            buckets.append(self._by_p.get(p, set()))
        if o is not None:
            buckets.append(self._by_o.get(o, set()))
        if not buckets:
            return self._triples
        return min(buckets, key=len)

    def triples(self, s: Optional[IRI] = None, p: Optional[IRI] = None, o: Optional[Term] = None) -> list[Triple]:
        out = [
            t for t in self._candidates(s, p, o)
            if (s is None or t.s == s) and (p is None or t.p == p) and (o is None or t.o == o)
        ]
        out.sort(key=Triple.key)
        return out

    def count(self, s=None, p=None, o=None) -> int:
        if s is None and p is None and o is None:
            return len(self._triples)
        return sum(
            1 for t in self._candidates(s, p, o)
            if (s is None or t.s == s) and (p is None or t.p == p) and (o is None or t.o == o)
        )

    def contains(self, s=None, p=None, o=None) -> bool:
        if s is not None and p is not None and o is not None:
            try:
                return Triple(s, p, o) in self._triples
            except TypeError:
                return False
        return any(
            (s is None or t.s == s) and (p is None or t.p == p) and (o is None or t.o == o)
            for t in self._candidates(s, p, o)
        )

    def objects(self, s: IRI, p: IRI) -> list[Term]:
        return [t.o for t in self.triples(s, p, None)]

    def subjects(self, p: IRI, o: Term) -> list[IRI]:
        return [t.s for t in self.triples(None, p, o)]

    def terms(self) -> set[Term]:
        out: set[Term] = set()
        for t in self._triples:
            out.update((t.s, t.p, t.o))
        return out

    def copy(self) -> "Graph":
        return Graph(self._triples)
