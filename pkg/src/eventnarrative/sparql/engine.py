from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from ..errors import UnboundFilterVariable
from ..graph.store import Graph
from ..graph.terms import IRI, Literal, Term, term_key
from .parser import PatternGroup, RegexFilter, SelectQuery, TriplePattern, Var

Solution = dict  # Var -> Term

_UNBOUND_KEY = (-1, "", "")


@dataclass
class BindingSet:
    variables: tuple[Var, ...]
    rows: list[dict]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def column(self, name: str) -> list[Term]:
        v = Var(name)
        return [r[v] for r in self.rows if v in r]

    def values(self, name: str) -> list[str]:
        return [str(t) for t in self.column(name)]

    def to_tsv(self) -> str:
        def cell(t: Optional[Term]) -> str:
            if t is None:
                return ""
            return str(t).replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")

        lines = ["\t".join(v.name for v in self.variables)]
        lines += ["\t".join(cell(r.get(v)) for v in self.variables) for r in self.rows]
        return "\n".join(lines) + "\n"

    def to_records(self) -> list[dict]:
        out = []
        for r in self.rows:
            rec = {}
            for v in self.variables:
                t = r.get(v)
                if t is None:
                    rec[v.name] = None
                elif isinstance(t, IRI):
                    rec[v.name] = {"type": "iri", "value": t.value}
                else:
                    rec[v.name] = {"type": "literal", "value": t.lexical, "datatype": t.datatype}
            out.append(rec)
        return out


def _resolve(node, binding: Solution):
    if isinstance(node, Var):
        return binding.get(node)
    return node


def _order(patterns: Iterable[TriplePattern]) -> list[TriplePattern]:
    """Greedy join order: next pattern is the one with most positions bound."""
    remaining = list(patterns)
    bound: set[Var] = set()
    ordered = []
    while remaining:
        def score(tp):
            return sum(1 for x in (tp.s, tp.p, tp.o) if not isinstance(x, Var) or x in bound)

        best = max(range(len(remaining)), key=lambda i: (score(remaining[i]), -i))
        tp = remaining.pop(best)
        ordered.append(tp)
        bound |= tp.variables()
    return ordered


def match_bgp(g: Graph, patterns: Iterable[TriplePattern], seed: Optional[Solution] = None) -> list[Solution]:
    """All solutions of a basic graph pattern (a bag, one per distinct assignment)."""
    ordered = _order(patterns)
    out: list[Solution] = []

    def step(i: int, binding: Solution):
        if i == len(ordered):
            out.append(dict(binding))
            return
        tp = ordered[i]
        s, p, o = (_resolve(x, binding) for x in (tp.s, tp.p, tp.o))
        if isinstance(s, Literal) or isinstance(p, Literal):
            return
        for t in g.triples(s, p, o):
            new = dict(binding)
            ok = True
            for node, value in ((tp.s, t.s), (tp.p, t.p), (tp.o, t.o)):
                if isinstance(node, Var):
                    prev = new.get(node)
                    if prev is None:
                        new[node] = value
                    elif prev != value:
                        ok = False
                        break
            if ok:
                step(i + 1, new)

    step(0, dict(seed or {}))
    return out


def _passes(f: RegexFilter, rx, binding: Solution) -> bool:
    term = binding.get(f.variable)
    if term is None:
        return False
    if isinstance(term, IRI) and not f.use_str:
        return False
    return rx.search(str(term)) is not None


def _apply_filters(solutions: list[Solution], filters: Iterable[RegexFilter]) -> list[Solution]:
    compiled = [(f, f.compiled()) for f in filters]
    return [s for s in solutions if all(_passes(f, rx, s) for f, rx in compiled)]


def _check_filters(q: SelectQuery):
    top_vars = PatternGroup(q.patterns).variables()
    union_vars: set[Var] = set()
    for grp in q.unions or ():
        gv = grp.variables()
        union_vars |= gv
        for f in grp.filters:
            if f.variable not in gv:
                raise UnboundFilterVariable(f"{f.variable} is not bound by any pattern in its group")
    for f in q.filters:
        if f.variable not in top_vars | union_vars:
            raise UnboundFilterVariable(f"{f.variable} is not bound by any pattern")


def _compatible(a: Solution, b: Solution) -> bool:
    return all(b[k] == v for k, v in a.items() if k in b)


def execute(g: Graph, q: SelectQuery) -> BindingSet:
    _check_filters(q)
    top = match_bgp(g, q.patterns) if q.patterns else [{}]
    if q.unions is not None:
        branch: list[Solution] = []
        for grp in q.unions:
            branch += _apply_filters(match_bgp(g, grp.patterns), grp.filters)
        solutions = [{**a, **b} for a in top for b in branch if _compatible(a, b)]
    else:
        solutions = top
    solutions = _apply_filters(solutions, q.filters)

    rows = [{v: s[v] for v in q.projection if v in s} for s in solutions]
    if q.distinct:
        seen = set()
        unique = []
        for r in rows:
            key = tuple(r.get(v) for v in q.projection)
            if key not in seen:
                seen.add(key)
                unique.append(r)
        rows = unique
    rows.sort(key=lambda r: tuple(term_key(r[v]) if v in r else _UNBOUND_KEY for v in q.projection))
    return BindingSet(q.projection, rows)
