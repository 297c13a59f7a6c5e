"""Independent reference implementations used to check the package.

They favour obviousness over speed and share no code with the package
beyond its public data types.
"""
from __future__ import annotations

import hashlib
import itertools
import math
import re

from eventnarrative.graph import IRI, Literal, Triple
from eventnarrative.sparql import Var


# ---------------------------------------------------------------- ROUGE

def rouge_oracle(candidate: str, reference: str, n: int) -> tuple[int, int, int]:
    """(overlap, candidate n-gram count, reference n-gram count) by explicit
    enumeration of every distinct n-gram and list counting."""
    def toks(text):
        return [t.lower() for t in re.findall(r"[A-Za-z0-9]+", text)]

    def grams(ts):
        return [tuple(ts[i:i + n]) for i in range(len(ts) - n + 1)]

    c, r = grams(toks(candidate)), grams(toks(reference))
    overlap = 0
    for g in set(c):
        overlap += min(c.count(g), r.count(g))
    return overlap, len(c), len(r)


# ---------------------------------------------------------------- SPARQL

def _holds(g, tp, a):
    def val(x):
        return a[x] if isinstance(x, Var) else x

    s, p, o = val(tp.s), val(tp.p), val(tp.o)
    if not isinstance(s, IRI) or not isinstance(p, IRI):
        return False
    return Triple(s, p, o) in g


def _regex_ok(f, a):
    term = a.get(f.variable)
    if term is None:
        return False
    if isinstance(term, IRI):
        if not f.use_str:
            return False
        text = term.value
    else:
        text = term.lexical
    flags = re.IGNORECASE if "i" in f.flags else 0
    return re.search(f.pattern, text, flags) is not None


def _vars_of(patterns):
    out = []
    for tp in patterns:
        for x in (tp.s, tp.p, tp.o):
            if isinstance(x, Var) and x not in out:
                out.append(x)
    return out


def sparql_oracle(g, q) -> list[tuple]:
    """Rows (projection tuples, None for unbound) by enumerating every
    assignment of the query's variables to terms of the graph."""
    domain = sorted({t for tr in g for t in (tr.s, tr.p, tr.o)}, key=lambda t: (isinstance(t, Literal), str(t)))
    branches = q.unions if q.unions is not None else [None]
    rows = []
    for branch in branches:
        patterns = list(q.patterns) + (list(branch.patterns) if branch else [])
        filters = list(q.filters) + (list(branch.filters) if branch else [])
        variables = _vars_of(patterns)
        for values in itertools.product(domain, repeat=len(variables)):
            a = dict(zip(variables, values))
            if all(_holds(g, tp, a) for tp in patterns) and all(_regex_ok(f, a) for f in filters):
                rows.append(tuple(a.get(v) for v in q.projection))
    if q.distinct:
        rows = list(dict.fromkeys(rows))

    def key(row):
        return tuple((-1, "", "") if t is None else (0, t.value, "") if isinstance(t, IRI)
                     else (1, t.lexical, t.datatype) for t in row)

    return sorted(rows, key=key)


# ---------------------------------------------------------------- k-means

def _bag(sentence, stopwords):
    bag = {}
    for w in re.findall(r"[a-z]+", sentence.lower()):
        if w not in stopwords:
            bag[w] = bag.get(w, 0) + 1
    return bag


def _unit(bag):
    norm = math.sqrt(sum(v * v for v in bag.values()))
    return {w: v / norm for w, v in bag.items()} if norm else {}


def _cos(u, c):
    cn = math.sqrt(sum(v * v for v in c.values()))
    if cn == 0:
        return 0.0
    return sum(u.get(w, 0.0) * v for w, v in c.items()) / cn


TIE = 1e-12


def kmeans_oracle(sentences, k, stopwords, max_iter=50):
    """Spherical k-means in plain dictionaries, following the documented rules:
    seeds are the first k sentences with distinct term bags (padded in index
    order), ties go to the lower index, each centroid claims a distinct sentence."""
    n = len(sentences)
    if n <= k:
        return list(range(n))
    bags = [_bag(s, stopwords) for s in sentences]
    units = [_unit(b) for b in bags]
    seeds = []
    seen = []
    for i, b in enumerate(bags):
        if b not in seen:
            seen.append(b)
            seeds.append(i)
        if len(seeds) == k:
            break
    for i in range(n):
        if len(seeds) == k:
            break
        if i not in seeds:
            seeds.append(i)
    cents = [dict(units[i]) for i in seeds]
    assign = None
    for _ in range(max_iter):
        new = []
        for u in units:
            sims = [_cos(u, c) for c in cents]
            best = min(j for j in range(k) if sims[j] >= max(sims) - TIE)
            new.append(best)
        if new == assign:
            break
        assign = new
        for j in range(k):
            members = [units[i] for i in range(n) if assign[i] == j]
            if members:
                c = {}
                for m in members:
                    for w, v in m.items():
                        c[w] = c.get(w, 0.0) + v / len(members)
                cents[j] = c
    chosen = []
    for j in range(k):
        free = [i for i in range(n) if i not in chosen]
        top = max(_cos(units[i], cents[j]) for i in free)
        chosen.append(min(i for i in free if _cos(units[i], cents[j]) >= top - TIE))
    return sorted(chosen)


# ---------------------------------------------------------------- ids

def point_id_oracle(article_id, kind, surface, span, label=""):
    loc = "" if span is None else f"{span[0]}:{span[1]}:{span[2]}"
    return hashlib.sha256(f"{article_id}|{kind}|{surface}|{loc}|{label}".encode("utf-8")).hexdigest()[:16]


def article_id_oracle(url, body):
    return hashlib.sha256((url + "\n" + body).encode("utf-8")).hexdigest()[:16]
