"""SELECT-subset SPARQL: parser, evaluator and the retrieval templates."""
from .engine import BindingSet, execute, match_bgp
from .parser import PatternGroup, RegexFilter, SelectQuery, TriplePattern, Var, parse_query
from .templates import LEVELS, body_template, lead_template, level_template, tail_template, template_text

__all__ = [
    "BindingSet", "LEVELS", "PatternGroup", "RegexFilter", "SelectQuery", "TriplePattern", "Var",
    "body_template", "execute", "lead_template", "level_template", "match_bgp", "parse_query",
    "tail_template", "template_text",
]
