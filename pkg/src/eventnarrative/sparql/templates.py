"""Lead/Body/Tail retrieval templates, shipped as ``.rq`` files."""
from __future__ import annotations

import re
from importlib import resources
from string import Template

from ..errors import InvalidRegex
from .parser import SelectQuery, parse_query

LEVELS = ("lead", "body", "tail")


def _sparql_string_body(text: str) -> str:
    return (
        text.replace("\\", "\\\\").replace('"', '\\"')
        .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    )


def template_text(level: str, event: str, raw: bool = False) -> str:
    """Query text for ``level`` with the event pattern filled in.

    The event is matched literally unless ``raw`` is set, in which case it is
    used as a regular expression and must compile.
    """
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}; expected one of {LEVELS}")
    if not event:
        raise ValueError("event must be non-empty")
    pattern = event if raw else re.escape(event)
    try:
        re.compile(pattern)
    except re.error as exc:
        raise InvalidRegex(f"{event!r}: {exc}") from exc
    source = resources.files("eventnarrative.sparql.queries").joinpath(f"{level}.rq").read_text(encoding="utf-8")
    return Template(source).substitute(event=_sparql_string_body(pattern))


def level_template(level: str, event: str, raw: bool = False) -> SelectQuery:
    return parse_query(template_text(level, event, raw))


def lead_template(event: str, raw: bool = False) -> SelectQuery:
    return level_template("lead", event, raw)


def body_template(event: str, raw: bool = False) -> SelectQuery:
    return level_template("body", event, raw)


def tail_template(event: str, raw: bool = False) -> SelectQuery:
    return level_template("tail", event, raw)
