"""Text generation backends: a deterministic stub and an HTTP completion client."""
from __future__ import annotations

import logging
import math
import os
import re
import time
from dataclasses import dataclass
from typing import Callable, Optional, Protocol

import requests

from ..errors import BackendError, BackendHttp, BackendTimeout, CapUnsatisfiable
from ..textutil import truncate_words, word_count
from .prompts import section_of_instruction, split_prompt

log = logging.getLogger(__name__)

# rough subword tokens per English word, used to size max_tokens from a word cap
TOKENS_PER_WORD = 1.5

STUB_OPENERS = {
    "lead": "Key details:",
    "body": "Supporting material:",
    "tail": "Framing:",
    None: "Keywords:",
}
_TERMINAL = re.compile(r"[.!?][\"'”’)\]]*$")
_CLOSED = re.compile(r"(?:[.!?][\"'”’)\]]*|[\"”’])$")


class Backend(Protocol):
    backend_id: str

    def generate(self, prompt: str, cap: int) -> str: ...


@dataclass(frozen=True)
class BackendSpec:
    kind: str = "stub"  # "stub" or "remote"
    endpoint: str = ""
    model: str = ""
    token_env: str = ""
    timeout: float = 30.0
    max_retries: int = 3

    def __post_init__(self):
        if self.kind not in ("stub", "remote"):
            raise ValueError(f"backend kind must be 'stub' or 'remote', not {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote backend needs an endpoint")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")


def stub_sentence(opener: str, pieces: list[str]) -> str:
    """``opener`` followed by the pieces in order. Pieces are comma-separated,
    except that a piece closing a sentence or quotation is followed by a space."""
    out = [opener]
    for i, piece in enumerate(pieces):
        if i:
            out.append(" " if _CLOSED.search(pieces[i - 1]) else ", ")
        else:
            out.append(" ")
        out.append(piece)
    text = "".join(out)
    return text if _TERMINAL.search(text) else text + "."


class StubBackend:
    """Deterministic realization: a fixed opener followed by every keyword
    verbatim, in prompt order (see :func:`stub_sentence`). Trailing keywords
    are dropped, with a warning, only when the cap cannot hold them all."""

    backend_id = "stub"

    def generate(self, prompt: str, cap: int) -> str:
        if cap < 1:
            raise ValueError("cap must be at least 1")
        instruction, pieces = split_prompt(prompt)
        if not pieces:
            return ""
        for piece in pieces:
            if word_count(piece) > cap:
                raise CapUnsatisfiable(f"keyword {piece!r} has {word_count(piece)} words, cap is {cap}")
        opener = STUB_OPENERS[section_of_instruction(instruction)]
        for m in range(len(pieces), 0, -1):
            text = stub_sentence(opener, pieces[:m])
            if word_count(text) <= cap:
                if m < len(pieces):
                    log.warning("stub output dropped %d keyword(s) to fit a %d-word cap", len(pieces) - m, cap)
                return text
        log.warning("stub output dropped the carrier opener to fit a %d-word cap", cap)
        return pieces[0] if _TERMINAL.search(pieces[0]) else pieces[0] + "."


class RemoteBackend:
    """Client for a completion endpoint: POST ``{model, prompt, max_tokens}``,
    reply ``{text}``. Retries timeouts, connection errors, 429 and 5xx with
    exponential backoff. Safe to share across threads (no mutable state)."""

    def __init__(
        self,
        endpoint: str,
        model: str = "",
        token_env: str = "",
        timeout: float = 30.0,
        max_retries: int = 3,
        backoff: float = 0.5,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if not endpoint:
            raise ValueError("remote backend needs an endpoint")
        if timeout <= 0:
            raise ValueError("timeout must be positive")
        self.endpoint = endpoint
        self.model = model
        self.token_env = token_env
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff = backoff
        self.sleep = sleep
        self.backend_id = f"remote:{model}" if model else "remote"

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.token_env:
            token = os.environ.get(self.token_env)
            if token:
                headers["Authorization"] = f"Bearer {token}"
            else:
                log.warning("environment variable %s is not set; sending no auth header", self.token_env)
        return headers

    def complete(self, prompt: str, max_tokens: int) -> str:
        payload = {"model": self.model, "prompt": prompt, "max_tokens": max_tokens}
        last: Optional[BackendError] = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                self.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                resp = requests.post(self.endpoint, json=payload, headers=self._headers(), timeout=self.timeout)
            except requests.Timeout:
                last = BackendTimeout(f"no reply from {self.endpoint} within {self.timeout}s")
                log.warning("attempt %d: %s", attempt + 1, last)
                continue
            except requests.RequestException as exc:
                last = BackendError(f"request to {self.endpoint} failed: {exc}")
                log.warning("attempt %d: %s", attempt + 1, last)
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                last = BackendHttp(resp.status_code, resp.text[:500])
                log.warning("attempt %d: HTTP %d", attempt + 1, resp.status_code)
                continue
            if resp.status_code >= 400:
                raise BackendHttp(resp.status_code, resp.text[:500])
            try:
                text = resp.json()["text"]
            except (ValueError, KeyError, TypeError) as exc:
                raise BackendError(f"malformed reply from {self.endpoint}: {exc}") from exc
            if not isinstance(text, str):
                raise BackendError(f"malformed reply from {self.endpoint}: 'text' is not a string")
            return text
        assert last is not None
        raise last

    def generate(self, prompt: str, cap: int) -> str:
        if cap < 1:
            raise ValueError("cap must be at least 1")
        text = self.complete(prompt, max_tokens=math.ceil(cap * TOKENS_PER_WORD))
        return truncate_words(text.strip(), cap)


def make_backend(spec: BackendSpec, **kwargs) -> Backend:
    if spec.kind == "stub":
        return StubBackend()
    return RemoteBackend(
        spec.endpoint, spec.model, spec.token_env, spec.timeout, spec.max_retries, **kwargs
    )


def generate_section(backend: Backend, prompt: str, cap: int) -> str:
    text = backend.generate(prompt, cap)
    if word_count(text) > cap:
        raise AssertionError(f"backend {backend.backend_id} exceeded the {cap}-word cap")
    return text
