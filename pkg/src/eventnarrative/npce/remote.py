"""Optional HTTP annotators standing in for neural NER / tactic classifiers.

Wire format: ``POST {"text": ...}`` returning
``{"entities": [{"surface", "label", "start", "end"}, ...]}`` with character
offsets into the posted text. Off unless an endpoint is configured.
"""
from __future__ import annotations

import requests

from ..errors import RemoteHookError


class RemoteAnnotator:
    def __init__(self, endpoint: str, timeout: float = 10.0):
        if not endpoint:
            raise ValueError("endpoint must be non-empty")
        self.endpoint = endpoint
        self.timeout = timeout

    def annotate(self, text: str) -> list[dict]:
        try:
            resp = requests.post(self.endpoint, json={"text": text}, timeout=self.timeout)
            resp.raise_for_status()
            payload = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise RemoteHookError(f"{self.endpoint}: {exc}") from exc
        entities = payload.get("entities")
        if not isinstance(entities, list):
            raise RemoteHookError(f"{self.endpoint}: response lacks an 'entities' list")
        return [e for e in entities if isinstance(e, dict)]
