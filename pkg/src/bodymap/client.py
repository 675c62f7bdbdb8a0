"""Chat-completion client: wire protocol, output constraints, mock backend.

The wire protocol is a plain HTTP chat-completions endpoint
(``POST {base_url}/chat/completions``) taking ``{model, messages,
temperature, top_p}`` plus optional constrained-output parameters
(``guided_json`` / ``guided_regex`` / ``guided_choice``) when the backend
advertises native constrained generation.  Backends that do not get a
client-side validate-and-repair loop instead: the reply is checked
against the constraint and re-requested with a correction note up to
``max_retries`` times.

The mock backend replays a scripted fixture file and records every
request payload, which keeps the whole pipeline testable offline.
"""

from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import jsonschema
import requests

from .atlas import RegionAtlas
from .errors import ConfigError, ConstraintError, TransportError, ValidationError

DEFAULT_TEMPERATURE = 0.6
DEFAULT_TOP_P = 0.95
DEFAULT_TIMEOUT = 60.0
DEFAULT_MAX_RETRIES = 3

ENV_BACKEND_URL = "BODYMAP_BACKEND_URL"
ENV_MODEL = "BODYMAP_MODEL"
ENV_API_KEY = "BODYMAP_API_KEY"


@dataclass(frozen=True)
class BackendConfig:
    base_url: str
    model: str
    api_key: str | None = None
    temperature: float = DEFAULT_TEMPERATURE
    top_p: float = DEFAULT_TOP_P
    timeout: float = DEFAULT_TIMEOUT
    max_retries: int = DEFAULT_MAX_RETRIES
    native_constraints: bool = False
    reasoning_model: bool = False

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ConfigError(f"temperature {self.temperature} outside [0, 2]")
        if not 0.0 < self.top_p <= 1.0:
            raise ConfigError(f"top_p {self.top_p} outside (0, 1]")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")

    @classmethod
    def from_env(cls, **overrides) -> "BackendConfig":
        values = {
            "base_url": os.getenv(ENV_BACKEND_URL, "http://localhost:8000/v1"),
            "model": os.getenv(ENV_MODEL, "default-model"),
            "api_key": os.getenv(ENV_API_KEY) or None,
        }
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True)
class ConstraintSchema:
    """Output constraint: a JSON schema, a regex, an enumeration, or none."""

    kind: str  # "json_schema" | "pattern" | "enumeration" | "none"
    body: object = None

    def __post_init__(self):
        if self.kind == "pattern":
            if not isinstance(self.body, str):
                raise ValidationError("pattern constraint needs a regex string")
            try:
                re.compile(self.body)
            except re.error as exc:
                raise ValidationError(f"pattern does not compile: {exc}") from exc
        elif self.kind == "enumeration":
            if not isinstance(self.body, (list, tuple)) or not self.body:
                raise ValidationError("enumeration constraint needs a non-empty value list")
        elif self.kind == "json_schema":
            try:
                jsonschema.Draft202012Validator.check_schema(self.body)
            except jsonschema.SchemaError as exc:
                raise ValidationError(f"malformed JSON schema: {exc.message}") from exc
        elif self.kind != "none":
            raise ValidationError(f"unknown constraint kind {self.kind!r}")

    @classmethod
    def json_schema(cls, body: dict) -> "ConstraintSchema":
        return cls(kind="json_schema", body=body)

    @classmethod
    def pattern(cls, body: str) -> "ConstraintSchema":
        return cls(kind="pattern", body=body)

    @classmethod
    def enumeration(cls, values: list[str]) -> "ConstraintSchema":
        return cls(kind="enumeration", body=tuple(values))

    @classmethod
    def none(cls) -> "ConstraintSchema":
        return cls(kind="none")

    def check(self, text: str) -> tuple[bool, str]:
        """Validate a completion against this constraint."""
        if self.kind == "none":
            return True, ""
        if self.kind == "pattern":
            if re.fullmatch(self.body, text):
                return True, ""
            return False, f"text does not match pattern {self.body!r}"
        if self.kind == "enumeration":
            if text in self.body:
                return True, ""
            return False, f"text is not one of the {len(self.body)} allowed values"
        try:
            parsed = json.loads(text)
        except json.JSONDecodeError as exc:
            return False, f"not valid JSON: {exc}"
        try:
            jsonschema.validate(parsed, self.body, cls=jsonschema.Draft202012Validator)
        except jsonschema.ValidationError as exc:
            return False, f"JSON does not satisfy schema: {exc.message}"
        return True, ""

    def describe(self) -> str:
        """Human-readable form used inside prompts."""
        if self.kind == "json_schema":
            return json.dumps(self.body, indent=1)
        if self.kind == "pattern":
            return f"a string matching the regular expression {self.body}"
        if self.kind == "enumeration":
            return "one of: " + ", ".join(self.body)
        return "free text"


def constraint_params(schema: ConstraintSchema) -> dict:
    """Native pass-through request parameters for a constraint."""
    if schema.kind == "json_schema":
        return {"guided_json": schema.body}
    if schema.kind == "pattern":
        return {"guided_regex": schema.body}
    if schema.kind == "enumeration":
        return {"guided_choice": list(schema.body)}
    return {}


class Backend(Protocol):
    """Transport: takes one request payload, returns the completion text."""

    supports_native_constraints: bool

    def complete(self, payload: dict) -> str: ...


class HttpBackend:
    """Talks to a chat-completions endpoint over HTTP."""

    def __init__(self, cfg: BackendConfig, session: requests.Session | None = None):
        self.cfg = cfg
        self.supports_native_constraints = cfg.native_constraints
        self._session = session or requests.Session()

    def complete(self, payload: dict) -> str:
        url = self.cfg.base_url.rstrip("/") + "/chat/completions"
        headers = {}
        if self.cfg.api_key:
            headers["Authorization"] = f"Bearer {self.cfg.api_key}"
        try:
            resp = self._session.post(
                url, json=payload, headers=headers, timeout=self.cfg.timeout
            )
        except requests.RequestException as exc:
            raise TransportError(f"backend unreachable: {exc}") from exc
        if resp.status_code // 100 != 2:
            raise TransportError(
                f"backend returned status {resp.status_code}: {resp.text[:200]}"
            )
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError) as exc:
            raise TransportError(f"malformed backend response: {exc}") from exc


class MockBackend:
    """Deterministic scripted backend driven by a fixture file.

    Fixture format (JSON)::

        {
          "native_constraints": false,
          "rules": [
            {"name": "r1", "contains": ["needle", ...],
             "responses": ["first", "second"], "repeat_last": true}
          ],
          "default_response": "optional catch-all"
        }

    The first rule whose ``contains`` strings all appear in the prompt
    answers the request; its responses are consumed in order (the last
    one repeats when ``repeat_last``, the default).  Single-response
    rules therefore answer purely by content, which keeps parallel runs
    deterministic.  Every request payload is recorded in ``requests``.
    """

    def __init__(self, fixture: dict, source: str | None = None):
        self.native = bool(fixture.get("native_constraints", False))
        self.supports_native_constraints = self.native
        self.rules = fixture.get("rules", [])
        for rule in self.rules:
            if "contains" not in rule or "responses" not in rule or not rule["responses"]:
                raise ConfigError(f"mock rule missing contains/responses: {rule.get('name')}")
        self.default_response = fixture.get("default_response")
        self.source = source
        self.requests: list[dict] = []
        self._consumed: dict[int, int] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path: str | Path) -> "MockBackend":
        path = Path(path)
        try:
            fixture = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load mock fixture {path}: {exc}") from exc
        return cls(fixture, source=str(path))

    def complete(self, payload: dict) -> str:
        prompt = "\n".join(str(m.get("content", "")) for m in payload.get("messages", []))
        with self._lock:
            self.requests.append(payload)
            for i, rule in enumerate(self.rules):
                if all(needle in prompt for needle in rule["contains"]):
                    n = self._consumed.get(i, 0)
                    responses = rule["responses"]
                    self._consumed[i] = n + 1
                    if n < len(responses):
                        return responses[n]
                    if rule.get("repeat_last", True):
                        return responses[-1]
                    raise TransportError(f"mock rule {rule.get('name', i)} exhausted")
            if self.default_response is not None:
                return self.default_response
        raise TransportError(f"no mock rule matched request: {prompt[:120]!r}...")


def _base_payload(cfg: BackendConfig, prompt: str) -> dict:
    return {
        "model": cfg.model,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": cfg.temperature,
        "top_p": cfg.top_p,
    }


def complete_freeform(cfg: BackendConfig, prompt: str, backend: Backend) -> str:
    """One unconstrained completion; transport failures are not retried."""
    return backend.complete(_base_payload(cfg, prompt))


def _correction_note(reply: str, reason: str) -> str:
    return (
        "\n\nYour previous reply was rejected: "
        f"{reason}\nPrevious reply:\n{reply}\n"
        "Reply again, and output only text that matches the required format exactly."
    )


def complete_constrained(
    cfg: BackendConfig, prompt: str, schema: ConstraintSchema, backend: Backend
) -> str:
    """Completion guaranteed to satisfy ``schema``.

    Native constraints are passed through when the backend advertises
    them; either way the reply is validated client-side, and failures are
    re-requested with a correction note up to ``cfg.max_retries`` times.
    Raises :class:`ConstraintError` carrying all rejected candidates
    after 1 + max_retries failed attempts.
    """
    rejected: list[str] = []
    attempt_prompt = prompt
    for _ in range(cfg.max_retries + 1):
        payload = _base_payload(cfg, attempt_prompt)
        if backend.supports_native_constraints:
            payload.update(constraint_params(schema))
        text = backend.complete(payload)
        ok, reason = schema.check(text)
        if ok:
            return text
        rejected.append(text)
        attempt_prompt = prompt + _correction_note(text, reason)
    raise ConstraintError(
        f"no conforming output after {cfg.max_retries + 1} attempts "
        f"(last failure: {reason})",
        rejected=rejected,
    )


def region_index_pattern(atlas: RegionAtlas) -> str:
    """Regex matching exactly the decimal strings of valid region indices.

    Canonical form only: no leading zeros, no signs, no surrounding text.
    Alternatives are ordered longest-first so the pattern also behaves
    under longest-match engines.
    """
    literals = sorted(
        (str(i) for i in atlas.region_indices), key=lambda s: (-len(s), s)
    )
    return "(?:" + "|".join(literals) + ")"


def condition_enumeration(atlas: RegionAtlas) -> ConstraintSchema:
    return ConstraintSchema.enumeration([str(i) for i in atlas.condition_indices])
