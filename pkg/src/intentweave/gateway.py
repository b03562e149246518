"""Client for chat-completion HTTP endpoints.

One adapter covers every provider that accepts the common chat JSON
shape (a messages array of role/content pairs). Transient failures are
retried with exponential backoff and jitter; batches run under a strict
in-flight bound with positionally aligned results.
"""

from __future__ import annotations

import json
import os
import random
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import requests

from .prompts import PromptBundle

BASE_URL_ENV = "LLM_BASE_URL"
API_KEY_ENV = "LLM_API_KEY"


class GatewayError(Exception):
    pass


class AuthFailedError(GatewayError):
    pass


class BadRequestError(GatewayError):
    pass


class ExhaustedRetriesError(GatewayError):
    pass


@dataclass(frozen=True)
class GenerationConfig:
    base_url: str = ""
    model_name: str = ""
    temperature: float = 1.0
    max_output_tokens: int = 22000
    retry_limit: int = 3
    timeout: float = 600.0
    backoff_base: float = 1.0
    backoff_cap: float = 30.0
    api_key: Optional[str] = None

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be >= 1")
        if self.retry_limit < 0:
            raise ValueError("retry_limit must be non-negative")

    @classmethod
    def from_env(cls, **overrides) -> "GenerationConfig":
        values = {
            "base_url": os.environ.get(BASE_URL_ENV, ""),
            "api_key": os.environ.get(API_KEY_ENV),
        }
        values.update(overrides)
        return cls(**values)

    def snapshot(self) -> dict:
        return {
            "base_url": self.base_url,
            "model_name": self.model_name,
            "temperature": self.temperature,
            "max_output_tokens": self.max_output_tokens,
            "retry_limit": self.retry_limit,
            "timeout": self.timeout,
        }


@dataclass(frozen=True)
class CompletionRecord:
    request_id: str
    prompt: PromptBundle
    response_text: str
    usage: dict = field(default_factory=dict)
    attempts: int = 1
    latency: float = 0.0


def _messages(prompt: PromptBundle) -> list[dict]:
    messages = []
    if prompt.system_text:
        messages.append({"role": "system", "content": prompt.system_text})
    messages.append({"role": "user", "content": prompt.user_text})
    return messages


class LlmClient:
    """Shareable across threads; each call is independent."""

    def __init__(
        self,
        config: GenerationConfig,
        session: Optional[requests.Session] = None,
        log_path: Optional[Path] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.config = config
        self.session = session or requests.Session()
        self.log_path = Path(log_path) if log_path else None
        self._log_lock = threading.Lock()
        self._sleep = sleep

    def _log(self, record: dict):
        if self.log_path is None:
            return
        line = json.dumps(record, ensure_ascii=False, sort_keys=True)
        with self._log_lock:
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def _backoff(self, attempt: int) -> float:
        base = min(self.config.backoff_cap, self.config.backoff_base * 2 ** attempt)
        return base * (0.5 + random.random() / 2)

    def complete(
        self, prompt: PromptBundle, deadline: Optional[float] = None
    ) -> CompletionRecord:
        """First successful completion, retrying transient failures.

        ``deadline`` is a time.monotonic() timestamp; when it passes, no
        further attempts are made.
        """
        config = self.config
        request_id = uuid.uuid4().hex
        url = config.base_url.rstrip("/") + "/chat/completions"
        body = {
            "model": config.model_name,
            "messages": _messages(prompt),
            "temperature": config.temperature,
            "max_tokens": config.max_output_tokens,
        }
        headers = {"Content-Type": "application/json"}
        api_key = config.api_key or os.environ.get(API_KEY_ENV)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"

        started = time.monotonic()
        last_error = None
        for attempt in range(config.retry_limit + 1):
            if deadline is not None and time.monotonic() > deadline:
                raise ExhaustedRetriesError(
                    f"deadline passed after {attempt} attempts: {last_error}"
                )
            self._log(
                {"event": "request", "request_id": request_id, "attempt": attempt + 1,
                 "model": config.model_name, "ts": time.time()}
            )
            try:
                response = self.session.post(
                    url, json=body, headers=headers, timeout=config.timeout
                )
            except requests.RequestException as exc:
                last_error = f"transport: {exc}"
                self._log({"event": "error", "request_id": request_id,
                           "attempt": attempt + 1, "error": last_error})
                if attempt < config.retry_limit:
                    self._sleep(self._backoff(attempt))
                continue

            status = response.status_code
            self._log({"event": "response", "request_id": request_id,
                       "attempt": attempt + 1, "status": status})
            if status in (401, 403):
                raise AuthFailedError(f"endpoint returned {status}")
            if status == 429 or status >= 500:
                last_error = f"status {status}"
                if attempt < config.retry_limit:
                    self._sleep(self._backoff(attempt))
                continue
            if status != 200:
                raise BadRequestError(f"endpoint returned {status}")

            try:
                payload = response.json()
                text = payload["choices"][0]["message"]["content"]
            except (ValueError, LookupError, TypeError) as exc:
                raise BadRequestError(f"malformed completion payload: {exc}")
            return CompletionRecord(
                request_id=request_id,
                prompt=prompt,
                response_text=text,
                usage=payload.get("usage") or {},
                attempts=attempt + 1,
                latency=time.monotonic() - started,
            )
        raise ExhaustedRetriesError(
            f"gave up after {config.retry_limit + 1} attempts: {last_error}"
        )

    def complete_many(
        self,
        prompts: Sequence[PromptBundle],
        max_in_flight: int = 4,
        deadline: Optional[float] = None,
    ) -> list[Union[CompletionRecord, GatewayError]]:
        """Complete a batch; results align positionally with the inputs.

        At most ``max_in_flight`` requests are outstanding at any instant;
        one item's failure is recorded in its slot and does not abort the
        rest.
        """
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")

        def one(prompt: PromptBundle) -> Union[CompletionRecord, GatewayError]:
            try:
                return self.complete(prompt, deadline=deadline)
            except GatewayError as exc:
                return exc
            except Exception as exc:  # unexpected bugs still fill the slot
                return GatewayError(str(exc))

        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            return list(pool.map(one, prompts))
