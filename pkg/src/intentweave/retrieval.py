"""Candidate evidence retrieval with frozen, reproducible per-query sets.

Search hits from the scholarly keyword and snippet APIs are merged,
deduplicated by paper id, deterministically numbered (citation count
descending, paper id ascending), optionally condensed through an LLM
salience pass, and frozen to a checksummed cache file. Once frozen, a
query's candidate set is served from the cache without network access.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional, Sequence

import requests

from .prompts import build_salience_prompt

DEFAULT_BASE_URL = "https://api.semanticscholar.org"
API_KEY_ENV = "S2_API_KEY"


class RetrievalError(Exception):
    pass


class NetworkError(RetrievalError):
    pass


class RateLimitedError(RetrievalError):
    """Retryable: the service asked us to slow down."""


class BadResponseError(RetrievalError):
    pass


class CacheCorruptError(RetrievalError):
    pass


@dataclass(frozen=True)
class SnippetCandidate:
    """One numbered retrievable evidence unit."""

    index: int
    paper_id: str
    title: str
    snippet: str
    citation_count: int = 0
    salient: Optional[str] = None

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("candidate index must be >= 1")
        if self.citation_count < 0:
            raise ValueError("citation_count must be non-negative")
        if self.salient is not None:
            if not self.salient:
                raise ValueError("salient must be non-empty when present")
            if len(self.salient) > len(self.snippet):
                raise ValueError("salient must be no longer than snippet")

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "paper_id": self.paper_id,
            "title": self.title,
            "snippet": self.snippet,
            "citation_count": self.citation_count,
            "salient": self.salient,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SnippetCandidate":
        return cls(
            index=d["index"],
            paper_id=d["paper_id"],
            title=d.get("title", ""),
            snippet=d.get("snippet", ""),
            citation_count=d.get("citation_count", 0),
            salient=d.get("salient"),
        )


@dataclass(frozen=True)
class CandidateSet:
    """A frozen, numbered candidate list for one query."""

    query_id: str
    query: str
    candidates: tuple[SnippetCandidate, ...]
    frozen_at: str = ""
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        indices = [c.index for c in self.candidates]
        if indices != list(range(1, len(indices) + 1)):
            raise ValueError("candidate indices must be exactly 1..N")
        seen = set()
        for c in self.candidates:
            if c.paper_id in seen:
                raise ValueError(f"duplicate paper_id {c.paper_id!r}")
            seen.add(c.paper_id)

    def __len__(self) -> int:
        return len(self.candidates)

    def to_dict(self) -> dict:
        return {
            "query_id": self.query_id,
            "query": self.query,
            "frozen_at": self.frozen_at,
            "source": self.source,
            "candidates": [c.to_dict() for c in self.candidates],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict) -> "CandidateSet":
        return cls(
            query_id=d["query_id"],
            query=d.get("query", ""),
            candidates=tuple(
                SnippetCandidate.from_dict(c) for c in d.get("candidates", [])
            ),
            frozen_at=d.get("frozen_at", ""),
            source=d.get("source", {}),
        )


def query_id_for(query: str) -> str:
    """Stable id for a query: hash of its whitespace-normalized text."""
    normalized = " ".join(query.split())
    return hashlib.sha256(normalized.encode("utf-8")).hexdigest()[:16]


@dataclass
class RetrievalConfig:
    cache_dir: Path
    keyword_limit: int = 20
    snippet_limit: int = 40
    salience_threshold: int = 1200

    def __post_init__(self):
        self.cache_dir = Path(self.cache_dir)


class SearchClient:
    """Thin client for the scholarly keyword and snippet search endpoints."""

    def __init__(
        self,
        base_url: str = DEFAULT_BASE_URL,
        api_key: Optional[str] = None,
        session: Optional[requests.Session] = None,
        timeout: float = 30.0,
        retry_limit: int = 3,
        backoff_base: float = 1.0,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.session = session or requests.Session()
        self.timeout = timeout
        self.retry_limit = retry_limit
        self.backoff_base = backoff_base
        self._sleep = sleep

    def _headers(self) -> dict:
        headers = {"Accept": "application/json"}
        if self.api_key:
            headers["x-api-key"] = self.api_key
        return headers

    def _get(self, path: str, params: dict) -> dict:
        url = f"{self.base_url}{path}"
        attempt = 0
        while True:
            try:
                response = self.session.get(
                    url, params=params, headers=self._headers(), timeout=self.timeout
                )
            except requests.RequestException as exc:
                if attempt >= self.retry_limit:
                    raise NetworkError(f"GET {path} failed: {exc}") from exc
                self._sleep(self.backoff_base * 2 ** attempt)
                attempt += 1
                continue
            if response.status_code == 429 or response.status_code >= 500:
                if attempt >= self.retry_limit:
                    raise RateLimitedError(
                        f"GET {path} returned {response.status_code} "
                        f"after {attempt + 1} attempts"
                    )
                self._sleep(self.backoff_base * 2 ** attempt)
                attempt += 1
                continue
            if response.status_code != 200:
                raise BadResponseError(
                    f"GET {path} returned {response.status_code}"
                )
            try:
                return response.json()
            except ValueError as exc:
                raise BadResponseError(f"GET {path}: invalid JSON") from exc

    def search_keyword(self, query: str, limit: int) -> list[dict]:
        """Paper records for a keyword query, at most ``limit``."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        payload = self._get(
            "/graph/v1/paper/search",
            {
                "query": query,
                "limit": limit,
                "fields": "title,citationCount,abstract",
            },
        )
        records = []
        for row in (payload.get("data") or [])[:limit]:
            records.append(
                {
                    "paper_id": row.get("paperId", ""),
                    "title": row.get("title") or "",
                    "citation_count": row.get("citationCount") or 0,
                    "snippet": row.get("abstract") or "",
                }
            )
        return records

    def search_snippets(self, query: str, limit: int) -> list[dict]:
        """Snippet records for a query, at most ``limit``."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        payload = self._get(
            "/graph/v1/snippet/search", {"query": query, "limit": limit}
        )
        records = []
        for row in (payload.get("data") or [])[:limit]:
            snippet = row.get("snippet") or {}
            paper = row.get("paper") or {}
            records.append(
                {
                    "paper_id": paper.get("paperId")
                    or paper.get("corpusId")
                    or "",
                    "title": paper.get("title") or "",
                    "citation_count": paper.get("citationCount") or 0,
                    "snippet": snippet.get("text") or "",
                }
            )
        return records


def merge_and_number(records: Sequence[dict]) -> list[SnippetCandidate]:
    """Deduplicate raw records by paper_id and assign stable indices.

    Order is citation count descending, then paper id ascending, so a
    fixed record multiset always numbers the same way.
    """
    merged: dict[str, dict] = {}
    for record in records:
        paper_id = record.get("paper_id") or ""
        if not paper_id:
            continue
        slot = merged.setdefault(
            paper_id,
            {"paper_id": paper_id, "title": "", "citation_count": 0, "snippet": ""},
        )
        if record.get("title") and not slot["title"]:
            slot["title"] = record["title"]
        slot["citation_count"] = max(
            slot["citation_count"], record.get("citation_count") or 0
        )
        snippet = record.get("snippet") or ""
        if len(snippet) > len(slot["snippet"]):
            slot["snippet"] = snippet
    ordered = sorted(
        merged.values(), key=lambda r: (-r["citation_count"], r["paper_id"])
    )
    return [
        SnippetCandidate(
            index=i,
            paper_id=r["paper_id"],
            title=r["title"],
            snippet=r["snippet"],
            citation_count=r["citation_count"],
        )
        for i, r in enumerate(ordered, 1)
    ]


def _extract_salient(query, candidate, threshold, completer) -> Optional[str]:
    prompt = build_salience_prompt(query, candidate.snippet, max_chars=threshold)
    text = (completer(prompt) or "").strip()
    if not text:
        return None
    if len(text) > len(candidate.snippet):
        text = text[: len(candidate.snippet)].rstrip()
    return text or None


# Single-flight registry: one materialization per (cache_dir, query_id).
_flight_lock = threading.Lock()
_flights: dict[tuple[str, str], threading.Lock] = {}


def _flight(cache_dir: Path, query_id: str) -> threading.Lock:
    with _flight_lock:
        return _flights.setdefault((str(cache_dir), query_id), threading.Lock())


def cache_path(cache_dir: Path, query_id: str) -> Path:
    return Path(cache_dir) / f"{query_id}.json"


def load_frozen(cache_dir: Path, query_id: str) -> Optional[CandidateSet]:
    path = cache_path(cache_dir, query_id)
    if not path.exists():
        return None
    wrapper = json.loads(path.read_text(encoding="utf-8"))
    payload = wrapper.get("set", "")
    checksum = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    if checksum != wrapper.get("checksum"):
        raise CacheCorruptError(f"checksum mismatch for {path}")
    return CandidateSet.from_dict(json.loads(payload))


def _freeze(cache_dir: Path, candidate_set: CandidateSet):
    cache_dir.mkdir(parents=True, exist_ok=True)
    payload = candidate_set.to_json()
    wrapper = json.dumps(
        {
            "checksum": hashlib.sha256(payload.encode("utf-8")).hexdigest(),
            "set": payload,
        },
        sort_keys=True,
        ensure_ascii=False,
    )
    path = cache_path(cache_dir, candidate_set.query_id)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(wrapper, encoding="utf-8")
    os.replace(tmp, path)


def assemble_candidates(
    query: str,
    config: RetrievalConfig,
    client: Optional[SearchClient] = None,
    completer: Optional[Callable] = None,
) -> CandidateSet:
    """Build (or reload) the frozen candidate set for a query.

    On a cold cache this hits the search APIs, condenses over-threshold
    snippets through ``completer`` when one is given, and freezes the
    result. Warm calls return the frozen set without any network access.
    Concurrent callers for one query share a single materialization.
    """
    query_id = query_id_for(query)
    frozen = load_frozen(config.cache_dir, query_id)
    if frozen is not None:
        return frozen
    with _flight(config.cache_dir, query_id):
        frozen = load_frozen(config.cache_dir, query_id)
        if frozen is not None:
            return frozen
        if client is None:
            client = SearchClient()
        records = client.search_keyword(query, config.keyword_limit)
        records += client.search_snippets(query, config.snippet_limit)
        candidates = merge_and_number(records)
        if completer is not None:
            condensed = []
            for candidate in candidates:
                if len(candidate.snippet) > config.salience_threshold:
                    salient = _extract_salient(
                        query, candidate, config.salience_threshold, completer
                    )
                    candidate = replace(candidate, salient=salient)
                condensed.append(candidate)
            candidates = condensed
        candidate_set = CandidateSet(
            query_id=query_id,
            query=query,
            candidates=tuple(candidates),
            frozen_at=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            source={
                "keyword_limit": config.keyword_limit,
                "snippet_limit": config.snippet_limit,
                "salience_threshold": config.salience_threshold,
            },
        )
        _freeze(config.cache_dir, candidate_set)
        return candidate_set
