import json
import random
import threading

import pytest

from intentweave.retrieval import (
    BadResponseError,
    CacheCorruptError,
    CandidateSet,
    RateLimitedError,
    RetrievalConfig,
    SearchClient,
    SnippetCandidate,
    assemble_candidates,
    cache_path,
    merge_and_number,
    query_id_for,
)


class FakeResponse:
    def __init__(self, status_code=200, payload=None):
        self.status_code = status_code
        self._payload = payload if payload is not None else {}

    def json(self):
        if isinstance(self._payload, Exception):
            raise self._payload
        return self._payload


class FakeSession:
    """Scripted responses keyed by path substring; records calls."""

    def __init__(self, script):
        self.script = script
        self.calls = []

    def get(self, url, params=None, headers=None, timeout=None):
        self.calls.append((url, dict(params or {})))
        for key, responses in self.script.items():
            if key in url:
                response = responses.pop(0) if isinstance(responses, list) else responses
                return response
        return FakeResponse(404)


KEYWORD_PAYLOAD = {
    "data": [
        {"paperId": "p1", "title": "Alpha", "citationCount": 40, "abstract": "About alpha."},
        {"paperId": "p2", "title": "Beta", "citationCount": 10, "abstract": "About beta."},
    ]
}

SNIPPET_PAYLOAD = {
    "data": [
        {"snippet": {"text": "Alpha snippet with more detail."},
         "paper": {"paperId": "p1", "title": "Alpha", "citationCount": 40}},
        {"snippet": {"text": "Gamma snippet."},
         "paper": {"paperId": "p3", "title": "Gamma", "citationCount": 99}},
    ]
}


def make_client(script):
    return SearchClient(
        base_url="http://test", session=FakeSession(script), sleep=lambda s: None
    )


def test_search_keyword_parses_fixture():
    client = make_client({"/paper/search": FakeResponse(200, KEYWORD_PAYLOAD)})
    records = client.search_keyword("q", limit=10)
    assert records == [
        {"paper_id": "p1", "title": "Alpha", "citation_count": 40,
         "snippet": "About alpha."},
        {"paper_id": "p2", "title": "Beta", "citation_count": 10,
         "snippet": "About beta."},
    ]


def test_search_keyword_limit():
    client = make_client({"/paper/search": FakeResponse(200, KEYWORD_PAYLOAD)})
    assert len(client.search_keyword("q", limit=1)) == 1


def test_search_empty_result():
    client = make_client({"/paper/search": FakeResponse(200, {"data": []})})
    assert client.search_keyword("q", limit=5) == []


def test_search_snippets_parses_fixture():
    client = make_client({"/snippet/search": FakeResponse(200, SNIPPET_PAYLOAD)})
    records = client.search_snippets("q", limit=10)
    assert records[0]["snippet"] == "Alpha snippet with more detail."
    assert records[1]["paper_id"] == "p3"


def test_rate_limit_retries_then_raises():
    responses = [FakeResponse(429), FakeResponse(429), FakeResponse(429),
                 FakeResponse(429)]
    client = make_client({"/paper/search": responses})
    with pytest.raises(RateLimitedError):
        client.search_keyword("q", limit=3)


def test_rate_limit_recovers():
    responses = [FakeResponse(429), FakeResponse(200, KEYWORD_PAYLOAD)]
    client = make_client({"/paper/search": responses})
    assert len(client.search_keyword("q", limit=5)) == 2


def test_bad_json_raises():
    client = make_client(
        {"/paper/search": FakeResponse(200, ValueError("nope"))}
    )
    with pytest.raises(BadResponseError):
        client.search_keyword("q", limit=3)


def test_merge_dedups_by_paper_id():
    records = [
        {"paper_id": "a", "title": "A", "citation_count": 5, "snippet": "short"},
        {"paper_id": "a", "title": "", "citation_count": 7, "snippet": "much longer snippet"},
        {"paper_id": "b", "title": "B", "citation_count": 7, "snippet": "b"},
    ]
    candidates = merge_and_number(records)
    assert len(candidates) == 2
    top = {c.paper_id: c for c in candidates}
    assert top["a"].snippet == "much longer snippet"
    assert top["a"].citation_count == 7


def test_merge_order_deterministic():
    records = [
        {"paper_id": "z", "title": "", "citation_count": 10, "snippet": "s"},
        {"paper_id": "a", "title": "", "citation_count": 10, "snippet": "s"},
        {"paper_id": "m", "title": "", "citation_count": 50, "snippet": "s"},
    ]
    candidates = merge_and_number(records)
    assert [c.paper_id for c in candidates] == ["m", "a", "z"]
    assert [c.index for c in candidates] == [1, 2, 3]


def test_merge_matches_bruteforce_oracle():
    rng = random.Random(0)
    for _ in range(100):
        records = [
            {
                "paper_id": f"p{rng.randint(1, 8)}",
                "title": "t",
                "citation_count": rng.randint(0, 5),
                "snippet": "x" * rng.randint(1, 30),
            }
            for _ in range(rng.randint(1, 20))
        ]
        candidates = merge_and_number(records)
        # oracle: set of ids, each with max count and longest snippet
        ids = {r["paper_id"] for r in records}
        assert {c.paper_id for c in candidates} == ids
        for c in candidates:
            mine = [r for r in records if r["paper_id"] == c.paper_id]
            assert c.citation_count == max(r["citation_count"] for r in mine)
            assert len(c.snippet) == max(len(r["snippet"]) for r in mine)
        assert [c.index for c in candidates] == list(range(1, len(ids) + 1))


def test_candidate_set_rejects_gaps():
    good = SnippetCandidate(index=1, paper_id="a", title="", snippet="s")
    with pytest.raises(ValueError):
        CandidateSet(query_id="q", query="q", candidates=(
            good, SnippetCandidate(index=3, paper_id="b", title="", snippet="s"),
        ))


def test_candidate_set_rejects_duplicate_ids():
    with pytest.raises(ValueError):
        CandidateSet(query_id="q", query="q", candidates=(
            SnippetCandidate(index=1, paper_id="a", title="", snippet="s"),
            SnippetCandidate(index=2, paper_id="a", title="", snippet="s"),
        ))


def _script():
    return {
        "/paper/search": FakeResponse(200, KEYWORD_PAYLOAD),
        "/snippet/search": FakeResponse(200, SNIPPET_PAYLOAD),
    }


def test_assemble_freezes_and_replays(tmp_path):
    config = RetrievalConfig(cache_dir=tmp_path)
    session = FakeSession(_script())
    client = SearchClient(base_url="http://test", session=session, sleep=lambda s: None)
    first = assemble_candidates("my query", config, client=client)
    calls_after_first = len(session.calls)
    assert calls_after_first == 2  # one keyword, one snippet call

    second = assemble_candidates("my query", config, client=client)
    assert len(session.calls) == calls_after_first  # zero new network requests
    assert second.to_json() == first.to_json()

    raw_first = cache_path(tmp_path, first.query_id).read_bytes()
    assemble_candidates("my query", config, client=client)
    assert cache_path(tmp_path, first.query_id).read_bytes() == raw_first


def test_assemble_merges_and_orders(tmp_path):
    config = RetrievalConfig(cache_dir=tmp_path)
    client = SearchClient(base_url="http://test", session=FakeSession(_script()),
                          sleep=lambda s: None)
    cs = assemble_candidates("q2", config, client=client)
    assert [c.paper_id for c in cs.candidates] == ["p3", "p1", "p2"]
    by_id = {c.paper_id: c for c in cs.candidates}
    assert by_id["p1"].snippet == "Alpha snippet with more detail."


def test_assemble_salience_only_over_threshold(tmp_path):
    config = RetrievalConfig(cache_dir=tmp_path, salience_threshold=20)
    client = SearchClient(base_url="http://test", session=FakeSession(_script()),
                          sleep=lambda s: None)
    calls = []

    def completer(bundle):
        calls.append(bundle)
        return "salient part"

    cs = assemble_candidates("q3", config, client=client, completer=completer)
    over = [c for c in cs.candidates if len(c.snippet) > 20]
    under = [c for c in cs.candidates if len(c.snippet) <= 20]
    assert len(calls) == len(over)
    assert all(c.salient == "salient part" for c in over)
    assert all(c.salient is None for c in under)


def test_assemble_no_salience_calls_under_threshold(tmp_path):
    config = RetrievalConfig(cache_dir=tmp_path, salience_threshold=10_000)
    client = SearchClient(base_url="http://test", session=FakeSession(_script()),
                          sleep=lambda s: None)
    calls = []
    cs = assemble_candidates("q4", config, client=client,
                             completer=lambda b: calls.append(b) or "x")
    assert calls == []
    assert all(c.salient is None for c in cs.candidates)


def test_cache_corruption_detected(tmp_path):
    config = RetrievalConfig(cache_dir=tmp_path)
    client = SearchClient(base_url="http://test", session=FakeSession(_script()),
                          sleep=lambda s: None)
    cs = assemble_candidates("q5", config, client=client)
    path = cache_path(tmp_path, cs.query_id)
    wrapper = json.loads(path.read_text())
    wrapper["set"] = wrapper["set"].replace("Alpha", "Tampered")
    path.write_text(json.dumps(wrapper))
    with pytest.raises(CacheCorruptError):
        assemble_candidates("q5", config, client=client)


def test_single_flight_materializes_once(tmp_path):
    config = RetrievalConfig(cache_dir=tmp_path)
    session = FakeSession(
        {
            "/paper/search": FakeResponse(200, KEYWORD_PAYLOAD),
            "/snippet/search": FakeResponse(200, SNIPPET_PAYLOAD),
        }
    )
    client = SearchClient(base_url="http://test", session=session, sleep=lambda s: None)
    results = []
    threads = [
        threading.Thread(
            target=lambda: results.append(
                assemble_candidates("q6", config, client=client)
            )
        )
        for _ in range(8)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(session.calls) == 2
    assert len({r.to_json() for r in results}) == 1


def test_query_id_stable():
    assert query_id_for("a  query") == query_id_for("a query")
    assert query_id_for("a") != query_id_for("b")
