import json

import pytest

from intentweave.gateway import GenerationConfig, LlmClient
from intentweave.parser import parse_report
from intentweave.pipeline import (
    MANIFEST_NAME,
    PipelineConfig,
    build_teacher_corpus,
    completed_query_ids,
    error_path,
    failed_query_ids,
    generate_report,
    iter_records,
    load_record,
    record_path,
)
from intentweave.prompts import PromptVariant
from intentweave.retrieval import CandidateSet, SnippetCandidate, query_id_for

from .conftest import APPENDIX_EXAMPLE
from .mockllm import MockLlm, completion_body

WRAPPED_EXAMPLE = "SECTION; CNNs\nTLDR; Quick view. Of CNNs.\n\n" + APPENDIX_EXAMPLE


def make_candidate_set(query, n=3):
    return CandidateSet(
        query_id=query_id_for(query),
        query=query,
        candidates=tuple(
            SnippetCandidate(index=i, paper_id=f"p{i}", title=f"T{i}",
                             snippet=f"Snippet {i}", citation_count=i)
            for i in range(1, n + 1)
        ),
    )


def make_config(server, **overrides):
    gateway = GenerationConfig(
        base_url=server.base_url, model_name="mock-model",
        retry_limit=1, timeout=10, backoff_base=0.001, backoff_cap=0.002,
    )
    return PipelineConfig(gateway=gateway, **overrides)


def test_generate_report_parses_mock_response():
    with MockLlm(lambda i, p: (200, completion_body(WRAPPED_EXAMPLE))) as server:
        config = make_config(server)
        record = generate_report(
            "what are cnns?", PromptVariant.BOTH_INTENTS, config,
            candidate_set=make_candidate_set("what are cnns?"),
        )
    assert len(record.parsed.sections) == 1
    paragraphs = list(record.parsed.paragraphs())
    assert sum(1 for p in paragraphs if p.paragraph_intent) == 1
    spans = [s for p in paragraphs for s in []]  # citation intents below
    claims = [seg for p in paragraphs for seg in p.segments
              if hasattr(seg, "citation_intents")]
    assert sum(len(c.citation_intents) for c in claims) == 1
    assert record.query_id == query_id_for("what are cnns?")
    assert record.provenance["model"] == "mock-model"


def test_generate_report_reparse_integrity():
    with MockLlm(lambda i, p: (200, completion_body(WRAPPED_EXAMPLE))) as server:
        record = generate_report(
            "q", PromptVariant.BOTH_INTENTS, make_config(server),
            candidate_set=make_candidate_set("q"),
        )
    assert parse_report(record.raw_report).structure() == record.parsed.structure()


def test_generate_no_intent_path():
    text = "SECTION; A\nTLDR; Tag free. Yes.\n\nTag free body [1]."
    with MockLlm(lambda i, p: (200, completion_body(text))) as server:
        record = generate_report(
            "q", PromptVariant.NO_INTENT, make_config(server),
            candidate_set=make_candidate_set("q"),
        )
    assert list(record.parsed.intent_spans()) == []
    tag_codes = {"UNCLOSED_TAG", "NESTED_TAG", "ORPHAN_CLOSE_TAG"}
    assert not tag_codes & {d.code for d in record.diagnostics}


def test_degenerate_response_retried_once():
    def responder(index, payload):
        if index == 0:
            return 200, completion_body("")  # parses to zero sections
        return 200, completion_body(WRAPPED_EXAMPLE)

    with MockLlm(responder) as server:
        record = generate_report(
            "q", PromptVariant.BOTH_INTENTS, make_config(server),
            candidate_set=make_candidate_set("q"),
        )
        assert len(server.requests) == 2
    assert record.parsed.sections
    assert "PARSE_DEGENERATE" not in {d.code for d in record.diagnostics}


def test_degenerate_twice_flagged():
    with MockLlm(lambda i, p: (200, completion_body(""))) as server:
        record = generate_report(
            "q", PromptVariant.BOTH_INTENTS, make_config(server),
            candidate_set=make_candidate_set("q"),
        )
    assert "PARSE_DEGENERATE" in {d.code for d in record.diagnostics}


def test_preplan_reorders_candidates():
    def responder(index, payload):
        content = payload["messages"][-1]["content"]
        if "n | TYPE | score" in content:
            return 200, completion_body("1 | USES | 0.1\n2 | USES | 0.9\n3 | USES | 0.5")
        return 200, completion_body(WRAPPED_EXAMPLE)

    with MockLlm(responder) as server:
        record = generate_report(
            "q", PromptVariant.BOTH_INTENTS, make_config(server, preplan=True),
            candidate_set=make_candidate_set("q"),
        )
        generation_payload = server.requests[-1][1]
    # oracle order: scores desc -> p2, p3, p1
    assert [c.paper_id for c in record.candidates] == ["p2", "p3", "p1"]
    assert [c.index for c in record.candidates] == [1, 2, 3]
    prompt_text = generation_payload["messages"][-1]["content"]
    assert prompt_text.index("Snippet 2") < prompt_text.index("Snippet 3") \
        < prompt_text.index("Snippet 1")


def _corpus_responder(fail_queries):
    def responder(index, payload):
        content = payload["messages"][-1]["content"]
        for marker in fail_queries:
            if f"was:\n{marker}\n" in content:
                return 500, {"error": "injected"}
        return 200, completion_body(WRAPPED_EXAMPLE)

    return responder


def test_corpus_fault_tolerance(tmp_path):
    queries = [f"query number {i}" for i in range(50)]
    failures = {f"query number {i}" for i in (3, 11, 22, 37, 49)}
    out = tmp_path / "corpus"
    with MockLlm(_corpus_responder(failures)) as server:
        records = build_teacher_corpus(
            queries, PromptVariant.BOTH_INTENTS, make_config(server), out,
            candidate_provider=lambda q: make_candidate_set(q),
        )
    assert len(records) == 45
    record_files = [p for p in out.glob("*.json")
                    if p.name != MANIFEST_NAME and not p.name.endswith(".error.json")]
    error_files = list(out.glob("*.error.json"))
    assert len(record_files) == 45
    assert len(error_files) == 5
    assert failed_query_ids(out) == {query_id_for(q) for q in failures}
    manifest = json.loads((out / MANIFEST_NAME).read_text())
    assert manifest["completed"] == 45
    assert manifest["failed"] == 5


def test_corpus_resume_skips_completed(tmp_path):
    queries = [f"resume q {i}" for i in range(20)]
    out = tmp_path / "corpus"
    with MockLlm() as server:
        build_teacher_corpus(
            queries[:12], PromptVariant.BOTH_INTENTS, make_config(server), out,
            candidate_provider=lambda q: make_candidate_set(q),
        )
        calls_before = len(server.requests)
        assert calls_before == 12
        records = build_teacher_corpus(
            queries, PromptVariant.BOTH_INTENTS, make_config(server), out,
            candidate_provider=lambda q: make_candidate_set(q),
        )
        assert len(server.requests) - calls_before == 8  # only the new ones
    assert len(records) == 20


def test_corpus_resume_matches_uninterrupted(tmp_path):
    queries = [f"kill test {i}" for i in range(30)]
    failures = {f"kill test {i}" for i in (4, 9)}

    with MockLlm(_corpus_responder(failures)) as server:
        config = make_config(server)
        uninterrupted = tmp_path / "full"
        build_teacher_corpus(
            queries, PromptVariant.BOTH_INTENTS, config, uninterrupted,
            candidate_provider=lambda q: make_candidate_set(q),
        )
        # simulate a kill partway: first run sees only a prefix
        resumed = tmp_path / "resumed"
        build_teacher_corpus(
            queries[:17], PromptVariant.BOTH_INTENTS, config, resumed,
            candidate_provider=lambda q: make_candidate_set(q),
        )
        build_teacher_corpus(
            queries, PromptVariant.BOTH_INTENTS, config, resumed,
            candidate_provider=lambda q: make_candidate_set(q),
        )
    assert completed_query_ids(resumed) == completed_query_ids(uninterrupted)
    assert failed_query_ids(resumed) == failed_query_ids(uninterrupted)


def test_record_round_trip_via_file(tmp_path):
    with MockLlm() as server:
        records = build_teacher_corpus(
            ["one query"], PromptVariant.CITATION_ONLY, make_config(server),
            tmp_path / "c", candidate_provider=lambda q: make_candidate_set(q),
        )
    [record] = records
    loaded = load_record(record_path(tmp_path / "c", record.query_id))
    assert loaded.query == "one query"
    assert loaded.variant == "citation_only"
    assert loaded.parsed.structure() == record.parsed.structure()
    assert [c.paper_id for c in loaded.candidates] == ["p1", "p2", "p3"]


def test_empty_queries_rejected(tmp_path):
    with MockLlm() as server:
        with pytest.raises(ValueError):
            build_teacher_corpus(
                [], PromptVariant.BOTH_INTENTS, make_config(server), tmp_path
            )
