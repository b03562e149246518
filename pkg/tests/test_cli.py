import json

import pytest

from intentweave.cli import main
from intentweave.pipeline import record_path, _write_json
from intentweave.sft import load_jsonl

from .mockllm import MockLlm, completion_body
from .test_server import golden_record

RAW_WITH_ISSUES = "SECTION; A\nTLDR; Cites [1] wrongly.\n\nClaim [Citation 99]."
CLEAN_RAW = "SECTION; A\nTLDR; Fine here.\n\nClaim [1]."


@pytest.fixture
def corpus_dir(tmp_path):
    out = tmp_path / "corpus"
    out.mkdir()
    for record in [golden_record(), golden_record("r-second", "another query")]:
        _write_json(record_path(out, record.query_id), record.to_dict())
    return out


def test_validate_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text(RAW_WITH_ISSUES)
    assert main(["validate", "--in", str(bad), "--candidates", "10"]) == 2
    out = capsys.readouterr().out
    assert "CITE_OUT_OF_RANGE" in out
    assert "TLDR_HAS_CITATION" in out

    good = tmp_path / "good.txt"
    good.write_text(CLEAN_RAW)
    assert main(["validate", "--in", str(good), "--candidates", "10"]) == 0


def test_render_strips_tags(tmp_path, capsys):
    src = tmp_path / "report.txt"
    src.write_text(
        "SECTION; A\nTLDR; t.\n\n<bpit>[PIT-Exposition]: r <epit> Body [1]."
    )
    assert main(["render", "--in", str(src), "--mode", "stripped"]) == 0
    out = capsys.readouterr().out
    assert "<bpit>" not in out
    assert "Body [1]." in out


def test_generate_with_mock_endpoint(tmp_path):
    candidates_file = tmp_path / "candidates.json"
    record = golden_record()
    candidates_file.write_text(
        json.dumps(
            {
                "query_id": record.query_id,
                "query": record.query,
                "candidates": [c.to_dict() for c in record.candidates],
            }
        )
    )
    out_file = tmp_path / "record.json"
    with MockLlm() as server:
        code = main(
            [
                "generate",
                "--query", "what are cnns?",
                "--variant", "both",
                "--candidates-file", str(candidates_file),
                "--base-url", server.base_url,
                "--model", "mock",
                "--out", str(out_file),
            ]
        )
    assert code == 0
    payload = json.loads(out_file.read_text())
    assert payload["raw_report"].startswith("SECTION; Mock")


def test_corpus_and_sft_commands(tmp_path):
    from intentweave.retrieval import (
        CandidateSet,
        SnippetCandidate,
        _freeze,
        query_id_for,
    )

    queries = tmp_path / "queries.txt"
    queries.write_text("first query\nsecond query\n")
    corpus_out = tmp_path / "corpus"
    candidates_dir = tmp_path / "cache"
    candidates_dir.mkdir()
    for query in ("first query", "second query"):
        _freeze(
            candidates_dir,
            CandidateSet(
                query_id=query_id_for(query),
                query=query,
                candidates=(
                    SnippetCandidate(index=1, paper_id="p1", title="T",
                                     snippet="Snippet."),
                ),
            ),
        )
    with MockLlm() as server:
        code = main(
            [
                "corpus",
                "--queries", str(queries),
                "--variant", "both",
                "--out", str(corpus_out),
                "--base-url", server.base_url,
                "--model", "mock",
                "--cache-dir", str(candidates_dir),
            ]
        )
    # mock response cites [1] but there are no candidates; still a corpus
    assert code == 0
    jsonl = tmp_path / "train.jsonl"
    assert main(["sft", "--mode", "multiview", "--in", str(corpus_out),
                 "--out", str(jsonl)]) == 0
    assert len(load_jsonl(jsonl)) == 8  # 2 records x 4 views


def test_analyze_dist(corpus_dir, tmp_path, capsys):
    assert main(
        ["analyze", "dist", "--in", str(corpus_dir), "--category", "citation"]
    ) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["counts"]["Background"] == 2
    assert payload["total"] == 2

    out_csv = tmp_path / "dist.csv"
    assert main(
        ["analyze", "dist", "--in", str(corpus_dir), "--category", "paragraph",
         "--format", "csv", "--out", str(out_csv)]
    ) == 0
    assert out_csv.read_text().startswith("type,count,percent")


def test_analyze_usage(corpus_dir, capsys):
    assert main(["analyze", "usage", "--in", str(corpus_dir)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["mean"] == 1.0  # both reports cite 1 and 2 of 2 candidates


def test_analyze_coverage(corpus_dir, capsys):
    assert main(
        ["analyze", "coverage", "--in", str(corpus_dir),
         "--reference", str(corpus_dir)]
    ) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["mean"] == 1.0


def test_analyze_likert(tmp_path, capsys):
    annotations = tmp_path / "ann.jsonl"
    rows = [
        {"report_id": "r", "item_class": "paragraph", "item_id": f"s0.p{i}",
         "rating": r, "condition": "intent", "annotator": "a"}
        for i, r in enumerate([5, 4, 5])
    ]
    annotations.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    assert main(
        ["analyze", "likert", "--annotations", str(annotations),
         "--class", "paragraph"]
    ) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["rendered"] == "4.67 ± 0.47"
    assert payload["n"] == 3
