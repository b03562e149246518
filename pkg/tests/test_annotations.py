import threading

import pytest

from intentweave.annotations import (
    AnnotationError,
    AnnotationRecord,
    AnnotationStore,
    resolve_item,
)
from intentweave.parser import parse_report

REPORT = parse_report(
    "SECTION; A\nTLDR; t.\n\nFirst paragraph [1] [2].\n\nSecond paragraph.\n\n"
    "SECTION; B\nTLDR; u.\n\nThird paragraph [3]."
)


def record(**overrides):
    values = dict(
        report_id="r1", item_class="paragraph", item_id="s0.p0",
        rating=4, annotator="a1",
    )
    values.update(overrides)
    return AnnotationRecord(**values)


def test_rating_range_enforced():
    for bad in (0, 6, -1):
        with pytest.raises(AnnotationError):
            record(rating=bad)
    with pytest.raises(AnnotationError):
        record(rating=3.5)


def test_item_id_shape_enforced():
    with pytest.raises(AnnotationError):
        record(item_id="nonsense")
    with pytest.raises(AnnotationError):
        record(item_class="citation", item_id="s0.p0")  # missing ordinal
    with pytest.raises(AnnotationError):
        record(item_class="paragraph", item_id="s0.p0.c1")
    record(item_class="citation", item_id="s0.p0.c1")  # fine


def test_resolve_item():
    assert resolve_item(REPORT, "s0.p0")
    assert resolve_item(REPORT, "s0.p1")
    assert resolve_item(REPORT, "s1.p0")
    assert resolve_item(REPORT, "s0.p0.c1")
    assert not resolve_item(REPORT, "s0.p0.c2")  # only two citations
    assert not resolve_item(REPORT, "s0.p2")
    assert not resolve_item(REPORT, "s2.p0")
    assert not resolve_item(REPORT, "bogus")


def test_append_and_load(tmp_path):
    store = AnnotationStore(tmp_path / "ann.jsonl")
    stored_id = store.append(record())
    loaded = store.load()
    assert len(loaded) == 1
    assert loaded[0].annotation_id == stored_id
    assert loaded[0].rating == 4


def test_latest_wins_dedup(tmp_path):
    store = AnnotationStore(tmp_path / "ann.jsonl")
    store.append(record(rating=4))
    store.append(record(rating=5))
    store.append(record(rating=2, annotator="a2"))
    raw = store.load(dedup=False)
    assert len(raw) == 3
    deduped = store.load()
    assert len(deduped) == 2
    mine = [r for r in deduped if r.annotator == "a1"]
    assert mine[0].rating == 5


def test_export_shows_latest_only(tmp_path):
    store = AnnotationStore(tmp_path / "ann.jsonl")
    store.append(record(rating=4))
    store.append(record(rating=5))
    export = store.export_jsonl()
    assert export.count('"rating"') == 1
    assert '"rating": 5' in export


def test_concurrent_appends_none_torn(tmp_path):
    store = AnnotationStore(tmp_path / "ann.jsonl")

    def write(i):
        store.append(record(item_id=f"s0.p{i}", annotator=f"w{i}"))

    threads = [threading.Thread(target=write, args=(i,)) for i in range(100)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    lines = (tmp_path / "ann.jsonl").read_text().splitlines()
    assert len(lines) == 100
    loaded = store.load()
    assert len(loaded) == 100
    assert {r.annotator for r in loaded} == {f"w{i}" for i in range(100)}
