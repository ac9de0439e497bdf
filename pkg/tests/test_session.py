"""Append-only session store."""

from __future__ import annotations

import numpy as np
import pytest

from landscaper import IterationRecord, SessionStore
from landscaper.errors import SessionNotFound, StorageError


def record(index=1, kind="concretize", **kwargs):
    return IterationRecord(index=index, kind=kind, timestamp="2026-01-01T00:00:00+00:00", **kwargs)


def test_record_round_trip():
    rec = record(
        seed=5,
        text="two pines",
        graph={"nodes": []},
        layout={"elements": []},
        style={"season": "summer"},
        layout_source="generated",
        image_ref="a" * 32,
        transcripts={"graph": []},
        error=None,
    )
    assert IterationRecord.from_json_dict(rec.to_json_dict()) == rec


def test_create_load_append(tmp_path):
    store = SessionStore(tmp_path)
    session_id = store.create("two pines by a house")
    assert len(session_id) == 12 and session_id.isalnum()
    assert store.exists(session_id)

    session = store.load(session_id)
    assert session.records[0].kind == "created"
    assert session.records[0].text == "two pines by a house"
    assert session.description == "two pines by a house"

    store.append(session_id, record(index=1, layout_source="oracle"))
    session = store.load(session_id)
    assert len(session.records) == 2
    assert session.latest("layout_source") == "oracle"


def test_latest_scans_newest_first(tmp_path):
    store = SessionStore(tmp_path)
    session_id = store.create("x")
    store.append(session_id, record(index=1, layout={"v": 1}))
    store.append(session_id, record(index=2, kind="render", layout=None))
    store.append(session_id, record(index=3, layout={"v": 2}))
    assert store.load(session_id).latest("layout") == {"v": 2}


def test_append_to_missing_session(tmp_path):
    store = SessionStore(tmp_path)
    with pytest.raises(SessionNotFound):
        store.append("feedbeef0000", record())


def test_load_missing_session(tmp_path):
    with pytest.raises(SessionNotFound):
        SessionStore(tmp_path).load("feedbeef0000")


def test_path_traversal_is_not_a_session_id(tmp_path):
    store = SessionStore(tmp_path)
    for evil in ("../evil", "a/b", "..", "x.jsonl"):
        with pytest.raises(SessionNotFound):
            store.load(evil)


def test_corrupt_record_names_the_line(tmp_path):
    store = SessionStore(tmp_path)
    session_id = store.create("x")
    path = store.sessions_dir / f"{session_id}.jsonl"
    with path.open("a") as fh:
        fh.write("{broken\n")
    with pytest.raises(StorageError, match=":2"):
        store.load(session_id)


def test_blank_lines_are_tolerated(tmp_path):
    store = SessionStore(tmp_path)
    session_id = store.create("x")
    path = store.sessions_dir / f"{session_id}.jsonl"
    with path.open("a") as fh:
        fh.write("\n\n")
    assert len(store.load(session_id).records) == 1


def test_list_sessions(tmp_path):
    store = SessionStore(tmp_path)
    first = store.create("first scene")
    second = store.create("second scene")
    listing = store.list_sessions()
    assert {entry["session_id"] for entry in listing} == {first, second}
    for entry in listing:
        assert entry["records"] == 1
        assert entry["created"]
        assert entry["description"] in ("first scene", "second scene")


def test_save_image_is_content_addressed(tmp_path):
    store = SessionStore(tmp_path)
    image = np.random.default_rng(0).integers(0, 256, size=(8, 8, 3), dtype=np.uint8)
    ref = store.save_image(image)
    assert len(ref) == 32
    assert store.save_image(image.copy()) == ref
    assert np.array_equal(store.load_image(ref), image)

    other = store.save_image(np.zeros((8, 8, 3), dtype=np.uint8))
    assert other != ref


def test_image_path_validation(tmp_path):
    store = SessionStore(tmp_path)
    with pytest.raises(StorageError, match="invalid image ref"):
        store.image_path("short")
    with pytest.raises(StorageError, match="invalid image ref"):
        store.image_path("../" + "a" * 30)
    with pytest.raises(StorageError, match="no image"):
        store.image_path("a" * 32)
