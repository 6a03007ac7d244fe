from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from voxelsmith.config import Config
from voxelsmith.service import create_app
from voxelsmith.world import BlockType

DOWN = {"origin": [2.5, 30.0, 2.5], "direction": [0.0, -1.0, 0.0]}


@pytest.fixture
def client():
    return TestClient(create_app(Config()))


def make_session(client, house_id="box_house", session_index=2):
    resp = client.post("/v1/sessions", json={"v": 1, "house_id": house_id,
                                             "session_index": session_index})
    assert resp.status_code == 200
    return resp.json()


class TestSessions:
    def test_create_session(self, client):
        doc = make_session(client)
        assert doc["v"] == 1
        assert doc["dims"] == [5, 3, 5]
        assert doc["seq"] == 0

    def test_unknown_house(self, client):
        resp = client.post("/v1/sessions", json={"v": 1, "house_id": "nope"})
        assert resp.status_code == 404

    def test_houses_listing(self, client):
        doc = client.get("/v1/houses").json()
        ids = [h["house_id"] for h in doc["houses"]]
        assert "box_house" in ids


class TestUtterance:
    def test_remove_the_roof_diff(self, client):
        sid = make_session(client)["session_id"]
        resp = client.post(f"/v1/sessions/{sid}/utterance",
                           json={"v": 1, "text": "remove the roof"})
        doc = resp.json()
        assert doc["classification"] == "core"
        assert len(doc["diff"]["removed"]) == 25
        assert doc["seq"] == 1

    def test_unknown_session(self, client):
        resp = client.post("/v1/sessions/missing/utterance", json={"v": 1, "text": "hello"})
        assert resp.status_code == 404
        assert resp.json()["error"] == "unknown_session"

    def test_pending_conflict_is_structured(self, client):
        sid = make_session(client)["session_id"]
        first = client.post(f"/v1/sessions/{sid}/utterance",
                            json={"v": 1, "text": "build a garden"}).json()
        assert first["needs_hint"]
        second = client.post(f"/v1/sessions/{sid}/utterance",
                             json={"v": 1, "text": "hello"})
        assert second.status_code == 200
        assert second.json()["error"] == "needs_hint_first"

    def test_skylight(self, client):
        sid = make_session(client)["session_id"]
        doc = client.post(f"/v1/sessions/{sid}/utterance",
                          json={"v": 1, "text": "build a skylight"}).json()
        assert doc["classification"] == "induced"
        assert len(doc["diff"]["placed"]) == 2
        assert all(cell[3] == int(BlockType.GLASS) for cell in doc["diff"]["placed"])


class TestHint:
    def test_hint_completes_pending_build(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/utterance", json={"v": 1, "text": "build a garden"})
        resp = client.post(f"/v1/sessions/{sid}/hint", json={"v": 1, "cursor": DOWN})
        doc = resp.json()
        assert doc["classification"] == "core"
        assert doc["diff"]["placed"]

    def test_hint_without_pending_conflicts(self, client):
        sid = make_session(client)["session_id"]
        resp = client.post(f"/v1/sessions/{sid}/hint", json={"v": 1, "cursor": DOWN})
        assert resp.status_code == 409

    def test_hint_with_prompt(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/utterance", json={"v": 1, "text": "build a garden"})
        resp = client.post(
            f"/v1/sessions/{sid}/hint",
            json={"v": 1, "cursor": DOWN,
                  "prompt": [{"dx": 0, "dy": 0, "dz": 0, "t": int(BlockType.DIRT)}]},
        )
        assert resp.status_code == 200
        assert resp.json()["diff"]["placed"]


class TestWorldStream:
    def test_diff_stream_reconstructs_grid(self, client):
        sid = make_session(client)["session_id"]
        for text in ["build a skylight", "remove the roof", "hello"]:
            client.post(f"/v1/sessions/{sid}/utterance", json={"v": 1, "text": text})
        doc = client.get(f"/v1/sessions/{sid}/world", params={"since_seq": -1}).json()
        cells = {}
        seqs = []
        for diff in doc["diffs"]:
            seqs.append(diff["seq"])
            for x, y, z, t, label in diff["placed"]:
                cells[(x, y, z)] = (t, label)
            for x, y, z, t, label in diff["removed"]:
                cells.pop((x, y, z), None)
        assert seqs == list(range(len(seqs)))  # monotone, no gaps
        expected = {(x, y, z): (t, label) for x, y, z, t, label in doc["cells"]}
        assert cells == expected

    def test_since_seq_filters(self, client):
        sid = make_session(client)["session_id"]
        client.post(f"/v1/sessions/{sid}/utterance", json={"v": 1, "text": "remove the roof"})
        doc = client.get(f"/v1/sessions/{sid}/world", params={"since_seq": 0}).json()
        assert [d["seq"] for d in doc["diffs"]] == [1]

    def test_websocket_pushes_diffs(self, client):
        sid = make_session(client)["session_id"]
        with client.websocket_connect(f"/v1/sessions/{sid}/stream?since_seq=-1") as ws:
            first = ws.receive_json()
            assert first["seq"] == 0
            assert len(first["placed"]) == 74


class TestMetricsAndDefinitions:
    def test_definitions_listing(self, client):
        doc = client.get("/v1/definitions").json()
        heads = [e["head"] for e in doc["entries"]]
        assert "build a skylight" in heads
        assert "make the house taller" in heads

    def test_metrics_endpoint(self, client):
        sid = make_session(client, session_index=2)["session_id"]
        for text in ["build a skylight", "remove the roof"]:
            client.post(f"/v1/sessions/{sid}/utterance", json={"v": 1, "text": text})
        doc = client.get("/v1/metrics").json()
        assert doc["v"] == 1
        assert len(doc["naturalization"]) == 2
        index, core, induced, unparsable = doc["naturalization"][-1]
        assert core + induced + unparsable == pytest.approx(1.0, abs=1e-9)
