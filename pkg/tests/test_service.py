import json
import random
import threading

import pytest
from fastapi.testclient import TestClient

from glyphforge import facets, fixtures, signs as sign_model
from glyphforge.codes import parse_glyph_code
from glyphforge.service import (
    ServiceConfig,
    canonical_json,
    create_app,
    search_payload,
)


@pytest.fixture
def env(tmp_path):
    manifest = fixtures.write_manifest(
        fixtures.df1_catalog(), tmp_path / "df1.jsonl", images=True
    )
    schema_path = tmp_path / "schema.json"
    schema_path.write_text(json.dumps(fixtures.df1_schema().to_dict()))
    config = ServiceConfig(
        catalog_manifest=manifest,
        corpus_dir=tmp_path / "corpus",
        log_dir=tmp_path / "logs",
        schema_path=schema_path,
    )
    return config


@pytest.fixture
def client(env):
    return TestClient(create_app(env))


def make_sign_text(codes, sign_id="", label=None):
    sign = sign_model.new_sign(400, 400)
    for i, code in enumerate(codes):
        sign, _ = sign_model.place(sign, parse_glyph_code(code), 10 + i, 20 + i)
    sign = sign_model.Sign(
        canvas_width=400,
        canvas_height=400,
        placements=sign.placements,
        sign_id=sign_id,
        label=label,
        next_placement_id=sign.next_placement_id,
    )
    return sign_model.serialize(sign)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok", "glyphs": 24}


def test_startup_empty_manifest(tmp_path):
    manifest = tmp_path / "empty.jsonl"
    manifest.write_text("")
    config = ServiceConfig(
        catalog_manifest=manifest, corpus_dir=tmp_path / "c", log_dir=tmp_path / "l"
    )
    from glyphforge.catalog import EmptyCatalog

    with pytest.raises(EmptyCatalog):
        create_app(config)


def test_search_endpoint(client):
    resp = client.get("/search", params={"area": "hand", "fingers": "2"})
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["results"]) == 4
    resp = client.get("/search", params={"area": "hand"})
    body = resp.json()
    assert len(body["results"]) == 12
    assert body["available"] == {
        "fingers": ["1", "2", "3"],
        "side": ["back", "palm"],
    }


def test_search_errors(client):
    assert client.get("/search", params={"area": "hand", "fingers": "9"}).status_code == 400
    assert client.get("/search", params={"area": "hand", "fingers": "9"}).json()["error"] == "UnknownOption"
    assert client.get("/search", params={"area": "hand", "direction": "up"}).json()["error"] == "UnknownBox"
    assert client.get("/search", params={"area": "nope"}).json()["error"] == "UnknownArea"
    assert client.get("/search").status_code == 400


def test_search_parity_with_engine(client, env):
    from glyphforge.catalog import load_catalog

    catalog, _ = load_catalog(env.catalog_manifest)
    index = facets.build_index(catalog)
    rng = random.Random(5)
    for _ in range(50):
        area = rng.choice(catalog.facet_schema.areas)
        state = facets.SelectionState(area=area.name)
        params = {"area": area.name}
        for box in area.boxes:
            if rng.random() < 0.5:
                option = rng.choice(box.options)
                state = facets.select(catalog.facet_schema, state, box.name, option)
                params[box.name] = option
        resp = client.get("/search", params=params)
        assert resp.content == canonical_json(search_payload(index, state))


def test_glyph_record_and_image(client):
    resp = client.get("/glyphs/01-01-002-01-01-01")
    assert resp.status_code == 200
    assert resp.json()["facet_attrs"] == {"fingers": "2", "side": "palm"}
    resp = client.get("/glyphs/01-01-002-01-01-01.png")
    assert resp.status_code == 200
    assert resp.headers["content-type"] == "image/png"
    assert "immutable" in resp.headers["cache-control"]
    assert client.get("/glyphs/09-01-001-01-01-01").status_code == 404
    assert client.get("/glyphs/09-01-001-01-01-01.png").status_code == 404
    assert client.get("/glyphs/bogus").status_code == 400


def test_sign_crud_round_trip(client):
    text = make_sign_text(["01-01-001-01-01-01", "02-01-001-01-01-01"])
    resp = client.post("/signs", content=text)
    assert resp.status_code == 201
    sign_id = resp.json()["sign_id"]
    got = client.get(f"/signs/{sign_id}")
    assert got.status_code == 200
    sign = sign_model.parse(got.text)
    assert sign.sign_id == sign_id
    # byte-identical to a fresh canonical serialization
    assert got.text == sign_model.serialize(sign)
    assert client.get("/signs").json() == {"signs": [sign_id]}

    updated = make_sign_text(["03-01-001-01-01-01"], sign_id=sign_id)
    assert client.put(f"/signs/{sign_id}", content=updated).status_code == 200
    assert "03-01-001-01-01-01" in client.get(f"/signs/{sign_id}").text

    assert client.delete(f"/signs/{sign_id}").status_code == 200
    assert client.get(f"/signs/{sign_id}").status_code == 404


def test_sign_errors(client):
    assert client.get("/signs/deadbeef").status_code == 404
    assert client.put("/signs/deadbeef", content=make_sign_text([])).status_code == 404
    assert client.delete("/signs/deadbeef").status_code == 404

    resp = client.post("/signs", content="not json")
    assert resp.status_code == 400
    assert resp.json()["error"] == "ParseError"

    doc = json.loads(make_sign_text(["01-01-001-01-01-01"]))
    doc["components"] = {"01-01-001-01-01-01": 5}
    resp = client.post("/signs", content=json.dumps(doc))
    assert resp.status_code == 400
    assert resp.json()["error"] == "InvariantViolation"


def test_create_conflict_on_existing_id(client):
    text = make_sign_text(["01-01-001-01-01-01"], sign_id="fixed-id")
    assert client.post("/signs", content=text).status_code == 201
    assert client.post("/signs", content=text).status_code == 409


def test_persistence_survives_restart(env):
    client = TestClient(create_app(env))
    text = make_sign_text(["01-01-001-01-01-01", "01-01-001-01-01-01"])
    sign_id = client.post("/signs", content=text).json()["sign_id"]
    before = client.get(f"/signs/{sign_id}").content

    restarted = TestClient(create_app(env))
    after = restarted.get(f"/signs/{sign_id}").content
    assert before == after


def test_corrupt_record_is_500(client, env):
    text = make_sign_text(["01-01-001-01-01-01"])
    sign_id = client.post("/signs", content=text).json()["sign_id"]
    path = env.corpus_dir / f"{sign_id}.sign.json"
    doc = json.loads(path.read_text())
    doc["components"] = {"01-01-001-01-01-01": 9}
    path.write_text(json.dumps(doc))
    resp = client.get(f"/signs/{sign_id}")
    assert resp.status_code == 500
    assert resp.json()["error"] == "CorruptRecord"


def test_stats_endpoints(client):
    client.post("/signs", content=make_sign_text(["01-01-001-01-01-01", "01-01-001-01-01-01", "02-01-001-01-01-01"]))
    client.post("/signs", content=make_sign_text(["01-01-001-01-01-01", "03-01-001-01-01-01"]))
    freq = client.get("/stats/frequency").json()
    assert freq["by_code"] == {
        "01-01-001-01-01-01": 3,
        "02-01-001-01-01-01": 1,
        "03-01-001-01-01-01": 1,
    }
    assert freq["by_code_signwise"]["01-01-001-01-01-01"] == 2
    cooc = client.get("/stats/cooccurrence").json()
    assert {"a": "01-01-001-01-01-01", "b": "02-01-001-01-01-01", "count": 1} in cooc["pairs"]
    cats = client.get("/stats/categories").json()
    assert cats["hand_configuration"] == 3
    assert cats["movement"] == 1
    assert cats["shoulders"] == 0


def test_signs_search_endpoint(client):
    a = client.post("/signs", content=make_sign_text(["01-01-001-01-01-01", "02-01-001-01-01-01"])).json()["sign_id"]
    b = client.post("/signs", content=make_sign_text(["01-01-001-01-01-01"])).json()["sign_id"]
    hits = client.get("/signs/search", params={"contains": "01-01-001-01-01-01"}).json()["signs"]
    assert sorted([a, b]) == sorted(hits)
    hits = client.get(
        "/signs/search", params={"contains": "01-01-001-01-01-01,02-01-001-01-01-01"}
    ).json()["signs"]
    assert hits == [a]
    assert client.get("/signs/search", params={"contains": ""}).status_code == 400


def test_events_appended_in_order(client, env):
    for i in range(3):
        resp = client.post(
            "/events",
            json={"session_id": "s1", "kind": "glyph_placed", "payload": {"i": i}},
        )
        assert resp.status_code == 200
    lines = (env.log_dir / "events.jsonl").read_text().splitlines()
    assert [json.loads(l)["payload"]["i"] for l in lines] == [0, 1, 2]


def test_events_unknown_kind(client):
    resp = client.post("/events", json={"session_id": "s1", "kind": "foo"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "UnknownKind"


def test_concurrent_event_appends(client, env):
    def worker(session):
        for i in range(25):
            client.post(
                "/events",
                json={"session_id": session, "kind": "task_start", "payload": i},
            )

    threads = [threading.Thread(target=worker, args=(f"s{n}",)) for n in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    lines = [json.loads(l) for l in (env.log_dir / "events.jsonl").read_text().splitlines()]
    assert len(lines) == 100
    for n in range(4):
        own = [e["payload"] for e in lines if e["session_id"] == f"s{n}"]
        assert own == list(range(25))


def test_audit_endpoint(client):
    resp = client.get("/audit")
    assert resp.status_code == 200
    assert resp.json()["summary"] == {"classified": 24, "unclassified": 0, "missing": 0}
