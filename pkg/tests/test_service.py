"""HTTP gateway behavior: endpoint shapes, error envelopes, session
persistence, and agreement with the in-process engine."""

from __future__ import annotations

import json
import threading

import pytest
from fastapi.testclient import TestClient

from conftest import chat_reply

from leasecheck.engine import analyze, explain, make_case_facts
from leasecheck.gateway.config import AppConfig
from leasecheck.gateway.service import create_app, kb_fingerprint
from leasecheck.gateway.store import SessionStore
from leasecheck.interview import start_interview, submit_answer

DAVID_VALUES = {
    "eviction_cause": "owner_occupancy",
    "court_ruling": "false",
    "executioner": "null",
    "tenant_category": "disabled",
}


@pytest.fixture
def app_config(tmp_path):
    return AppConfig(store_dir=tmp_path / "sessions")


@pytest.fixture
def client(app_config):
    with TestClient(create_app(app_config)) as client:
        yield client


# --- read-only endpoints ------------------------------------------------------


def test_health(client, kb):
    body = client.get("/api/health").json()
    assert body["status"] == "ok"
    assert body["kb_fingerprint"] == kb_fingerprint(kb)
    assert len(body["kb_fingerprint"]) == 64
    assert body["laws"] == {
        "eviction": 9, "lease_validity": 4,
        "rent_stabilization": 3, "habitability": 4,
    }


def test_claims_inventory(client):
    body = client.get("/api/claims").json()
    by_type = {c["claim_type"]: c for c in body["claims"]}
    eviction = by_type["eviction"]
    assert [a["name"] for a in eviction["attributes"]] == [
        "eviction_cause", "court_ruling", "executioner", "tenant_category",
    ]
    assert eviction["attributes"][1]["options"] == ["true", "false"]
    assert eviction["attributes"][1]["question"]
    assert eviction["law_count"] == 9


def test_laws_endpoint(client):
    body = client.get("/api/laws/eviction").json()
    assert [law["id"] for law in body["laws"]] == [f"ev{i}" for i in range(1, 10)]
    assert all(law["source"] for law in body["laws"])


def test_laws_unknown_claim(client):
    response = client.get("/api/laws/parking")
    assert response.status_code == 404
    assert response.json() == {
        "code": "unknown_claim",
        "message": "unknown claim type: 'parking'",
    }


# --- analyze -------------------------------------------------------------------


def test_analyze_matches_engine_byte_for_byte(client, kb, david_text):
    response = client.post("/api/analyze", json={
        "claim_type": "eviction", "case_text": david_text,
    })
    body = response.json()
    facts = make_case_facts(kb.claim("eviction"), DAVID_VALUES)
    verdict = analyze(kb, facts)
    assert body["outcome"] == "unlawful"
    assert body["message"] == verdict.message
    assert body["explanation"] == explain(verdict)
    assert [c["text"] for c in body["citations"]] == [law.text for law in verdict.citations]
    assert body["trace"][-1]["rule_id"] == "eviction_violation.1"
    assert body["extraction"]["provenance"] == "pattern"
    assert body["extraction"]["raw_pairs"] == DAVID_VALUES
    assert body["timing"]["engine_ms"] >= 0.0


def test_analyze_undetermined_over_http(client):
    body = client.post("/api/analyze", json={
        "claim_type": "eviction", "case_text": "Something happened.",
    }).json()
    assert body["outcome"] == "undetermined"
    assert body["missing_attributes"] == [
        "eviction_cause", "court_ruling", "executioner", "tenant_category",
    ]


def test_analyze_validation_error_envelope(client):
    response = client.post("/api/analyze", json={"claim_type": "eviction"})
    assert response.status_code == 422
    body = response.json()
    assert body["code"] == "invalid_request"
    assert "case_text" in body["message"]


def test_analyze_bad_extractor_name(client, david_text):
    response = client.post("/api/analyze", json={
        "claim_type": "eviction", "case_text": david_text, "extractor": "psychic",
    })
    assert response.status_code == 400
    assert response.json()["code"] == "extractor_config"


def test_analyze_llm_extractor_via_stub(client, david_text, stub_llm, monkeypatch):
    monkeypatch.setenv("LLM_API_URL", stub_llm.url)
    monkeypatch.setenv("LLM_API_KEY", "stub-key")
    stub_llm.script.append(chat_reply(json.dumps(DAVID_VALUES)))
    body = client.post("/api/analyze", json={
        "claim_type": "eviction", "case_text": david_text, "extractor": "llm",
    }).json()
    assert body["extraction"]["provenance"] == "llm"
    assert body["extraction"]["audit"] == json.dumps(DAVID_VALUES)
    assert body["outcome"] == "unlawful"


def test_analyze_llm_unconfigured(client, david_text, monkeypatch):
    monkeypatch.delenv("LLM_API_URL", raising=False)
    monkeypatch.delenv("LLM_API_KEY", raising=False)
    response = client.post("/api/analyze", json={
        "claim_type": "eviction", "case_text": david_text, "extractor": "llm",
    })
    assert response.status_code == 400
    assert response.json()["code"] == "extractor_config"


def test_analyze_llm_missing_credential(client, david_text, monkeypatch):
    monkeypatch.setenv("LLM_API_URL", "http://127.0.0.1:9/v1")
    monkeypatch.delenv("LLM_API_KEY", raising=False)
    response = client.post("/api/analyze", json={
        "claim_type": "eviction", "case_text": david_text, "extractor": "llm",
    })
    assert response.status_code == 401
    assert response.json()["code"] == "credential"


# --- interview over HTTP --------------------------------------------------------


def test_interview_full_flow(client):
    started = client.post("/api/interview/start", json={"claim_type": "eviction"}).json()
    sid = started["session_id"]
    assert started["state"] == "collecting"
    assert started["question"]["attribute"] == "eviction_cause"
    assert started["pending"] == list(DAVID_VALUES)

    for attribute, value in DAVID_VALUES.items():
        answered = client.post(f"/api/interview/{sid}/answer", json={
            "attribute": attribute, "value": value,
        }).json()
    assert answered["state"] == "complete"
    assert answered["question"] is None

    nxt = client.get(f"/api/interview/{sid}/next").json()
    assert nxt["complete"] is True
    assert nxt["question"] is None

    final = client.post(f"/api/interview/{sid}/finalize").json()
    assert final["state"] == "analyzed"
    assert final["verdict"]["outcome"] == "unlawful"
    assert final["verdict"]["message"] == (
        "Tenant is in protected category, eviction for owner occupancy unlawful."
    )
    assert "1. Tenant with a lease is protected" in final["verdict"]["explanation"]

    again = client.post(f"/api/interview/{sid}/finalize").json()
    assert again["verdict"] == final["verdict"]


def test_interview_seeded_with_case_text(client, david_text):
    started = client.post("/api/interview/start", json={
        "claim_type": "eviction", "case_text": david_text,
    }).json()
    assert started["state"] == "complete"
    assert started["pending"] == []
    assert started["answered"] == DAVID_VALUES


def test_interview_error_envelopes(client):
    response = client.post("/api/interview/start", json={"claim_type": "parking"})
    assert (response.status_code, response.json()["code"]) == (404, "unknown_claim")

    response = client.get("/api/interview/absent/next")
    assert (response.status_code, response.json()["code"]) == (404, "unknown_session")

    sid = client.post("/api/interview/start",
                      json={"claim_type": "eviction"}).json()["session_id"]

    response = client.post(f"/api/interview/{sid}/answer", json={
        "attribute": "favorite_color", "value": "red"})
    assert (response.status_code, response.json()["code"]) == (400, "unknown_attribute")

    response = client.post(f"/api/interview/{sid}/answer", json={
        "attribute": "court_ruling", "value": "maybe"})
    assert (response.status_code, response.json()["code"]) == (400, "out_of_domain")

    response = client.post(f"/api/interview/{sid}/finalize")
    assert (response.status_code, response.json()["code"]) == (409, "incomplete_session")

    client.post(f"/api/interview/{sid}/answer", json={
        "attribute": "court_ruling", "value": "true"})
    response = client.post(f"/api/interview/{sid}/answer", json={
        "attribute": "court_ruling", "value": "false"})
    assert (response.status_code, response.json()["code"]) == (409, "already_answered")

    response = client.post(f"/api/interview/{sid}/answer", json={
        "attribute": "court_ruling", "value": "false", "revise": True})
    assert response.status_code == 200
    assert response.json()["answered"]["court_ruling"] == "false"


def test_sessions_survive_restart(app_config, kb):
    with TestClient(create_app(app_config)) as first:
        sid = first.post("/api/interview/start",
                         json={"claim_type": "habitability"}).json()["session_id"]
        first.post(f"/api/interview/{sid}/answer",
                   json={"attribute": "issue_type", "value": "no_heat"})
        first.post(f"/api/interview/{sid}/answer",
                   json={"attribute": "landlord_notified", "value": "true"})

    with TestClient(create_app(app_config)) as second:
        nxt = second.get(f"/api/interview/{sid}/next").json()
        assert nxt["question"]["attribute"] == "repaired_promptly"
        second.post(f"/api/interview/{sid}/answer",
                    json={"attribute": "repaired_promptly", "value": "false"})
        final = second.post(f"/api/interview/{sid}/finalize").json()
        assert final["verdict"]["outcome"] == "unlawful"


def test_static_frontend_mount(tmp_path):
    site = tmp_path / "site"
    site.mkdir()
    (site / "index.html").write_text("<!doctype html><title>ok</title>")
    config = AppConfig(store_dir=tmp_path / "sessions", frontend_dir=site)
    with TestClient(create_app(config)) as client:
        response = client.get("/")
        assert response.status_code == 200
        assert "ok" in response.text
        assert client.get("/api/health").status_code == 200


# --- session store ---------------------------------------------------------------


def test_store_files_are_json(tmp_path, kb):
    store = SessionStore(tmp_path)
    session = start_interview(kb, "eviction")
    store.save(session)
    (path,) = tmp_path.glob("*.json")
    on_disk = json.loads(path.read_text())
    assert on_disk["claim_type"] == "eviction"
    assert path.stem == session.id


def test_store_rejects_path_escapes(tmp_path):
    store = SessionStore(tmp_path)
    from leasecheck.errors import UnknownSessionError

    for bad in ("../outside", "a/b", "", "x" * 500, "semi;colon"):
        with pytest.raises(UnknownSessionError):
            store.load(bad)


def test_store_mutate_is_serialized(tmp_path, kb):
    store = SessionStore(tmp_path)
    session = start_interview(kb, "eviction")
    store.save(session)
    values = ["true", "false"] * 25

    def flip(value):
        def operation(current):
            return submit_answer(kb, current, "court_ruling", value, revise=True)
        return operation

    threads = [threading.Thread(target=store.mutate, args=(session.id, flip(v)))
               for v in values]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    final = store.load(session.id)
    assert final.facts.values["court_ruling"] in {"true", "false"}
    json.loads((tmp_path / f"{session.id}.json").read_text())
