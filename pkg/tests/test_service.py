import pytest
from fastapi.testclient import TestClient as HttpClient

from visitplan import Engine
from visitplan.service import create_app

CLIENTS_CSV = b"""client_id,name,country,city,rank,teu
c1,Alpha,NL,Rotterdam,1,600000
c2,Beta,DE,Hamburg,2,300000
c3,Gamma,SG,Singapore,3,90000
"""


@pytest.fixture
def api():
    engine = Engine()
    engine.ingest(CLIENTS_CSV, None)
    return HttpClient(create_app(engine))


def test_client_crud_cycle(api):
    r = api.post(
        "/api/v1/clients",
        json={"client_id": "c9", "name": "New", "country": "NL", "city": "Delft", "rank": 4, "teu": 10},
    )
    assert r.status_code == 200
    rev = r.json()["revision"]

    r = api.get("/api/v1/clients/c9")
    assert r.json()["client"]["city"] == "Delft"

    r = api.put(
        "/api/v1/clients/c9",
        json={"client_id": "c9", "name": "New", "country": "NL", "city": "Delft", "rank": 4, "teu": 999},
    )
    assert r.json()["client"]["teu"] == 999
    assert r.json()["revision"] == rev + 1

    r = api.delete("/api/v1/clients/c9")
    assert r.status_code == 400
    assert r.json()["code"] == "confirmation_required"

    r = api.delete("/api/v1/clients/c9", params={"confirm": "true"})
    assert r.status_code == 200

    r = api.get("/api/v1/clients/c9")
    assert r.status_code == 404
    assert r.json()["code"] == "not_found"


def test_rank_out_of_range_is_structured(api):
    r = api.post("/api/v1/clients/c1/rank", json={"mode": "manual", "value": 7})
    assert r.status_code == 400
    body = r.json()
    assert body["code"] == "rank_out_of_range"
    assert body["field"] == "rank"


def test_posting_client_with_bad_rank_is_structured(api):
    r = api.post(
        "/api/v1/clients",
        json={"client_id": "c8", "name": "Bad", "country": "NL", "city": "Delft", "rank": 7, "teu": 0},
    )
    assert r.status_code == 400
    assert r.json()["code"] == "rank_out_of_range"

    r = api.post(
        "/api/v1/clients",
        json={"client_id": "c8", "name": "Bad", "country": "NL", "city": "", "rank": 3, "teu": 0},
    )
    assert r.status_code == 400
    body = r.json()
    assert body["code"] == "validation" and body["field"] == "city"


def test_read_endpoints_do_not_change_revision(api):
    rev = api.get("/api/v1/state/revision").json()["revision"]
    api.get("/api/v1/clients")
    api.get("/api/v1/rank-suggestions")
    assert api.get("/api/v1/state/revision").json()["revision"] == rev


def test_schedule_view_not_generated(api):
    r = api.get("/api/v1/schedule")
    assert r.status_code == 404
    assert r.json()["code"] == "not_generated"


def test_generate_view_and_denial_locality(api):
    r = api.post("/api/v1/schedule/generate", json={"optimizer": "greedy", "seed": 7})
    assert r.status_code == 200
    rev = r.json()["revision"]

    r = api.get("/api/v1/schedule", params={"view": "date", "horizon": 90})
    rows = r.json()["rows"]
    assert rows and rows[0]["day_index"] == 1
    assert all(row["day_index"] <= 90 for row in rows)

    r = api.get("/api/v1/schedule", params={"view": "client", "horizon": 180})
    by_client = {row["client_id"]: row for row in r.json()["rows"]}
    assert len(by_client["c1"]["visits"]) == 2  # rank 1 is visited twice

    r = api.get("/api/v1/schedule/pending")
    pending = r.json()["pending"]
    assert pending

    victim = pending[0]
    r = api.post(
        f"/api/v1/schedule/meetings/{victim['meeting_id']}/response",
        json={"status": "denied"},
    )
    body = r.json()
    assert r.status_code == 200
    assert body["first_changed_day"] >= victim["day_index"]
    assert body["revision"] == rev + 1

    # denying the same candidate again is an illegal transition
    r = api.post(
        f"/api/v1/schedule/meetings/{victim['meeting_id']}/response",
        json={"status": "denied"},
    )
    assert r.status_code in (404, 409)


def test_confirm_marks_meeting(api):
    api.post("/api/v1/schedule/generate", json={"optimizer": "greedy", "seed": 1})
    victim = api.get("/api/v1/schedule/pending").json()["pending"][0]
    r = api.post(
        f"/api/v1/schedule/meetings/{victim['meeting_id']}/response",
        json={"status": "confirmed"},
    )
    assert r.status_code == 200
    rows = api.get("/api/v1/schedule").json()["rows"]
    confirmed = [x for x in rows if x.get("meeting_id") == victim["meeting_id"]]
    assert confirmed[0]["status"] == "confirmed"


def test_visitor_and_terminal_endpoints(api):
    r = api.post(
        "/api/v1/visitors",
        json={"visitor_id": "v1", "name": "Traveler", "interest_countries": ["SG"]},
    )
    assert r.status_code == 200
    r = api.get("/api/v1/visitors/v1")
    assert r.json()["visitor"]["interest_countries"] == ["SG"]

    r = api.post(
        "/api/v1/terminals",
        json={"terminal_id": "t1", "name": "T", "owner_client_id": "c1", "city": "Rotterdam", "country": "NL", "teu": 10},
    )
    assert r.status_code == 200
    r = api.delete("/api/v1/terminals/t1", params={"confirm": "true"})
    assert r.status_code == 200


def test_ga_generate_endpoint(api):
    r = api.post("/api/v1/schedule/generate", json={"optimizer": "ga", "seed": 3})
    assert r.status_code == 200
    assert r.json()["generator"] == "ga"


def test_rank_suggestions_threshold_param(api):
    r = api.get("/api/v1/rank-suggestions", params={"variation_threshold_pct": 5})
    assert r.status_code == 200
    assert {s["client_id"] for s in r.json()["suggestions"]} == {"c1", "c2", "c3"}
