import pytest

from visitplan import Engine, load_snapshot, parse_roster_files, save_snapshot
from visitplan.errors import (
    ConfirmationRequiredError,
    DuplicateKeyError,
    FormatError,
    NotGeneratedError,
    SnapshotVersionError,
)

CLIENTS_CSV = b"""client_id,name,country,city,rank,teu
c1,Alpha,NL,Rotterdam,1,600000
c2,Beta,DE,Hamburg,,120000
c3,Gamma,SG,Singapore,3,90000
"""

TERMINALS_CSV = b"""terminal_id,name,owner_client_id,city,country,teu
t1,Alpha T1,c1,Rotterdam,NL,50000
"""


def test_parse_well_formed_rows():
    clients, terminals, issues = parse_roster_files(CLIENTS_CSV, TERMINALS_CSV)
    assert [c.client_id for c in clients] == ["c1", "c2", "c3"]
    assert clients[1].rank is None  # blank rank parses as unset
    assert terminals[0].owner_client_id == "c1"
    assert issues == []


def test_parse_reports_bad_rows_and_keeps_good_ones():
    bad = b"client_id,name,country,city,rank,teu\nc1,A,NL,R,1,abc\nc2,B,NL,R,2,5\n"
    clients, _, issues = parse_roster_files(bad)
    assert [c.client_id for c in clients] == ["c2"]
    assert len(issues) == 1 and "non-numeric teu" in issues[0].message
    assert issues[0].row == 2


def test_parse_duplicate_ids_name_both_rows():
    dup = (
        b"client_id,name,country,city,rank,teu\n"
        b"c1,A,NL,R,1,5\nc2,B,NL,R,2,5\nc1,C,NL,R,3,5\n"
    )
    with pytest.raises(DuplicateKeyError) as err:
        parse_roster_files(dup)
    assert "2" in str(err.value) and "4" in str(err.value)


def test_parse_rejects_malformed_header():
    with pytest.raises(FormatError):
        parse_roster_files(b"id,name\n1,x\n")


def test_snapshot_round_trip_identity():
    engine = Engine()
    engine.ingest(CLIENTS_CSV, TERMINALS_CSV)
    engine.set_rank("c2", "calculated")
    engine.generate(seed=3)
    data = save_snapshot(engine.state)
    again = load_snapshot(data)
    assert again == engine.state
    assert save_snapshot(again) == data


def test_snapshot_version_and_truncation_errors():
    engine = Engine()
    engine.ingest(CLIENTS_CSV, None)
    data = save_snapshot(engine.state)
    with pytest.raises(FormatError):
        load_snapshot(data[: len(data) // 2])
    tampered = data.replace(b'"format_version":1', b'"format_version":99')
    with pytest.raises(SnapshotVersionError):
        load_snapshot(tampered)


def test_commit_rejects_invalid_state_and_keeps_revision():
    engine = Engine()
    engine.ingest(CLIENTS_CSV, TERMINALS_CSV)
    before = engine.state
    with pytest.raises(Exception):
        engine.upsert_client({"client_id": "c9", "name": "X", "country": "NL", "city": "R", "rank": 9})
    assert engine.state is before
    assert engine.state.revision == before.revision


def test_revision_increments_by_one_per_mutation():
    engine = Engine()
    r0 = engine.state.revision
    engine.ingest(CLIENTS_CSV, None)
    assert engine.state.revision == r0 + 1
    engine.upsert_client(
        {"client_id": "c9", "name": "X", "country": "NL", "city": "R", "rank": 5, "teu": 1}
    )
    assert engine.state.revision == r0 + 2


def test_delete_requires_confirmation_and_cascades():
    engine = Engine()
    engine.ingest(CLIENTS_CSV, TERMINALS_CSV)
    with pytest.raises(ConfirmationRequiredError):
        engine.delete_client("c1")
    engine.delete_client("c1", confirm=True)
    assert engine.state.client("c1") is None
    assert engine.state.terminals == ()  # t1 went with its owner


def test_engine_persists_and_reloads(tmp_path):
    engine = Engine(data_dir=tmp_path)
    engine.ingest(CLIENTS_CSV, TERMINALS_CSV)
    engine.set_rank("c2", "manual", 4)
    rev = engine.state.revision
    reloaded = Engine(data_dir=tmp_path)
    assert reloaded.state == engine.state
    assert reloaded.state.revision == rev


def test_snapshot_retention_prunes(tmp_path):
    from visitplan.config import EngineConfig

    engine = Engine(config=EngineConfig(snapshot_retention=3), data_dir=tmp_path)
    engine.ingest(CLIENTS_CSV, None)
    for i in range(6):
        engine.upsert_client(
            {"client_id": f"x{i}", "name": "X", "country": "NL", "city": "R", "rank": 5, "teu": 0}
        )
    snaps = sorted((tmp_path / "snapshots").glob("rev-*.json"))
    assert len(snaps) == 3
    assert snaps[-1].name == f"rev-{engine.state.revision:08d}.json"


def test_generate_and_respond_flow():
    engine = Engine()
    engine.ingest(CLIENTS_CSV, TERMINALS_CSV)
    engine.set_rank("c2", "calculated")
    with pytest.raises(NotGeneratedError):
        engine.pending_meetings()
    engine.generate(seed=1)
    pending = engine.pending_meetings()
    assert pending, "all meetings start tentative"

    target = pending[0]
    res = engine.respond(target.meeting_id, "confirmed")
    assert res["status"] == "confirmed"
    assert engine.state.ledger.status_of(target.client_id, target.visit_number) == "confirmed"

    victim = engine.pending_meetings()[0]
    res = engine.respond(victim.meeting_id, "denied")
    assert res["first_changed_day"] >= victim.day_index or res["first_changed_day"] == victim.day_index
    assert all(
        m.client_id != victim.client_id
        for d in engine.state.active_schedule.days[victim.day_index - 1 :]
        for m in d.meetings
    )


def test_rank_suggestions_use_previous_teu():
    engine = Engine()
    engine.ingest(CLIENTS_CSV, None)
    engine.upsert_client(
        {"client_id": "c3", "name": "Gamma", "country": "SG", "city": "Singapore", "rank": 3, "teu": 150_000}
    )
    suggestions = {s.client_id: s for s in engine.rank_suggestions()}
    # c3 grew from 90k to 150k (66%) -> one-step improvement over tier base 3
    assert suggestions["c3"].suggested_rank == 2
    assert "teu_increase" in suggestions["c3"].reasons


def test_case_retention_flow():
    engine = Engine()
    engine.ingest(CLIENTS_CSV, None)
    engine.set_rank("c2", "calculated")
    engine.generate(seed=2)
    case = engine.retain_active_case(notes="first run")
    assert case.outcome == "success"
    hit = engine.retrieve_for_roster()
    assert hit is not None and hit[1] == 1.0


def test_concurrent_mutations_serialize():
    import threading

    engine = Engine()
    engine.ingest(CLIENTS_CSV, None)
    start = engine.state.revision
    n_threads, per_thread = 8, 5

    def worker(tid: int):
        for i in range(per_thread):
            engine.upsert_client(
                {
                    "client_id": f"t{tid}x{i}",
                    "name": "X",
                    "country": "NL",
                    "city": "R",
                    "rank": 5,
                    "teu": 0,
                }
            )

    threads = [threading.Thread(target=worker, args=(t,)) for t in range(n_threads)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert engine.state.revision == start + n_threads * per_thread
    assert len(engine.state.clients) == 3 + n_threads * per_thread
