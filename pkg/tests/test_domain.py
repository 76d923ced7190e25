import pytest

from visitplan import (
    Client,
    Schedule,
    ScheduleParameters,
    Terminal,
    generate_greedy_schedule,
    validate_roster,
    validate_schedule,
)
from visitplan.domain import recompute_stats
from visitplan.errors import ValidationError

from conftest import make_roster
import numpy as np


def test_valid_roster_reports_nothing():
    clients = [
        Client("a", "A", "NL", "Rotterdam", rank=1, teu=100),
        Client("b", "B", "DE", "Hamburg", rank=3, teu=50),
    ]
    terminals = [Terminal("t1", "T1", "a", "Rotterdam", "NL", teu=10)]
    assert validate_roster(clients, terminals) == []


def test_rank_out_of_range_is_reported():
    clients = [Client("a", "A", "NL", "Rotterdam", rank=7, teu=0)]
    report = validate_roster(clients, [])
    assert len(report) == 1
    assert "rank out of range" in report[0].reason


def test_dangling_terminal_owner_is_reported():
    terminals = [Terminal("t1", "T1", "ghost", "Rotterdam", "NL")]
    report = validate_roster([], terminals)
    assert len(report) == 1
    assert "dangling owner" in report[0].reason


def test_duplicate_client_id_is_reported():
    clients = [
        Client("a", "A", "NL", "Rotterdam", rank=1),
        Client("a", "A2", "NL", "Rotterdam", rank=2),
    ]
    assert any("duplicate" in v.reason for v in validate_roster(clients, []))


def test_empty_city_and_negative_teu_reported():
    clients = [Client("a", "A", "NL", "", rank=1, teu=-5)]
    reasons = {v.reason for v in validate_roster(clients, [])}
    assert any("city" in r for r in reasons)
    assert any("teu" in r for r in reasons)


def test_schedule_serialization_round_trip(params):
    roster = make_roster(np.random.default_rng(3), 12, 3)
    schedule = generate_greedy_schedule(roster, params)
    again = Schedule.from_dict(schedule.to_dict())
    assert again == schedule
    assert again.to_json_bytes() == schedule.to_json_bytes()


def test_stats_rederivable_from_days(params):
    roster = make_roster(np.random.default_rng(4), 20, 4)
    schedule = generate_greedy_schedule(roster, params)
    assert recompute_stats(schedule.days) == schedule.stats


def test_validate_schedule_accepts_generated(params):
    roster = make_roster(np.random.default_rng(5), 15, 5)
    schedule = generate_greedy_schedule(roster, params)
    assert validate_schedule(schedule, params, {c.client_id: c for c in roster}) == []


def test_validate_schedule_flags_tampering(params):
    roster = make_roster(np.random.default_rng(6), 8, 2)
    schedule = generate_greedy_schedule(roster, params)
    from dataclasses import replace

    broken = replace(schedule, stats=replace(schedule.stats, tvd=schedule.stats.tvd + 1))
    violations = validate_schedule(broken, params, {c.client_id: c for c in roster})
    assert violations


def test_schedule_parameters_bounds():
    with pytest.raises(ValidationError):
        ScheduleParameters(first_window_days=0)
    with pytest.raises(ValidationError):
        ScheduleParameters(first_window_days=200, horizon_days=180)
    with pytest.raises(ValidationError):
        ScheduleParameters(meetings_per_visiting_day=0)
