from itertools import permutations

import numpy as np
import pytest

from visitplan import (
    Client,
    ConfirmationLedger,
    ScheduleParameters,
    budget_check,
    city_priority_order,
    fill_odd_slot,
    generate_greedy_schedule,
    group_clients_by_city,
    required_visiting_days,
)
from visitplan.confirmation import LedgerRecord
from visitplan.domain import CityGroup, DayPlan, Meeting
from visitplan.errors import UnrankedClientError, WindowOverflowError
from visitplan.scheduler import compare_city_priority

from conftest import make_roster
from oracles import assert_odd_slots_justified


def C(cid, city, rank, teu=0, country="NL"):
    return Client(cid, cid.upper(), country, city, rank=rank, teu=teu)


# -- grouping ---------------------------------------------------------------


def test_group_counts_by_rank():
    roster = [C("a", "Rotterdam", 1), C("b", "Rotterdam", 1), C("c", "Rotterdam", 3)]
    groups = group_clients_by_city(roster)
    assert len(groups) == 1
    assert groups[0].counts_by_rank == ((1, 2), (3, 1))


def test_group_empty_roster():
    assert group_clients_by_city([]) == []


def test_group_sizes_sum_to_roster():
    roster = [C("a", "X", 1), C("b", "Y", 2), C("c", "X", 5)]
    groups = group_clients_by_city(roster)
    assert len(groups) == 2
    assert sum(g.size() for g in groups) == 3


def test_group_rejects_unranked():
    with pytest.raises(UnrankedClientError):
        group_clients_by_city([C("a", "X", None)])


# -- city priority ------------------------------------------------------------


def test_more_rank1_wins_over_rank2_mass():
    a = CityGroup("A", ((1, 3),), 0)
    b = CityGroup("B", ((1, 1), (2, 9)), 0)
    assert city_priority_order([a, b]) == ["A", "B"]


def test_teu_breaks_ties():
    a = CityGroup("A", ((1, 2),), 900_000)
    b = CityGroup("B", ((1, 2),), 100_000)
    assert city_priority_order([b, a]) == ["A", "B"]


def test_lexicographic_vector_comparison_matches_brute_force():
    a = CityGroup("A", ((2, 4),), 0)
    b = CityGroup("B", ((1, 1),), 0)
    assert city_priority_order([a, b]) == ["B", "A"]
    # brute force: the chosen order must be the unique sorted permutation
    for perm in permutations([a, b]):
        ordered = city_priority_order(list(perm))
        assert ordered == ["B", "A"]


def test_comparator_is_a_total_order():
    groups = [
        CityGroup("A", ((1, 1), (3, 2)), 10),
        CityGroup("B", ((1, 1), (3, 2)), 10),
        CityGroup("C", ((2, 5),), 99),
    ]
    order = city_priority_order(groups)
    assert sorted(order) == ["A", "B", "C"]
    assert order[-1] == "C"
    assert compare_city_priority(groups[0], groups[0]) == 0


# -- demand ----------------------------------------------------------------


def test_required_days_odd_count_rounds_up(params):
    assert required_visiting_days(CityGroup("A", ((1, 1), (2, 1))), params) == 2  # 3 meetings
    assert required_visiting_days(CityGroup("A", ((2, 4),)), params) == 2  # exact
    assert required_visiting_days(CityGroup("A", ((1, 3),)), params) == 3  # 6 meetings


def test_required_days_enumeration_oracle(params):
    # pair 6 mandated meetings into 2-slot days by enumeration: 3 days
    meetings = 6
    days = 0
    while meetings > 0:
        meetings -= min(2, meetings)
        days += 1
    assert days == required_visiting_days(CityGroup("A", ((1, 3),)), params)


def test_budget_exact_fill(params):
    # two cities: 100 + 79 visiting days + 1 travel day == 180
    roster = [C(f"a{i}", "A", 2) for i in range(200)] + [C(f"b{i}", "B", 2) for i in range(158)]
    report = budget_check(roster, params)
    assert report.total_required_days == 179
    assert report.travel_days == 1
    assert report.fits and report.slack_days == 0
    assert report.dropped == ()


def test_budget_single_city_slack(params):
    roster = [C(f"a{i}", "A", 2) for i in range(20)]  # 10 days
    report = budget_check(roster, params)
    assert report.travel_days == 0
    assert report.slack_days == 170
    assert report.fits


def test_budget_overflow_drops_lowest_priority(params):
    # 3 cities needing 100 + 60 + 30 visiting days -> slack -12
    roster = (
        [C(f"a{i}", "A", 2, teu=10_000 + i) for i in range(200)]
        + [C(f"b{i}", "B", 2, teu=20_000 + i) for i in range(120)]
        + [C(f"c{i}", "C", 2, teu=30_000 + i) for i in range(60)]
    )
    report = budget_check(roster, params)
    assert report.slack_days == -12
    assert not report.fits
    assert len(report.dropped) == 24  # 12 days x 2 slots
    # recomputation oracle: dropping those visits makes the plan fit
    dropped = set(report.dropped)
    kept = [c for c in roster if (c.client_id, 1) not in dropped]
    assert budget_check(kept, params).fits


# -- greedy generation -------------------------------------------------------


def test_two_rank1_one_city(params):
    roster = [C("a", "X", 1, 10), C("b", "X", 1, 5)]
    s = generate_greedy_schedule(roster, params)
    day1 = s.days[0]
    assert day1.kind == "visiting"
    assert [(m.client_id, m.slot, m.visit_number) for m in day1.meetings] == [
        ("a", "AM", 1),
        ("b", "PM", 1),
    ]
    seconds = [m for m in s.meetings() if m.visit_number == 2]
    assert len(seconds) == 2
    assert all(m.day_index >= 91 for m in seconds)


def test_denied_client_is_excluded(params):
    roster = [C("a", "X", 1)]
    ledger = ConfirmationLedger(
        records=(LedgerRecord("a", 1, "denied", 1),)
    )
    s = generate_greedy_schedule(roster, params, ledger)
    assert s.meetings() == []
    assert s.stats.idle == 180


def test_city_block_order(params):
    roster = [C("a1", "A", 1), C("a2", "A", 1), C("a3", "A", 1), C("b1", "B", 2)]
    s = generate_greedy_schedule(roster, params)
    a_days = [d.day_index for d in s.days if d.kind == "visiting" and d.city == "A" and d.day_index <= 90]
    travel = [d.day_index for d in s.days if d.kind == "travel" and d.day_index <= 90]
    b_days = [d.day_index for d in s.days if d.kind == "visiting" and d.city == "B"]
    assert max(a_days) < travel[0] < min(b_days)


def test_windows_respected(params):
    roster = make_roster(np.random.default_rng(11), 40, 6)
    s = generate_greedy_schedule(roster, params)
    by_rank = {c.client_id: c.rank for c in roster}
    for m in s.meetings():
        if by_rank[m.client_id] == 1:
            if m.visit_number == 1:
                assert m.day_index <= 90
            else:
                assert m.day_index >= 91


def test_window_overflow_raises():
    # 200 twice-visited clients cannot fit 180 first-window slots
    params = ScheduleParameters()
    roster = [C(f"a{i}", "A", 1) for i in range(200)]
    with pytest.raises(WindowOverflowError) as err:
        generate_greedy_schedule(roster, params)
    assert err.value.overflow == 20


def test_determinism_same_inputs(params):
    roster = make_roster(np.random.default_rng(12), 25, 5)
    a = generate_greedy_schedule(roster, params, seed=42)
    b = generate_greedy_schedule(roster, params, seed=42)
    assert a.to_json_bytes() == b.to_json_bytes()


def test_no_mixed_city_days(params):
    roster = make_roster(np.random.default_rng(13), 30, 6)
    s = generate_greedy_schedule(roster, params)
    by_city = {c.client_id: c.city for c in roster}
    for day in s.days:
        if day.kind == "visiting":
            assert {by_city[m.client_id] for m in day.meetings} == {day.city}


def test_odd_slots_justified_on_random_roster(params):
    roster = make_roster(np.random.default_rng(14), 21, 4)
    s = generate_greedy_schedule(roster, params)
    assert_odd_slots_justified(s, roster, params)


# -- fill_odd_slot (public op) -----------------------------------------------


def _half_day(city="X", client_id="a", day_index=1):
    return DayPlan(
        day_index=day_index,
        kind="visiting",
        city=city,
        meetings=(
            Meeting(
                meeting_id=f"m-{client_id}-v1",
                client_id=client_id,
                day_index=day_index,
                slot="AM",
                visit_number=1,
            ),
        ),
    )


def test_fill_prefers_better_rank(params):
    clients = [C("a", "X", 1), C("b", "X", 3), C("c", "X", 4)]
    day = _half_day()
    pick = fill_odd_slot(day, clients, {("b", 1), ("c", 1)}, params)
    assert pick.client_id == "b"
    assert pick.slot == "PM"


def test_fill_returns_nothing_when_city_exhausted(params):
    clients = [C("a", "X", 1)]
    assert fill_odd_slot(_half_day(), clients, set(), params) is None


def test_fill_breaks_rank_tie_by_teu(params):
    clients = [C("a", "X", 1), C("b", "X", 2, teu=400_000), C("c", "X", 2, teu=300_000)]
    pick = fill_odd_slot(_half_day(), clients, {("b", 1), ("c", 1)}, params)
    assert pick.client_id == "b"
    # exhaustive ordering oracle over both candidates
    ordered = sorted(
        [c for c in clients if c.client_id in {"b", "c"}],
        key=lambda c: (c.rank, -c.teu, c.client_id),
    )
    assert pick.client_id == ordered[0].client_id


def test_fill_never_pairs_other_city(params):
    clients = [C("a", "X", 1), C("z", "Y", 1)]
    assert fill_odd_slot(_half_day(), clients, {("z", 1)}, params) is None


def test_fill_respects_windows(params):
    clients = [C("a", "X", 1), C("b", "X", 1)]
    late = _half_day(day_index=120)
    # b's first visit is window-bound and day 120 is outside it
    assert fill_odd_slot(late, clients, {("b", 1)}, params) is None
    # but b's second visit is allowed there once the first is done
    pick = fill_odd_slot(late, clients, {("b", 2)}, params)
    assert pick.client_id == "b" and pick.visit_number == 2


def test_mandated_firsts_may_legally_spill_past_window(params):
    # one huge city: ranks 2-3 keep packing past day 90, but the rank-1
    # client still gets day 1 and a second visit after the pass ends
    roster = [C("r1", "A", 1, 999)] + [C(f"m{i:03d}", "A", 2, i) for i in range(190)]
    s = generate_greedy_schedule(roster, params)
    r1 = sorted((m.visit_number, m.day_index) for m in s.meetings() if m.client_id == "r1")
    assert r1[0] == (1, 1)
    assert r1[1][1] >= 91
    assert max(m.day_index for m in s.meetings() if m.visit_number == 1) > 90


def test_padding_that_pushes_rank1_past_window_raises(params):
    # city A fills the entire window, so city B's rank-1 first visit has
    # nowhere legal to go: refuse rather than emit a defective schedule
    roster = (
        [C("a1", "A", 1, 999)]
        + [C(f"a{i:03d}", "A", 2, i) for i in range(178)]
        + [C("b1", "B", 1, 500)]
    )
    with pytest.raises(WindowOverflowError) as err:
        generate_greedy_schedule(roster, params)
    assert err.value.overflow == 1
