"""Greedy baseline schedule generation and its supporting operations:
city grouping, priority ordering, day-budget feasibility and the odd-slot
pairing rule. The actual packing runs through the shared decode kernel
(see instance.py), so the genetic optimizer explores exactly the same
schedule space."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cmp_to_key

from .domain import (
    DAY_VISITING,
    Client,
    CityGroup,
    DayPlan,
    Meeting,
    Schedule,
    ScheduleParameters,
)
from .errors import UnrankedClientError, ValidationError
from .instance import (
    build_instance,
    canonical_chromosome,
    materialize_schedule,
    remaining_demand_groups,
)


@dataclass(frozen=True)
class DemandTable:
    entries: tuple[tuple[str, int, int], ...]  # (city, required_meetings, required_days)

    def total_days(self) -> int:
        return sum(days for _, _, days in self.entries)


@dataclass(frozen=True)
class FeasibilityReport:
    total_required_days: int
    travel_days: int
    fits: bool
    slack_days: int
    dropped: tuple[tuple[str, int], ...]  # (client_id, visit_number), worst first

    def to_dict(self) -> dict:
        return {
            "total_required_days": self.total_required_days,
            "travel_days": self.travel_days,
            "fits": self.fits,
            "slack_days": self.slack_days,
            "dropped": [list(d) for d in self.dropped],
        }


def group_clients_by_city(roster: list[Client]) -> list[CityGroup]:
    """One group per distinct city with per-rank client counts."""
    unranked = sorted(c.client_id for c in roster if c.rank is None)
    if unranked:
        raise UnrankedClientError(f"clients without rank: {', '.join(unranked)}")
    counts: dict[str, dict[int, int]] = {}
    teus: dict[str, int] = {}
    for c in roster:
        city = counts.setdefault(c.city, {})
        city[c.rank] = city.get(c.rank, 0) + 1
        teus[c.city] = teus.get(c.city, 0) + c.teu
    return [
        CityGroup(city=name, counts_by_rank=tuple(sorted(counts[name].items())), total_teu=teus[name])
        for name in sorted(counts)
    ]


def compare_city_priority(a: CityGroup, b: CityGroup) -> int:
    """Negative when ``a`` outranks ``b``: more top-ranked clients first
    (lexicographic on the rank-count vector), then TEU, then name."""
    va, vb = a.rank_vector(), b.rank_vector()
    if va != vb:
        return -1 if va > vb else 1
    if a.total_teu != b.total_teu:
        return -1 if a.total_teu > b.total_teu else 1
    if a.city == b.city:
        return 0
    return -1 if a.city < b.city else 1


def city_priority_order(groups: list[CityGroup]) -> list[str]:
    return [g.city for g in sorted(groups, key=cmp_to_key(compare_city_priority))]


def required_visiting_days(group: CityGroup, params: ScheduleParameters) -> int:
    """Days needed for a city's mandated meetings at ``cap`` per day; an odd
    meeting count still claims the whole last day (its free half-slot gets
    topped up by the odd-slot rule when a candidate exists)."""
    meetings = sum(
        params.visits_for(r) * n for r, n in group.counts_by_rank
    )
    return math.ceil(meetings / params.meetings_per_visiting_day)


def build_demand_table(groups: list[CityGroup], params: ScheduleParameters) -> DemandTable:
    entries = []
    for g in groups:
        meetings = sum(params.visits_for(r) * n for r, n in g.counts_by_rank)
        entries.append((g.city, meetings, required_visiting_days(g, params)))
    return DemandTable(entries=tuple(entries))


def budget_check(roster: list[Client], params: ScheduleParameters) -> FeasibilityReport:
    """Check mandated demand against the horizon: visiting days per city plus
    one travel day per city transition. When the horizon is short, ``dropped``
    lists the visits to shed, worst rank first, smallest TEU first, second
    visits before first."""
    if not roster:
        raise ValidationError("budget_check requires a non-empty roster")
    demand = build_demand_table(group_clients_by_city(roster), params)
    total = demand.total_days()
    active = sum(1 for _, _, days in demand.entries if days > 0)
    travel = max(0, active - 1)
    slack = params.horizon_days - total - travel

    dropped: list[tuple[str, int]] = []
    if slack < 0:
        cap = params.meetings_per_visiting_day
        meetings_in: dict[str, int] = {}
        candidates: list[tuple[int, int, str, int, str]] = []
        for c in roster:
            visits = params.visits_for(c.rank)
            if visits == 0:
                continue
            meetings_in[c.city] = meetings_in.get(c.city, 0) + visits
            for vn in range(visits, 0, -1):
                candidates.append((-c.rank, c.teu, c.client_id, -vn, c.city))
        candidates.sort()

        def days_needed() -> int:
            cities = [n for n in meetings_in.values() if n > 0]
            return sum(math.ceil(n / cap) for n in cities) + max(0, len(cities) - 1)

        for neg_rank, _teu, client_id, neg_vn, city in candidates:
            if days_needed() <= params.horizon_days:
                break
            meetings_in[city] -= 1
            dropped.append((client_id, -neg_vn))

    return FeasibilityReport(
        total_required_days=total,
        travel_days=travel,
        fits=slack >= 0,
        slack_days=slack,
        dropped=tuple(dropped),
    )


def generate_greedy_schedule(
    roster: list[Client],
    params: ScheduleParameters,
    ledger=None,
    start_day: int = 1,
    frozen_prefix: tuple[DayPlan, ...] = (),
    seed: int = 0,
    city_order: list[str] | None = None,
) -> Schedule:
    """Deterministic baseline: cities in priority order, canonical in-city
    packing, windows and odd-slot pairing enforced by the decode kernel."""
    inst = build_instance(roster, params, ledger, start_day, frozen_prefix)
    if city_order is None:
        city_order = city_priority_order(remaining_demand_groups(inst))
    perm, pack = canonical_chromosome(inst, city_order)
    return materialize_schedule(inst, perm, pack, generator="greedy", seed=seed)


def fill_odd_slot(
    day: DayPlan,
    city_clients: list[Client],
    unvisited: set[tuple[str, int]],
    params: ScheduleParameters,
    denied_clients: set[str] = frozenset(),
) -> Meeting | None:
    """Best same-city candidate for the free half-day of a single-meeting
    visiting day: rank ascending, TEU descending, id ascending, restricted to
    window-eligible unvisited visits of non-denied clients."""
    if day.kind != DAY_VISITING or len(day.meetings) != 1:
        raise ValidationError("fill_odd_slot expects a visiting day with one occupied slot")
    window = params.first_window_days
    booked = {m.client_id for m in day.meetings}
    best: tuple | None = None
    for c in sorted(city_clients, key=lambda c: (c.rank, -c.teu, c.client_id)):
        if c.city != day.city or c.client_id in denied_clients or c.client_id in booked:
            continue
        wants_two = params.visits_for(c.rank) == 2
        for vn in (1, 2):
            if (c.client_id, vn) not in unvisited:
                continue
            if vn == 1 and wants_two and day.day_index > window:
                continue
            if vn == 2:
                if day.day_index <= window or (c.client_id, 1) in unvisited:
                    continue
            best = (c, vn)
            break
        if best:
            break
    if not best:
        return None
    client, vn = best
    taken = {m.slot for m in day.meetings}
    free = next(s for s in ("AM", "PM") if s not in taken)
    return Meeting(
        meeting_id=f"m-{client.client_id}-v{vn}",
        client_id=client.client_id,
        day_index=day.day_index,
        slot=free,
        visit_number=vn,
    )
