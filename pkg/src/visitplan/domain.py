"""Roster and schedule value types plus their invariant checks.

Everything here is an immutable value; mutation means building a new value.
Serialization goes through plain dicts so snapshots stay readable JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .errors import ValidationError

VALID_RANKS = (1, 2, 3, 4, 5)

DAY_IDLE = "idle"
DAY_TRAVEL = "travel"
DAY_VISITING = "visiting"

SLOT_NAMES = ("AM", "PM")

STATUS_TENTATIVE = "tentative"
STATUS_CONFIRMED = "confirmed"
STATUS_DENIED = "denied"


@dataclass(frozen=True)
class Client:
    client_id: str
    name: str
    country: str
    city: str
    rank: int | None = None
    teu: int = 0
    terminal_ids: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "client_id": self.client_id,
            "name": self.name,
            "country": self.country,
            "city": self.city,
            "rank": self.rank,
            "teu": self.teu,
            "terminal_ids": list(self.terminal_ids),
        }

    @staticmethod
    def from_dict(d: dict) -> "Client":
        return Client(
            client_id=d["client_id"],
            name=d["name"],
            country=d["country"],
            city=d["city"],
            rank=d.get("rank"),
            teu=int(d.get("teu", 0)),
            terminal_ids=tuple(d.get("terminal_ids", ())),
        )


@dataclass(frozen=True)
class Terminal:
    terminal_id: str
    name: str
    owner_client_id: str
    city: str
    country: str
    teu: int = 0

    def to_dict(self) -> dict:
        return {
            "terminal_id": self.terminal_id,
            "name": self.name,
            "owner_client_id": self.owner_client_id,
            "city": self.city,
            "country": self.country,
            "teu": self.teu,
        }

    @staticmethod
    def from_dict(d: dict) -> "Terminal":
        return Terminal(
            terminal_id=d["terminal_id"],
            name=d["name"],
            owner_client_id=d["owner_client_id"],
            city=d["city"],
            country=d["country"],
            teu=int(d.get("teu", 0)),
        )


@dataclass(frozen=True)
class Visitor:
    visitor_id: str
    name: str
    home_city: str = ""
    interest_countries: frozenset[str] = frozenset()

    def to_dict(self) -> dict:
        return {
            "visitor_id": self.visitor_id,
            "name": self.name,
            "home_city": self.home_city,
            "interest_countries": sorted(self.interest_countries),
        }

    @staticmethod
    def from_dict(d: dict) -> "Visitor":
        return Visitor(
            visitor_id=d["visitor_id"],
            name=d["name"],
            home_city=d.get("home_city", ""),
            interest_countries=frozenset(d.get("interest_countries", ())),
        )


@dataclass(frozen=True)
class ScheduleParameters:
    horizon_days: int = 180
    first_window_days: int = 90
    meetings_per_visiting_day: int = 2
    # Mandated annual visit counts per rank; 0 means best-effort (scheduled
    # once only if capacity remains after every mandated visit).
    visits_per_rank: tuple[tuple[int, int], ...] = ((1, 2), (2, 1), (3, 1), (4, 0), (5, 0))

    def __post_init__(self):
        if not (0 < self.first_window_days <= self.horizon_days):
            raise ValidationError(
                "first_window_days must be in 1..horizon_days", field="first_window_days"
            )
        if self.meetings_per_visiting_day < 1:
            raise ValidationError(
                "meetings_per_visiting_day must be >= 1", field="meetings_per_visiting_day"
            )
        vm = dict(self.visits_per_rank)
        for r in VALID_RANKS:
            v = vm.get(r, 0)
            if v not in (0, 1, 2):
                raise ValidationError(f"visits for rank {r} must be 0, 1 or 2", field="visits_per_rank")

    def visits_for(self, rank: int) -> int:
        return dict(self.visits_per_rank).get(rank, 0)

    def to_dict(self) -> dict:
        return {
            "horizon_days": self.horizon_days,
            "first_window_days": self.first_window_days,
            "meetings_per_visiting_day": self.meetings_per_visiting_day,
            "visits_per_rank": {str(r): v for r, v in self.visits_per_rank},
        }

    @staticmethod
    def from_dict(d: dict) -> "ScheduleParameters":
        vpr = d.get("visits_per_rank")
        kwargs = {
            "horizon_days": d.get("horizon_days", 180),
            "first_window_days": d.get("first_window_days", 90),
            "meetings_per_visiting_day": d.get("meetings_per_visiting_day", 2),
        }
        if vpr is not None:
            kwargs["visits_per_rank"] = tuple(sorted((int(r), int(v)) for r, v in vpr.items()))
        return ScheduleParameters(**kwargs)


@dataclass(frozen=True)
class CityGroup:
    city: str
    counts_by_rank: tuple[tuple[int, int], ...]  # (rank, K_rc), ranks with zero count omitted
    total_teu: int = 0

    def count(self, rank: int) -> int:
        return dict(self.counts_by_rank).get(rank, 0)

    def rank_vector(self) -> tuple[int, ...]:
        return tuple(self.count(r) for r in VALID_RANKS)

    def size(self) -> int:
        return sum(n for _, n in self.counts_by_rank)


@dataclass(frozen=True)
class Meeting:
    meeting_id: str
    client_id: str
    day_index: int  # 1-based
    slot: str  # "AM" or "PM"
    visit_number: int
    status: str = STATUS_TENTATIVE

    def to_dict(self) -> dict:
        return {
            "meeting_id": self.meeting_id,
            "client_id": self.client_id,
            "day_index": self.day_index,
            "slot": self.slot,
            "visit_number": self.visit_number,
            "status": self.status,
        }

    @staticmethod
    def from_dict(d: dict) -> "Meeting":
        return Meeting(
            meeting_id=d["meeting_id"],
            client_id=d["client_id"],
            day_index=int(d["day_index"]),
            slot=d["slot"],
            visit_number=int(d["visit_number"]),
            status=d.get("status", STATUS_TENTATIVE),
        )


@dataclass(frozen=True)
class DayPlan:
    day_index: int  # 1-based
    kind: str  # idle | travel | visiting
    city: str = ""  # visiting days
    from_city: str = ""  # travel days
    to_city: str = ""  # travel days
    meetings: tuple[Meeting, ...] = ()

    def to_dict(self) -> dict:
        return {
            "day_index": self.day_index,
            "kind": self.kind,
            "city": self.city,
            "from_city": self.from_city,
            "to_city": self.to_city,
            "meetings": [m.to_dict() for m in self.meetings],
        }

    @staticmethod
    def from_dict(d: dict) -> "DayPlan":
        return DayPlan(
            day_index=int(d["day_index"]),
            kind=d["kind"],
            city=d.get("city", ""),
            from_city=d.get("from_city", ""),
            to_city=d.get("to_city", ""),
            meetings=tuple(Meeting.from_dict(m) for m in d.get("meetings", ())),
        )


@dataclass(frozen=True)
class ScheduleStats:
    tvd: int
    ttd: int
    idle: int
    n_cities: int

    def to_dict(self) -> dict:
        return {"tvd": self.tvd, "ttd": self.ttd, "idle": self.idle, "n_cities": self.n_cities}

    @staticmethod
    def from_dict(d: dict) -> "ScheduleStats":
        return ScheduleStats(tvd=d["tvd"], ttd=d["ttd"], idle=d["idle"], n_cities=d["n_cities"])


@dataclass(frozen=True)
class Schedule:
    days: tuple[DayPlan, ...]
    stats: ScheduleStats
    seed: int
    generator: str  # "greedy" | "ga"

    def meetings(self) -> list[Meeting]:
        out = []
        for day in self.days:
            out.extend(day.meetings)
        return out

    def to_dict(self) -> dict:
        return {
            "days": [d.to_dict() for d in self.days],
            "stats": self.stats.to_dict(),
            "seed": self.seed,
            "generator": self.generator,
        }

    @staticmethod
    def from_dict(d: dict) -> "Schedule":
        return Schedule(
            days=tuple(DayPlan.from_dict(x) for x in d["days"]),
            stats=ScheduleStats.from_dict(d["stats"]),
            seed=int(d["seed"]),
            generator=d["generator"],
        )

    def to_json_bytes(self) -> bytes:
        return canonical_json_bytes(self.to_dict())


@dataclass(frozen=True)
class RosterStats:
    num_clients: int
    rank_histogram: tuple[tuple[int, int], ...]
    num_cities: int

    def to_dict(self) -> dict:
        return {
            "num_clients": self.num_clients,
            "rank_histogram": {str(r): n for r, n in self.rank_histogram},
            "num_cities": self.num_cities,
        }


@dataclass(frozen=True)
class Violation:
    entity_id: str
    reason: str

    def to_dict(self) -> dict:
        return {"entity_id": self.entity_id, "reason": self.reason}


def canonical_json_bytes(obj) -> bytes:
    """Deterministic JSON encoding used for byte-identity checks."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def roster_stats(clients: list[Client]) -> RosterStats:
    hist: dict[int, int] = {}
    cities = set()
    for c in clients:
        if c.rank is not None:
            hist[c.rank] = hist.get(c.rank, 0) + 1
        cities.add(c.city)
    return RosterStats(
        num_clients=len(clients),
        rank_histogram=tuple(sorted(hist.items())),
        num_cities=len(cities),
    )


def validate_roster(clients: list[Client], terminals: list[Terminal]) -> list[Violation]:
    """Collect every roster invariant violation; an empty list means valid."""
    violations: list[Violation] = []
    seen_clients: set[str] = set()
    for c in clients:
        if c.client_id in seen_clients:
            violations.append(Violation(c.client_id, "duplicate client_id"))
        seen_clients.add(c.client_id)
        if c.rank is not None and c.rank not in VALID_RANKS:
            violations.append(Violation(c.client_id, "rank out of range 1..5"))
        if c.teu < 0:
            violations.append(Violation(c.client_id, "teu must be >= 0"))
        if not c.city:
            violations.append(Violation(c.client_id, "city must be non-empty"))
        if not c.country:
            violations.append(Violation(c.client_id, "country must be non-empty"))

    client_ids = {c.client_id for c in clients}
    seen_terminals: set[str] = set()
    for t in terminals:
        if t.terminal_id in seen_terminals:
            violations.append(Violation(t.terminal_id, "duplicate terminal_id"))
        seen_terminals.add(t.terminal_id)
        if t.owner_client_id not in client_ids:
            violations.append(Violation(t.terminal_id, "dangling owner reference"))
        if t.teu < 0:
            violations.append(Violation(t.terminal_id, "teu must be >= 0"))
    return violations


def recompute_stats(days: tuple[DayPlan, ...]) -> ScheduleStats:
    """Derive tvd/ttd/idle/n_cities from the day list alone."""
    tvd = sum(1 for d in days if d.kind == DAY_VISITING)
    ttd = sum(1 for d in days if d.kind == DAY_TRAVEL)
    idle = sum(1 for d in days if d.kind == DAY_IDLE)
    cities = {d.city for d in days if d.kind == DAY_VISITING}
    return ScheduleStats(tvd=tvd, ttd=ttd, idle=idle, n_cities=len(cities))


def empty_slots(days: tuple[DayPlan, ...], cap: int) -> int:
    """Unfilled meeting slots on visiting days, in half-day units for cap=2."""
    return sum(cap - len(d.meetings) for d in days if d.kind == DAY_VISITING)


def validate_schedule(
    schedule: Schedule,
    params: ScheduleParameters,
    clients_by_id: dict[str, Client],
) -> list[Violation]:
    """Check the hard schedule invariants: day purity, capacity, same-city
    pairing, stats derivability, visit windows and candidate uniqueness."""
    violations: list[Violation] = []
    days = schedule.days
    if len(days) != params.horizon_days:
        violations.append(Violation("schedule", f"expected {params.horizon_days} days, got {len(days)}"))

    cap = params.meetings_per_visiting_day
    window = params.first_window_days
    seen_candidates: set[tuple[str, int]] = set()
    prev_city: str | None = None

    for i, day in enumerate(days):
        tag = f"day {day.day_index}"
        if day.day_index != i + 1:
            violations.append(Violation(tag, f"day_index {day.day_index} out of order"))
        if day.kind == DAY_TRAVEL:
            if day.meetings:
                violations.append(Violation(tag, "travel day holds meetings"))
            if day.from_city == day.to_city:
                violations.append(Violation(tag, "travel day with from_city == to_city"))
            if prev_city is not None and day.from_city != prev_city:
                violations.append(Violation(tag, "travel origin does not match current city"))
            prev_city = day.to_city
        elif day.kind == DAY_IDLE:
            if day.meetings:
                violations.append(Violation(tag, "idle day holds meetings"))
        elif day.kind == DAY_VISITING:
            if len(day.meetings) > cap:
                violations.append(Violation(tag, f"more than {cap} meetings"))
            if not day.city:
                violations.append(Violation(tag, "visiting day without city"))
            if prev_city is not None and day.city != prev_city:
                violations.append(Violation(tag, "visiting day city differs from arrival city"))
            prev_city = day.city
            slots_seen = set()
            for m in day.meetings:
                if m.slot in slots_seen:
                    violations.append(Violation(tag, f"slot {m.slot} occupied twice"))
                slots_seen.add(m.slot)
                if m.day_index != day.day_index:
                    violations.append(Violation(m.meeting_id, "meeting day_index mismatch"))
                client = clients_by_id.get(m.client_id)
                if client is None:
                    violations.append(Violation(m.meeting_id, "meeting references unknown client"))
                    continue
                if client.city != day.city:
                    violations.append(Violation(m.meeting_id, "client city differs from day city"))
                if m.status == STATUS_DENIED:
                    violations.append(Violation(m.meeting_id, "denied meeting present in schedule"))
                key = (m.client_id, m.visit_number)
                if key in seen_candidates:
                    violations.append(Violation(m.meeting_id, "duplicate (client, visit) pair"))
                seen_candidates.add(key)
                if client.rank is not None and params.visits_for(client.rank) == 2:
                    if m.visit_number == 1 and m.day_index > window:
                        violations.append(Violation(m.meeting_id, "first visit outside first window"))
                    if m.visit_number == 2 and m.day_index <= window:
                        violations.append(Violation(m.meeting_id, "second visit inside first window"))
        else:
            violations.append(Violation(tag, f"unknown day kind {day.kind!r}"))

    derived = recompute_stats(days)
    if derived != schedule.stats:
        violations.append(
            Violation("stats", f"stored stats {schedule.stats} differ from derived {derived}")
        )
    if schedule.stats.ttd >= 1 and schedule.stats.n_cities < 2:
        violations.append(Violation("stats", "travel days present with fewer than 2 cities"))
    return violations


def set_meeting_status(schedule: Schedule, meeting_id: str, status: str) -> Schedule:
    """Return a copy of the schedule with one meeting's status replaced."""
    new_days = []
    found = False
    for day in schedule.days:
        if any(m.meeting_id == meeting_id for m in day.meetings):
            found = True
            meetings = tuple(
                replace(m, status=status) if m.meeting_id == meeting_id else m
                for m in day.meetings
            )
            new_days.append(replace(day, meetings=meetings))
        else:
            new_days.append(day)
    if not found:
        raise ValidationError(f"meeting {meeting_id} not in schedule", field="meeting_id")
    return replace(schedule, days=tuple(new_days))
