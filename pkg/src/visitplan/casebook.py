"""Case memory over past scheduling episodes: retrieve the closest prior
case, reuse its city ordering to seed a new search, revise it with the
observed outcome, and retain it for the future."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .domain import DAY_VISITING, Client, Schedule, ScheduleParameters
from .errors import DuplicateKeyError, NotEvaluatedError
from .scheduler import city_priority_order, group_clients_by_city

OUTCOME_SUCCESS = "success"
OUTCOME_REPAIRED = "repaired"
OUTCOME_FAILED = "failed"


@dataclass(frozen=True)
class CaseDescriptor:
    num_clients: int
    rank_histogram: tuple[tuple[int, int], ...]
    num_cities: int
    horizon_days: int = 180

    @staticmethod
    def from_roster(clients: list[Client], params: ScheduleParameters) -> "CaseDescriptor":
        hist: dict[int, int] = {}
        cities = set()
        for c in clients:
            if c.rank is not None:
                hist[c.rank] = hist.get(c.rank, 0) + 1
            cities.add(c.city)
        return CaseDescriptor(
            num_clients=len(clients),
            rank_histogram=tuple(sorted(hist.items())),
            num_cities=len(cities),
            horizon_days=params.horizon_days,
        )

    def count(self, rank: int) -> int:
        return dict(self.rank_histogram).get(rank, 0)

    def index_key(self) -> str:
        ranks = ",".join(str(self.count(r)) for r in (1, 2, 3, 4, 5))
        return f"k{self.num_clients}|r{ranks}|c{self.num_cities}|h{self.horizon_days}"

    def to_dict(self) -> dict:
        return {
            "num_clients": self.num_clients,
            "rank_histogram": {str(r): n for r, n in self.rank_histogram},
            "num_cities": self.num_cities,
            "horizon_days": self.horizon_days,
        }

    @staticmethod
    def from_dict(d: dict) -> "CaseDescriptor":
        return CaseDescriptor(
            num_clients=int(d["num_clients"]),
            rank_histogram=tuple(
                sorted((int(r), int(n)) for r, n in d["rank_histogram"].items())
            ),
            num_cities=int(d["num_cities"]),
            horizon_days=int(d.get("horizon_days", 180)),
        )


@dataclass(frozen=True)
class Case:
    case_id: str
    descriptor: CaseDescriptor
    schedule: Schedule
    outcome: str | None = None
    notes: str = ""
    index_key: str = ""

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "descriptor": self.descriptor.to_dict(),
            "schedule": self.schedule.to_dict(),
            "outcome": self.outcome,
            "notes": self.notes,
            "index_key": self.index_key,
        }

    @staticmethod
    def from_dict(d: dict) -> "Case":
        return Case(
            case_id=d["case_id"],
            descriptor=CaseDescriptor.from_dict(d["descriptor"]),
            schedule=Schedule.from_dict(d["schedule"]),
            outcome=d.get("outcome"),
            notes=d.get("notes", ""),
            index_key=d.get("index_key", ""),
        )


@dataclass(frozen=True)
class CaseBase:
    cases: tuple[Case, ...] = ()  # retention order, oldest first

    def to_dict(self) -> dict:
        return {"cases": [c.to_dict() for c in self.cases]}

    @staticmethod
    def from_dict(d: dict) -> "CaseBase":
        return CaseBase(cases=tuple(Case.from_dict(c) for c in d.get("cases", ())))


def similarity(a: CaseDescriptor, b: CaseDescriptor) -> float:
    """1 minus the per-dimension-normalized L1 distance over client count,
    rank counts and city count, floored at 0. Dimensions that are 0 on both
    sides contribute no distance."""

    def dim(x: int, y: int) -> float:
        top = max(x, y)
        return abs(x - y) / top if top > 0 else 0.0

    distance = dim(a.num_clients, b.num_clients) + dim(a.num_cities, b.num_cities)
    for r in (1, 2, 3, 4, 5):
        distance += dim(a.count(r), b.count(r))
    return max(0.0, 1.0 - distance)


def retrieve(
    base: CaseBase,
    query: CaseDescriptor,
    threshold: float = 0.6,
    include_failed: bool = False,
) -> tuple[Case, float] | None:
    """Best-matching case at or above the similarity threshold; ties go to
    the most recently retained case. Failed episodes are skipped by default."""
    best: tuple[Case, float] | None = None
    for case in base.cases:
        if case.outcome == OUTCOME_FAILED and not include_failed:
            continue
        sim = similarity(query, case.descriptor)
        if best is None or sim >= best[1]:
            best = (case, sim)
    if best is None or best[1] < threshold:
        return None
    return best


def reuse(case: Case, query: CaseDescriptor, roster: list[Client]) -> list[str]:
    """City-order seed transferred from the stored schedule: cities shared
    with the current roster keep their stored relative order, new cities are
    appended in priority order."""
    stored_order: list[str] = []
    for day in case.schedule.days:
        if day.kind == DAY_VISITING and day.city not in stored_order:
            stored_order.append(day.city)
    roster_cities = {c.city for c in roster}
    kept = [city for city in stored_order if city in roster_cities]
    priority = city_priority_order(group_clients_by_city(roster))
    kept_set = set(kept)
    return kept + [city for city in priority if city not in kept_set]


def revise(case: Case, met_quotas: bool, window_ok: bool, repair_notes: str = "") -> Case:
    """Set the case outcome from its evaluation; anything short of full
    success is recorded as repaired with the operator's notes."""
    if met_quotas and window_ok:
        return replace(case, outcome=OUTCOME_SUCCESS, notes=repair_notes)
    return replace(case, outcome=OUTCOME_REPAIRED, notes=repair_notes)


def validate_case(case: Case) -> list[str]:
    """Report issues that retention should surface (not hard failures)."""
    issues = []
    if case.outcome in (OUTCOME_REPAIRED, OUTCOME_FAILED) and not case.notes:
        issues.append("repair notes required when the evaluation failed")
    return issues


def retain(base: CaseBase, case: Case) -> CaseBase:
    """Append an evaluated case to the memory with a fresh index key."""
    if case.outcome not in (OUTCOME_SUCCESS, OUTCOME_REPAIRED, OUTCOME_FAILED):
        raise NotEvaluatedError(f"case {case.case_id} has no terminal outcome")
    if any(c.case_id == case.case_id for c in base.cases):
        raise DuplicateKeyError(f"case_id {case.case_id} already retained")
    indexed = replace(case, index_key=case.descriptor.index_key())
    return CaseBase(cases=base.cases + (indexed,))
