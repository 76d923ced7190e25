"""Per-meeting confirmation state and denial-driven suffix regeneration.

The ledger is an append-only state machine keyed by (client, visit number):
pending entries may move to confirmed or denied exactly once. A denial
freezes the schedule before the denial day and rebuilds everything after it,
with the denied client dropped and cities re-queued so that places still
holding unconfirmed top-ranked clients come first.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cmp_to_key

from .domain import Client, CityGroup, Schedule, ScheduleParameters
from .errors import IllegalTransitionError, UnknownCandidateError, ValidationError
from .instance import build_instance, remaining_demand_groups
from .optimizer import GaParams, evolve
from .scheduler import compare_city_priority, generate_greedy_schedule

PENDING = "pending"
CONFIRMED = "confirmed"
DENIED = "denied"


@dataclass(frozen=True)
class LedgerRecord:
    client_id: str
    visit_number: int
    status: str = PENDING
    responded_on_day: int | None = None

    def to_dict(self) -> dict:
        return {
            "client_id": self.client_id,
            "visit_number": self.visit_number,
            "status": self.status,
            "responded_on_day": self.responded_on_day,
        }

    @staticmethod
    def from_dict(d: dict) -> "LedgerRecord":
        return LedgerRecord(
            client_id=d["client_id"],
            visit_number=int(d["visit_number"]),
            status=d["status"],
            responded_on_day=d.get("responded_on_day"),
        )


@dataclass(frozen=True)
class ConfirmationLedger:
    records: tuple[LedgerRecord, ...] = ()

    def __post_init__(self):
        keys = [(r.client_id, r.visit_number) for r in self.records]
        if len(keys) != len(set(keys)):
            raise ValidationError("duplicate ledger entries")

    def lookup(self, client_id: str, visit_number: int) -> LedgerRecord | None:
        for r in self.records:
            if r.client_id == client_id and r.visit_number == visit_number:
                return r
        return None

    def status_of(self, client_id: str, visit_number: int) -> str | None:
        record = self.lookup(client_id, visit_number)
        return record.status if record else None

    def denied_clients(self) -> set[str]:
        return {r.client_id for r in self.records if r.status == DENIED}

    def confirmed_pairs(self) -> set[tuple[str, int]]:
        return {
            (r.client_id, r.visit_number) for r in self.records if r.status == CONFIRMED
        }

    def pending_pairs(self) -> set[tuple[str, int]]:
        return {
            (r.client_id, r.visit_number) for r in self.records if r.status == PENDING
        }

    def with_records(self, new_records: list[LedgerRecord]) -> "ConfirmationLedger":
        merged = {(r.client_id, r.visit_number): r for r in self.records}
        for r in new_records:
            merged[(r.client_id, r.visit_number)] = r
        return ConfirmationLedger(records=tuple(merged[k] for k in sorted(merged)))

    def to_dict(self) -> dict:
        return {"records": [r.to_dict() for r in self.records]}

    @staticmethod
    def from_dict(d: dict) -> "ConfirmationLedger":
        return ConfirmationLedger(
            records=tuple(LedgerRecord.from_dict(r) for r in d.get("records", ()))
        )


def ensure_pending(ledger: ConfirmationLedger, pairs) -> ConfirmationLedger:
    """Add pending entries for meeting candidates the ledger does not know."""
    missing = [
        LedgerRecord(client_id=cid, visit_number=vn)
        for cid, vn in sorted(pairs)
        if ledger.lookup(cid, vn) is None
    ]
    return ledger.with_records(missing) if missing else ledger


def record_response(
    ledger: ConfirmationLedger,
    client_id: str,
    visit_number: int,
    response: str,
    day: int,
) -> ConfirmationLedger:
    """Apply a client's answer to a pending meeting candidate."""
    if response not in (CONFIRMED, DENIED):
        raise ValidationError(f"response must be confirmed or denied, got {response!r}")
    record = ledger.lookup(client_id, visit_number)
    if record is None:
        raise UnknownCandidateError(
            f"no meeting candidate for ({client_id}, visit {visit_number})"
        )
    if record.status != PENDING:
        raise IllegalTransitionError(
            f"candidate ({client_id}, visit {visit_number}) already {record.status}"
        )
    updated = replace(record, status=response, responded_on_day=day)
    return ledger.with_records([updated])


def reorder_unconfirmed(
    groups: list[CityGroup],
    ledger: ConfirmationLedger,
    clients: list[Client],
    params: ScheduleParameters,
) -> list[str]:
    """Order cities by how many still-unconfirmed top-ranked clients they
    hold, falling back to the standard priority comparator; cities without
    remaining demand are dropped."""
    by_city: dict[str, CityGroup] = {g.city: g for g in groups if g.size() > 0}
    denied = ledger.denied_clients()
    pending_top: dict[str, int] = {city: 0 for city in by_city}
    for c in clients:
        if c.city not in by_city or c.rank != 1 or c.client_id in denied:
            continue
        visits = params.visits_for(c.rank)
        unconfirmed = any(
            ledger.status_of(c.client_id, vn) in (None, PENDING)
            for vn in range(1, visits + 1)
        )
        if unconfirmed:
            pending_top[c.city] += 1

    def compare(a: str, b: str) -> int:
        if pending_top[a] != pending_top[b]:
            return -1 if pending_top[a] > pending_top[b] else 1
        return compare_city_priority(by_city[a], by_city[b])

    return sorted(by_city, key=cmp_to_key(compare))


def regenerate_from(
    schedule: Schedule,
    roster: list[Client],
    params: ScheduleParameters,
    ledger: ConfirmationLedger,
    denial_day: int,
    seed: int = 0,
    ga: GaParams | None = None,
    weights=None,
) -> Schedule:
    """Rebuild the schedule from ``denial_day`` onward: days before it are
    kept byte-identical, denied clients disappear, held visits keep counting
    toward quotas, and remaining demand is re-queued city-first by
    unconfirmed top-ranked presence."""
    if not (1 <= denial_day <= params.horizon_days):
        raise ValidationError(f"denial_day {denial_day} outside 1..{params.horizon_days}")
    prefix = schedule.days[: denial_day - 1]
    inst = build_instance(roster, params, ledger, denial_day, prefix)
    order = reorder_unconfirmed(remaining_demand_groups(inst), ledger, roster, params)
    if ga is not None:
        from .optimizer import FitnessWeights

        return evolve(
            roster,
            params,
            ledger,
            weights or FitnessWeights(),
            ga,
            start_day=denial_day,
            frozen_prefix=prefix,
            city_order=order,
        )
    return generate_greedy_schedule(
        roster,
        params,
        ledger,
        start_day=denial_day,
        frozen_prefix=prefix,
        seed=seed,
        city_order=order,
    )
