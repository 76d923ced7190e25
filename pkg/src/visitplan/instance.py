"""Compilation of a roster plus confirmation state into flat kernel arrays.

A ``CompiledInstance`` freezes everything the decode kernel needs: canonical
client/city indexing, per-client visit demand (net of denials and of visits
already held in a frozen prefix), and prefilled day arrays carrying the
prefix. Chromosomes are just (city permutation, per-city packing order)
array pairs decoded through the same kernel for both the greedy baseline and
the genetic optimizer, so every decoded schedule obeys the hard rules by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .domain import (
    DAY_IDLE,
    DAY_TRAVEL,
    DAY_VISITING,
    SLOT_NAMES,
    STATUS_CONFIRMED,
    STATUS_TENTATIVE,
    Client,
    DayPlan,
    Meeting,
    Schedule,
    ScheduleParameters,
    CityGroup,
    recompute_stats,
)
from .errors import UnrankedClientError, ValidationError, WindowOverflowError

NEED_NONE = 0
NEED_MANDATED = 1
NEED_BEST_EFFORT = 2


def slot_name(index: int) -> str:
    return SLOT_NAMES[index] if index < len(SLOT_NAMES) else f"S{index + 1}"


def slot_position(name: str, fallback: int) -> int:
    return SLOT_NAMES.index(name) if name in SLOT_NAMES else fallback


@dataclass
class CompiledInstance:
    params: ScheduleParameters
    clients: tuple[Client, ...]
    client_index: dict[str, int]
    city_names: tuple[str, ...]
    city_index: dict[str, int]
    rank: np.ndarray
    teu: np.ndarray
    city_of: np.ndarray
    wants_two: np.ndarray
    need_first: np.ndarray
    need_second: np.ndarray
    done_first0: np.ndarray
    done_second0: np.ndarray
    pack_off: np.ndarray
    canonical_pack: np.ndarray
    demand_cities: np.ndarray
    start_day0: int
    start_city: int
    prefix: tuple[DayPlan, ...]
    base_day_kind: np.ndarray
    base_day_city: np.ndarray
    base_day_from: np.ndarray
    base_meet_client: np.ndarray
    base_meet_visit: np.ndarray
    confirmed_pairs: frozenset

    @property
    def horizon(self) -> int:
        return self.params.horizon_days

    @property
    def window(self) -> int:
        return self.params.first_window_days

    @property
    def cap(self) -> int:
        return self.params.meetings_per_visiting_day

    def has_demand(self, i: int) -> bool:
        if self.need_first[i] != NEED_NONE and not self.done_first0[i]:
            return True
        return bool(self.need_second[i] == 1 and not self.done_second0[i])


def build_instance(
    roster: list[Client],
    params: ScheduleParameters,
    ledger=None,
    start_day: int = 1,
    frozen_prefix: tuple[DayPlan, ...] = (),
) -> CompiledInstance:
    """Compile roster + ledger + frozen prefix into kernel-ready arrays."""
    if len(frozen_prefix) != start_day - 1:
        raise ValidationError(
            f"frozen_prefix length {len(frozen_prefix)} != start_day-1 ({start_day - 1})"
        )
    unranked = sorted(c.client_id for c in roster if c.rank is None)
    if unranked:
        raise UnrankedClientError(f"clients without rank: {', '.join(unranked)}")

    clients = tuple(sorted(roster, key=lambda c: c.client_id))
    k = len(clients)
    client_index = {c.client_id: i for i, c in enumerate(clients)}

    denied_clients: set[str] = set()
    confirmed_raw: set[tuple[str, int]] = set()
    if ledger is not None:
        denied_clients = ledger.denied_clients()
        confirmed_raw = ledger.confirmed_pairs()

    consumed: set[tuple[str, int]] = set()
    prefix_cities: set[str] = set()
    for day in frozen_prefix:
        if day.kind == DAY_VISITING:
            prefix_cities.add(day.city)
        elif day.kind == DAY_TRAVEL:
            prefix_cities.update((day.from_city, day.to_city))
        for m in day.meetings:
            consumed.add((m.client_id, m.visit_number))

    city_names = tuple(sorted({c.city for c in clients} | prefix_cities))
    city_index = {name: i for i, name in enumerate(city_names)}

    rank = np.array([c.rank for c in clients], np.int64)
    teu = np.array([c.teu for c in clients], np.int64)
    city_of = np.array([city_index[c.city] for c in clients], np.int64)
    wants_two = np.zeros(k, np.int8)
    need_first = np.zeros(k, np.int8)
    need_second = np.zeros(k, np.int8)
    done_first0 = np.zeros(k, np.int8)
    done_second0 = np.zeros(k, np.int8)

    for i, c in enumerate(clients):
        visits = params.visits_for(c.rank)
        wants_two[i] = 1 if visits >= 2 else 0
        if c.client_id in denied_clients:
            continue
        need_first[i] = NEED_MANDATED if visits >= 1 else NEED_BEST_EFFORT
        need_second[i] = 1 if visits >= 2 else 0
        if (c.client_id, 1) in consumed:
            done_first0[i] = 1
        if (c.client_id, 2) in consumed:
            done_second0[i] = 1

    start_day0 = start_day - 1
    window_days_left = max(0, params.first_window_days - start_day0)
    pending_w2_firsts = int(
        np.sum((wants_two == 1) & (need_first == NEED_MANDATED) & (done_first0 == 0))
    )
    capacity = window_days_left * params.meetings_per_visiting_day
    if pending_w2_firsts > capacity:
        raise WindowOverflowError(
            f"{pending_w2_firsts} mandated first visits exceed the "
            f"{capacity}-slot first window",
            overflow=pending_w2_firsts - capacity,
        )

    # Canonical in-city packing: rank ascending, TEU descending, id ascending.
    by_city: dict[int, list[int]] = {}
    for i, c in enumerate(clients):
        by_city.setdefault(city_index[c.city], []).append(i)
    pack_off = np.zeros(len(city_names) + 1, np.int64)
    flat: list[int] = []
    for ci in range(len(city_names)):
        members = sorted(
            by_city.get(ci, []),
            key=lambda i: (int(rank[i]), -int(teu[i]), clients[i].client_id),
        )
        flat.extend(members)
        pack_off[ci + 1] = len(flat)
    canonical_pack = np.array(flat, np.int64)

    demand = []
    for ci in range(len(city_names)):
        for j in range(pack_off[ci], pack_off[ci + 1]):
            i = int(canonical_pack[j])
            if (need_first[i] != NEED_NONE and not done_first0[i]) or (
                need_second[i] == 1 and not done_second0[i]
            ):
                demand.append(ci)
                break
    demand_cities = np.array(demand, np.int64)

    start_city = -1
    for day in reversed(frozen_prefix):
        if day.kind == DAY_VISITING:
            start_city = city_index[day.city]
            break
        if day.kind == DAY_TRAVEL:
            start_city = city_index[day.to_city]
            break

    horizon = params.horizon_days
    cap = params.meetings_per_visiting_day
    base_day_kind = np.zeros(horizon, np.int8)
    base_day_city = np.full(horizon, -1, np.int64)
    base_day_from = np.full(horizon, -1, np.int64)
    base_meet_client = np.full(horizon * cap, -1, np.int64)
    base_meet_visit = np.zeros(horizon * cap, np.int8)
    for day in frozen_prefix:
        d0 = day.day_index - 1
        if day.kind == DAY_VISITING:
            base_day_kind[d0] = kernels.KIND_VISIT
            base_day_city[d0] = city_index[day.city]
            for pos, m in enumerate(day.meetings):
                if m.client_id not in client_index:
                    raise ValidationError(
                        f"prefix references unknown client {m.client_id}"
                    )
                s = slot_position(m.slot, pos)
                base_meet_client[d0 * cap + s] = client_index[m.client_id]
                base_meet_visit[d0 * cap + s] = m.visit_number
        elif day.kind == DAY_TRAVEL:
            base_day_kind[d0] = kernels.KIND_TRAVEL
            base_day_city[d0] = city_index[day.to_city]
            base_day_from[d0] = city_index[day.from_city]

    confirmed_pairs = frozenset(
        (client_index[cid], vn) for cid, vn in confirmed_raw if cid in client_index
    )

    return CompiledInstance(
        params=params,
        clients=clients,
        client_index=client_index,
        city_names=city_names,
        city_index=city_index,
        rank=rank,
        teu=teu,
        city_of=city_of,
        wants_two=wants_two,
        need_first=need_first,
        need_second=need_second,
        done_first0=done_first0,
        done_second0=done_second0,
        pack_off=pack_off,
        canonical_pack=canonical_pack,
        demand_cities=demand_cities,
        start_day0=start_day0,
        start_city=start_city,
        prefix=tuple(frozen_prefix),
        base_day_kind=base_day_kind,
        base_day_city=base_day_city,
        base_day_from=base_day_from,
        base_meet_client=base_meet_client,
        base_meet_visit=base_meet_visit,
        confirmed_pairs=confirmed_pairs,
    )


def remaining_demand_groups(inst: CompiledInstance) -> list[CityGroup]:
    """City groups counting only clients that still owe a visit."""
    groups = []
    for ci in inst.demand_cities:
        counts: dict[int, int] = {}
        total_teu = 0
        for j in range(inst.pack_off[ci], inst.pack_off[ci + 1]):
            i = int(inst.canonical_pack[j])
            if not inst.has_demand(i):
                continue
            r = int(inst.rank[i])
            counts[r] = counts.get(r, 0) + 1
            total_teu += int(inst.teu[i])
        groups.append(
            CityGroup(
                city=inst.city_names[int(ci)],
                counts_by_rank=tuple(sorted(counts.items())),
                total_teu=total_teu,
            )
        )
    return groups


def canonical_chromosome(
    inst: CompiledInstance, city_order: list[str] | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """(city permutation, packing) arrays for a given city-name order; the
    default packing is the canonical priority packing."""
    demand = [int(c) for c in inst.demand_cities]
    if city_order is None:
        perm = demand
    else:
        demand_set = set(demand)
        chosen = [inst.city_index[name] for name in city_order if name in inst.city_index]
        perm = [c for c in chosen if c in demand_set]
        seen = set(perm)
        perm.extend(c for c in demand if c not in seen)
    return np.array(perm, np.int64), inst.canonical_pack.copy()


def decode_chromosome(inst: CompiledInstance, city_perm: np.ndarray, pack: np.ndarray):
    """Run the decode kernel; returns (day arrays, meeting arrays, overflow)."""
    day_kind = inst.base_day_kind.copy()
    day_city = inst.base_day_city.copy()
    day_from = inst.base_day_from.copy()
    meet_client = inst.base_meet_client.copy()
    meet_visit = inst.base_meet_visit.copy()
    overflow = kernels.decode_days(
        inst.horizon,
        inst.window,
        inst.cap,
        inst.start_day0,
        inst.start_city,
        city_perm,
        inst.pack_off,
        pack,
        inst.need_first,
        inst.need_second,
        inst.wants_two,
        inst.done_first0.copy(),
        inst.done_second0.copy(),
        day_kind,
        day_city,
        day_from,
        meet_client,
        meet_visit,
    )
    return day_kind, day_city, day_from, meet_client, meet_visit, int(overflow)


def chromosome_score(
    inst: CompiledInstance,
    city_perm: np.ndarray,
    pack: np.ndarray,
    rank_weight: np.ndarray,
    window_bonus: float,
    travel_penalty: float,
    idle_penalty: float,
) -> tuple[float, int]:
    """Fitness of a chromosome without materializing domain objects."""
    day_kind, _, _, meet_client, meet_visit, overflow = decode_chromosome(
        inst, city_perm, pack
    )
    value = kernels.score_days(
        inst.horizon,
        inst.window,
        inst.cap,
        day_kind,
        meet_client,
        meet_visit,
        inst.rank,
        inst.wants_two,
        rank_weight,
        window_bonus,
        travel_penalty,
        idle_penalty,
    )
    return float(value), overflow


def materialize_schedule(
    inst: CompiledInstance,
    city_perm: np.ndarray,
    pack: np.ndarray,
    generator: str,
    seed: int,
) -> Schedule:
    """Decode a chromosome into a full Schedule; frozen-prefix days are
    reused verbatim so regeneration keeps them byte-identical."""
    day_kind, day_city, day_from, meet_client, meet_visit, overflow = decode_chromosome(
        inst, city_perm, pack
    )
    if overflow:
        raise WindowOverflowError(
            f"{overflow} mandated first visits landed outside the first window",
            overflow=overflow,
        )
    days: list[DayPlan] = list(inst.prefix)
    cap = inst.cap
    for d0 in range(inst.start_day0, inst.horizon):
        kind = day_kind[d0]
        if kind == kernels.KIND_IDLE:
            days.append(DayPlan(day_index=d0 + 1, kind=DAY_IDLE))
        elif kind == kernels.KIND_TRAVEL:
            days.append(
                DayPlan(
                    day_index=d0 + 1,
                    kind=DAY_TRAVEL,
                    from_city=inst.city_names[int(day_from[d0])],
                    to_city=inst.city_names[int(day_city[d0])],
                )
            )
        else:
            meetings = []
            for s in range(cap):
                ci = int(meet_client[d0 * cap + s])
                if ci < 0:
                    continue
                vn = int(meet_visit[d0 * cap + s])
                client = inst.clients[ci]
                status = (
                    STATUS_CONFIRMED if (ci, vn) in inst.confirmed_pairs else STATUS_TENTATIVE
                )
                meetings.append(
                    Meeting(
                        meeting_id=f"m-{client.client_id}-v{vn}",
                        client_id=client.client_id,
                        day_index=d0 + 1,
                        slot=slot_name(s),
                        visit_number=vn,
                        status=status,
                    )
                )
            days.append(
                DayPlan(
                    day_index=d0 + 1,
                    kind=DAY_VISITING,
                    city=inst.city_names[int(day_city[d0])],
                    meetings=tuple(meetings),
                )
            )
    day_tuple = tuple(days)
    return Schedule(
        days=day_tuple,
        stats=recompute_stats(day_tuple),
        seed=seed,
        generator=generator,
    )
