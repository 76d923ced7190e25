"""Array-level schedule decode and scoring kernels.

These are the hot loops: the genetic optimizer evaluates hundreds of
thousands of candidate tours per run, so the decoder works on flat numpy
arrays and never touches domain objects. ``decode_days_py``/``score_days_py``
are the always-importable pure sources; the unsuffixed names are the same
functions JIT-compiled when numba is enabled (see accel.py).

Conventions:
- days are 0-based here; ``day_kind`` holds 0=idle, 1=travel, 2=visiting
- meeting slots are flattened: slot ``s`` of day ``d`` lives at ``d*cap + s``
- ``need_first``: 0 = none, 1 = mandated first visit, 2 = best-effort first
- clients owing two visits must take the first one before the window day
  boundary and the second one after it; the decoder counts placements that
  break the first rule and never produces ones that break the second
"""

from __future__ import annotations

import numpy as np

from .accel import maybe_jit

KIND_IDLE = 0
KIND_TRAVEL = 1
KIND_VISIT = 2


def decode_days_py(
    horizon,
    window,
    cap,
    start_day,
    start_city,
    city_perm,
    pack_off,
    pack_client,
    need_first,
    need_second,
    wants_two,
    done_first,
    done_second,
    day_kind,
    day_city,
    day_from,
    meet_client,
    meet_visit,
):
    """Decode one tour chromosome into day/meeting arrays.

    Walks three passes over the city permutation: mandated first visits,
    second visits (held until the window boundary), then best-effort first
    visits. A city block packs ``cap`` meetings per day in pack order; an odd
    final slot is topped up with the next same-city candidate whose window
    still allows this day. Returns the count of mandated-twice first visits
    that landed past the window (0 means feasible).
    """
    m = city_perm.shape[0]
    d = start_day
    cur = start_city
    overflow = 0

    for pass_code in range(1, 4):
        if d >= horizon:
            break

        if pass_code == 2:
            # Find the first city in tour order still owing second visits and
            # position the cursor at the start of the second window.
            first_city = -1
            for ci in range(m):
                city = city_perm[ci]
                for j in range(pack_off[city], pack_off[city + 1]):
                    c = pack_client[j]
                    if need_second[c] == 1 and done_second[c] == 0:
                        first_city = city
                        break
                if first_city >= 0:
                    break
            if first_city < 0:
                continue
            travel_needed = cur >= 0 and cur != first_city
            earliest = d + 1 if travel_needed else d
            v = earliest if earliest > window else window
            if v >= horizon:
                continue
            if travel_needed:
                day_kind[v - 1] = KIND_TRAVEL
                day_from[v - 1] = cur
                day_city[v - 1] = first_city
                cur = first_city
            d = v

        for ci in range(m):
            city = city_perm[ci]
            if d >= horizon:
                break

            # Any remaining candidate for this pass in this city?
            has = False
            for j in range(pack_off[city], pack_off[city + 1]):
                c = pack_client[j]
                if pass_code == 1:
                    if need_first[c] == 1 and done_first[c] == 0:
                        has = True
                        break
                elif pass_code == 2:
                    if need_second[c] == 1 and done_second[c] == 0:
                        has = True
                        break
                else:
                    if need_first[c] == 2 and done_first[c] == 0:
                        has = True
                        break
            if not has:
                continue

            if cur >= 0 and cur != city:
                if d + 1 >= horizon:
                    continue  # no room for travel plus a visiting day
                day_kind[d] = KIND_TRAVEL
                day_from[d] = cur
                day_city[d] = city
                d += 1
            cur = city

            while d < horizon:
                # Slot 0 must come from the pass queue; later slots fall back
                # to any window-eligible same-city candidate (odd-slot rule).
                day_opened = False
                for slot in range(cap):
                    c_pick = -1
                    vn = 0
                    for j in range(pack_off[city], pack_off[city + 1]):
                        c = pack_client[j]
                        if pass_code == 1:
                            if need_first[c] == 1 and done_first[c] == 0:
                                c_pick = c
                                vn = 1
                                break
                        elif pass_code == 2:
                            if need_second[c] == 1 and done_second[c] == 0:
                                c_pick = c
                                vn = 2
                                break
                        else:
                            if need_first[c] == 2 and done_first[c] == 0:
                                c_pick = c
                                vn = 1
                                break
                    if c_pick < 0 and slot > 0:
                        for j in range(pack_off[city], pack_off[city + 1]):
                            c = pack_client[j]
                            if need_first[c] != 0 and done_first[c] == 0:
                                if not (wants_two[c] == 1 and d >= window):
                                    c_pick = c
                                    vn = 1
                                    break
                            if (
                                need_second[c] == 1
                                and done_second[c] == 0
                                and done_first[c] == 1
                                and d >= window
                            ):
                                c_pick = c
                                vn = 2
                                break
                    if c_pick < 0:
                        break
                    if not day_opened:
                        day_kind[d] = KIND_VISIT
                        day_city[d] = city
                        day_opened = True
                    meet_client[d * cap + slot] = c_pick
                    meet_visit[d * cap + slot] = vn
                    if vn == 1:
                        done_first[c_pick] = 1
                        if wants_two[c_pick] == 1 and d >= window:
                            overflow += 1
                    else:
                        done_second[c_pick] = 1
                if not day_opened:
                    break
                d += 1

    return overflow


def score_days_py(
    horizon,
    window,
    cap,
    day_kind,
    meet_client,
    meet_visit,
    rank,
    wants_two,
    rank_weight,
    window_bonus,
    travel_penalty,
    idle_penalty,
):
    """Fitness of a decoded day array: rank-weighted meeting value plus
    window bonuses, minus travel days and idle half-days."""
    total = 0.0
    travel_days = 0
    idle_days = 0
    free_slots = 0
    for d in range(horizon):
        kind = day_kind[d]
        if kind == KIND_TRAVEL:
            travel_days += 1
        elif kind == KIND_IDLE:
            idle_days += 1
        else:
            for slot in range(cap):
                c = meet_client[d * cap + slot]
                if c < 0:
                    free_slots += 1
                else:
                    total += rank_weight[rank[c]]
                    if meet_visit[d * cap + slot] == 1 and wants_two[c] == 1 and d < window:
                        total += window_bonus
    total -= travel_penalty * travel_days
    total -= idle_penalty * (2.0 * idle_days + free_slots)
    return total


decode_days = maybe_jit(decode_days_py)
score_days = maybe_jit(score_days_py)


def warmup():
    """Trigger JIT compilation on a tiny instance (no-op on the pure path)."""
    horizon, window, cap = 6, 3, 2
    day_kind = np.zeros(horizon, np.int8)
    day_city = np.full(horizon, -1, np.int64)
    day_from = np.full(horizon, -1, np.int64)
    meet_client = np.full(horizon * cap, -1, np.int64)
    meet_visit = np.zeros(horizon * cap, np.int8)
    decode_days(
        horizon,
        window,
        cap,
        0,
        -1,
        np.array([0], np.int64),
        np.array([0, 1], np.int64),
        np.array([0], np.int64),
        np.array([1], np.int8),
        np.array([1], np.int8),
        np.array([1], np.int8),
        np.zeros(1, np.int8),
        np.zeros(1, np.int8),
        day_kind,
        day_city,
        day_from,
        meet_client,
        meet_visit,
    )
    score_days(
        horizon,
        window,
        cap,
        day_kind,
        meet_client,
        meet_visit,
        np.array([1], np.int64),
        np.array([1], np.int8),
        np.array([0.0, 16.0, 8.0, 4.0, 2.0, 1.0]),
        5.0,
        1.0,
        0.5,
    )
