#!/usr/bin/env python3
"""Benchmark the schedule decode/score kernels: JIT-compiled vs pure Python.

The pure sources (``decode_days_py``/``score_days_py``) are always
importable, so both paths run in one process. When the environment disables
the JIT (``VISITPLAN_PURE=1``), the dispatched names are the pure functions
and the comparison collapses to a sanity run.

Usage: python benchmarks/bench_decode.py [--clients 40] [--cities 8] [--iters 5000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from visitplan.accel import JIT_ENABLED
from visitplan.domain import Client, ScheduleParameters
from visitplan.instance import build_instance
from visitplan.kernels import decode_days, decode_days_py, score_days, score_days_py
from visitplan.optimizer import FitnessWeights


def synthetic_roster(n_clients: int, n_cities: int, seed: int = 0) -> list[Client]:
    rng = np.random.default_rng(seed)
    return [
        Client(
            client_id=f"c{i:04d}",
            name=f"Client {i}",
            country="NL",
            city=f"City{int(rng.integers(0, n_cities))}",
            rank=int(rng.integers(1, 6)),
            teu=int(rng.integers(0, 700_000)),
        )
        for i in range(n_clients)
    ]


def run_path(decode, score, inst, perms, weights) -> tuple[float, float]:
    rank_weight = weights.rank_weight_array()
    checksum = 0.0
    t0 = time.perf_counter()
    for perm in perms:
        day_kind = inst.base_day_kind.copy()
        day_city = inst.base_day_city.copy()
        day_from = inst.base_day_from.copy()
        meet_client = inst.base_meet_client.copy()
        meet_visit = inst.base_meet_visit.copy()
        decode(
            inst.horizon, inst.window, inst.cap, inst.start_day0, inst.start_city,
            perm, inst.pack_off, inst.canonical_pack,
            inst.need_first, inst.need_second, inst.wants_two,
            inst.done_first0.copy(), inst.done_second0.copy(),
            day_kind, day_city, day_from, meet_client, meet_visit,
        )
        checksum += score(
            inst.horizon, inst.window, inst.cap, day_kind, meet_client, meet_visit,
            inst.rank, inst.wants_two, rank_weight,
            weights.window_bonus, weights.travel_penalty, weights.idle_penalty,
        )
    return time.perf_counter() - t0, checksum


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--clients", type=int, default=40)
    parser.add_argument("--cities", type=int, default=8)
    parser.add_argument("--iters", type=int, default=5000)
    args = parser.parse_args()

    params = ScheduleParameters()
    roster = synthetic_roster(args.clients, args.cities)
    inst = build_instance(roster, params)
    rng = np.random.default_rng(1)
    perms = [rng.permutation(inst.demand_cities).astype(np.int64) for _ in range(args.iters)]
    weights = FitnessWeights()

    # warm both paths (JIT compile + caches)
    run_path(decode_days, score_days, inst, perms[:10], weights)
    run_path(decode_days_py, score_days_py, inst, perms[:10], weights)

    jit_time, jit_sum = run_path(decode_days, score_days, inst, perms, weights)
    py_time, py_sum = run_path(decode_days_py, score_days_py, inst, perms, weights)
    assert jit_sum == py_sum, "paths disagree"

    label = "numba @njit" if JIT_ENABLED else "pure (JIT disabled by env)"
    print(f"instance: {args.clients} clients / {args.cities} cities, {args.iters} decodes")
    print(f"{label:28s} {jit_time:8.3f}s   {args.iters / jit_time:10.0f} decodes/s")
    print(f"{'pure python/numpy':28s} {py_time:8.3f}s   {args.iters / py_time:10.0f} decodes/s")
    if JIT_ENABLED:
        print(f"speedup: {py_time / jit_time:.1f}x")


if __name__ == "__main__":
    main()
