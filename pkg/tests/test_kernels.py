"""The JIT path and the pure-Python path share one source; these tests pin
that the dispatched kernels, the pure kernels, and the object-level fitness
all agree on the same schedules."""

import numpy as np

from visitplan import fitness
from visitplan.accel import JIT_ENABLED
from visitplan.instance import (
    build_instance,
    canonical_chromosome,
    chromosome_score,
    decode_chromosome,
    materialize_schedule,
)
from visitplan.kernels import decode_days, decode_days_py, score_days, score_days_py
from visitplan.optimizer import FitnessWeights

from conftest import make_roster


def _decode_with(kernel, inst, perm, pack):
    day_kind = inst.base_day_kind.copy()
    day_city = inst.base_day_city.copy()
    day_from = inst.base_day_from.copy()
    meet_client = inst.base_meet_client.copy()
    meet_visit = inst.base_meet_visit.copy()
    overflow = kernel(
        inst.horizon,
        inst.window,
        inst.cap,
        inst.start_day0,
        inst.start_city,
        perm,
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
    return day_kind, day_city, day_from, meet_client, meet_visit, overflow


def test_jit_and_pure_decode_agree(params):
    rng = np.random.default_rng(77)
    for trial in range(20):
        roster = make_roster(rng, int(rng.integers(3, 30)), int(rng.integers(1, 7)))
        inst = build_instance(roster, params)
        perm = rng.permutation(inst.demand_cities).astype(np.int64)
        pack = inst.canonical_pack.copy()
        jit_out = _decode_with(decode_days, inst, perm, pack)
        py_out = _decode_with(decode_days_py, inst, perm, pack)
        for a, b in zip(jit_out[:-1], py_out[:-1]):
            np.testing.assert_array_equal(a, b)
        assert jit_out[-1] == py_out[-1]


def test_jit_and_pure_score_agree(params):
    rng = np.random.default_rng(78)
    weights = FitnessWeights()
    rank_weight = weights.rank_weight_array()
    roster = make_roster(rng, 24, 5)
    inst = build_instance(roster, params)
    perm, pack = canonical_chromosome(inst)
    day_kind, _, _, meet_client, meet_visit, _ = decode_chromosome(inst, perm, pack)
    args = (
        inst.horizon,
        inst.window,
        inst.cap,
        day_kind,
        meet_client,
        meet_visit,
        inst.rank,
        inst.wants_two,
        rank_weight,
        weights.window_bonus,
        weights.travel_penalty,
        weights.idle_penalty,
    )
    assert score_days(*args) == score_days_py(*args)


def test_kernel_score_matches_object_fitness(params):
    rng = np.random.default_rng(79)
    weights = FitnessWeights()
    rank_weight = weights.rank_weight_array()
    for trial in range(15):
        roster = make_roster(rng, int(rng.integers(2, 35)), int(rng.integers(1, 8)))
        inst = build_instance(roster, params)
        perm = rng.permutation(inst.demand_cities).astype(np.int64)
        pack = inst.canonical_pack.copy()
        kernel_value, overflow = chromosome_score(
            inst, perm, pack, rank_weight,
            weights.window_bonus, weights.travel_penalty, weights.idle_penalty,
        )
        assert overflow == 0
        schedule = materialize_schedule(inst, perm, pack, "greedy", 0)
        assert kernel_value == fitness(schedule, roster, params, weights)


def test_dispatch_matches_env():
    import os

    disabled = any(
        os.environ.get(v, "") not in ("", "0")
        for v in ("VISITPLAN_PURE", "NUMBA_DISABLE_JIT")
    )
    if disabled:
        assert not JIT_ENABLED
        assert decode_days is decode_days_py
        assert score_days is score_days_py
    else:
        assert JIT_ENABLED
        assert decode_days is not decode_days_py
