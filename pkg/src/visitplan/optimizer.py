"""Genetic improvement over the greedy baseline.

Chromosomes are (city permutation, per-city packing order) pairs decoded
through the shared kernel, so every individual is feasible by construction.
Selection is tournament-based with elitism; the greedy baseline seeds the
initial population, which makes the final fitness never worse than greedy.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .domain import (
    DAY_IDLE,
    DAY_TRAVEL,
    DAY_VISITING,
    Client,
    DayPlan,
    Schedule,
    ScheduleParameters,
    validate_schedule,
)
from .errors import ConstraintViolationError, ValidationError, WindowOverflowError
from .instance import (
    build_instance,
    canonical_chromosome,
    chromosome_score,
    materialize_schedule,
    remaining_demand_groups,
    slot_position,
)
from .scheduler import city_priority_order

DEFAULT_RANK_WEIGHT = ((1, 16.0), (2, 8.0), (3, 4.0), (4, 2.0), (5, 1.0))


@dataclass(frozen=True)
class FitnessWeights:
    rank_weight: tuple[tuple[int, float], ...] = DEFAULT_RANK_WEIGHT
    window_bonus: float = 5.0
    travel_penalty: float = 1.0
    idle_penalty: float = 0.5  # per idle half-day

    def __post_init__(self):
        weights = dict(self.rank_weight)
        values = [weights.get(r, 0.0) for r in (1, 2, 3, 4, 5)]
        if any(v < 0 for v in values) or min(self.window_bonus, self.travel_penalty, self.idle_penalty) < 0:
            raise ValidationError("fitness weights must be >= 0", field="weights")
        if any(values[i] <= values[i + 1] for i in range(4)):
            raise ValidationError(
                "rank weights must strictly decrease from rank 1 to 5", field="rank_weight"
            )

    def rank_weight_array(self) -> np.ndarray:
        weights = dict(self.rank_weight)
        return np.array([0.0] + [weights.get(r, 0.0) for r in (1, 2, 3, 4, 5)])

    def to_dict(self) -> dict:
        return {
            "rank_weight": {str(r): w for r, w in self.rank_weight},
            "window_bonus": self.window_bonus,
            "travel_penalty": self.travel_penalty,
            "idle_penalty": self.idle_penalty,
        }

    @staticmethod
    def from_dict(d: dict) -> "FitnessWeights":
        kwargs = {}
        if "rank_weight" in d:
            kwargs["rank_weight"] = tuple(sorted((int(r), float(w)) for r, w in d["rank_weight"].items()))
        for key in ("window_bonus", "travel_penalty", "idle_penalty"):
            if key in d:
                kwargs[key] = float(d[key])
        return FitnessWeights(**kwargs)


@dataclass(frozen=True)
class GaParams:
    population_size: int = 50
    generations: int = 200
    tournament_size: int = 3
    crossover_rate: float = 0.9
    mutation_rate: float = 0.2
    elitism: int = 2
    seed: int = 0

    def __post_init__(self):
        if not (self.population_size >= self.elitism >= 1):
            raise ValidationError("population_size >= elitism >= 1 required", field="ga")
        if not (0 <= self.crossover_rate <= 1 and 0 <= self.mutation_rate <= 1):
            raise ValidationError("rates must be in [0, 1]", field="ga")
        if self.tournament_size < 1:
            raise ValidationError("tournament_size must be >= 1", field="ga")

    def to_dict(self) -> dict:
        return {
            "population_size": self.population_size,
            "generations": self.generations,
            "tournament_size": self.tournament_size,
            "crossover_rate": self.crossover_rate,
            "mutation_rate": self.mutation_rate,
            "elitism": self.elitism,
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(d: dict) -> "GaParams":
        allowed = {
            "population_size",
            "generations",
            "tournament_size",
            "crossover_rate",
            "mutation_rate",
            "elitism",
            "seed",
        }
        return GaParams(**{k: d[k] for k in d if k in allowed})


def fitness(
    schedule: Schedule,
    roster: list[Client],
    params: ScheduleParameters,
    weights: FitnessWeights = FitnessWeights(),
) -> float:
    """Score a materialized schedule; raises if any hard invariant fails.

    Mirrors the kernel scorer exactly: rank-weighted meeting value plus a
    bonus per twice-visited client whose first visit sits in the window,
    minus travel days and idle half-days.
    """
    clients_by_id = {c.client_id: c for c in roster}
    violations = validate_schedule(schedule, params, clients_by_id)
    if violations:
        detail = "; ".join(f"{v.entity_id}: {v.reason}" for v in violations[:5])
        raise ConstraintViolationError(f"schedule violates hard constraints: {detail}")

    rank_weight = weights.rank_weight_array()
    window = params.first_window_days
    cap = params.meetings_per_visiting_day
    total = 0.0
    travel_days = 0
    idle_days = 0
    free_slots = 0
    for day in schedule.days:
        if day.kind == DAY_TRAVEL:
            travel_days += 1
        elif day.kind == DAY_IDLE:
            idle_days += 1
        elif day.kind == DAY_VISITING:
            for meeting in sorted(day.meetings, key=lambda m: slot_position(m.slot, 0)):
                client = clients_by_id[meeting.client_id]
                total += rank_weight[client.rank]
                if (
                    meeting.visit_number == 1
                    and params.visits_for(client.rank) == 2
                    and day.day_index <= window
                ):
                    total += weights.window_bonus
            free_slots += cap - len(day.meetings)
    total -= weights.travel_penalty * travel_days
    total -= weights.idle_penalty * (2.0 * idle_days + free_slots)
    return total


def _order_crossover(rng: np.random.Generator, p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """Order crossover (OX): keep a slice of p1, fill the rest from p2."""
    m = p1.shape[0]
    a = int(rng.integers(0, m))
    b = int(rng.integers(0, m))
    lo, hi = (a, b) if a <= b else (b, a)
    child = np.full(m, -1, np.int64)
    child[lo : hi + 1] = p1[lo : hi + 1]
    used = set(int(x) for x in child[lo : hi + 1])
    fill = [int(x) for x in p2 if int(x) not in used]
    pos = 0
    for i in range(m):
        if child[i] < 0:
            child[i] = fill[pos]
            pos += 1
    return child


def evolve(
    roster: list[Client],
    params: ScheduleParameters,
    ledger=None,
    weights: FitnessWeights = FitnessWeights(),
    ga: GaParams = GaParams(),
    start_day: int = 1,
    frozen_prefix: tuple[DayPlan, ...] = (),
    city_order: list[str] | None = None,
    seed_city_orders: tuple = (),
    workers: int = 1,
    on_generation=None,
) -> Schedule:
    """Run the GA and return the best schedule found (never worse than the
    greedy baseline). Deterministic for a fixed ``ga.seed`` regardless of
    ``workers``. ``on_generation(gen, best_fitness)`` is called after each
    generation's evaluation when given."""
    inst = build_instance(roster, params, ledger, start_day, frozen_prefix)
    if city_order is None:
        city_order = city_priority_order(remaining_demand_groups(inst))
    rank_weight = weights.rank_weight_array()

    def score(chrom) -> float:
        value, overflow = chromosome_score(
            inst,
            chrom[0],
            chrom[1],
            rank_weight,
            weights.window_bonus,
            weights.travel_penalty,
            weights.idle_penalty,
        )
        return float("-inf") if overflow else value

    cache: dict[tuple[bytes, bytes], float] = {}
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    def evaluate(pop: list) -> list[float]:
        missing = [c for c in pop if (c[0].tobytes(), c[1].tobytes()) not in cache]
        if missing:
            values = list(pool.map(score, missing)) if pool else [score(c) for c in missing]
            for chrom, value in zip(missing, values):
                cache[(chrom[0].tobytes(), chrom[1].tobytes())] = value
        return [cache[(c[0].tobytes(), c[1].tobytes())] for c in pop]

    try:
        greedy = canonical_chromosome(inst, city_order)
        greedy_fit = score(greedy)
        if greedy_fit == float("-inf"):
            overflow = chromosome_score(
                inst, greedy[0], greedy[1], rank_weight,
                weights.window_bonus, weights.travel_penalty, weights.idle_penalty,
            )[1]
            raise WindowOverflowError(
                f"{overflow} mandated first visits cannot fit the first window",
                overflow=overflow,
            )
        cache[(greedy[0].tobytes(), greedy[1].tobytes())] = greedy_fit

        rng = np.random.default_rng(ga.seed)
        m = int(inst.demand_cities.shape[0])

        def random_chromosome():
            perm = rng.permutation(inst.demand_cities).astype(np.int64)
            pack = inst.canonical_pack.copy()
            for ci in inst.demand_cities:
                lo, hi = int(inst.pack_off[ci]), int(inst.pack_off[ci + 1])
                if hi - lo > 1:
                    pack[lo:hi] = pack[lo:hi][rng.permutation(hi - lo)]
            return (perm, pack)

        population = [greedy]
        for order in seed_city_orders:
            if len(population) >= ga.population_size:
                break
            population.append(canonical_chromosome(inst, list(order)))
        while len(population) < ga.population_size:
            population.append(random_chromosome())
        fits = evaluate(population)

        best_fit = fits[0]
        best = greedy
        for chrom, f in zip(population, fits):
            if f > best_fit:
                best_fit, best = f, chrom

        mutable_cities = [
            int(ci)
            for ci in inst.demand_cities
            if int(inst.pack_off[ci + 1]) - int(inst.pack_off[ci]) > 1
        ]

        for gen in range(ga.generations):
            ranked = sorted(range(len(population)), key=lambda i: (-fits[i], i))
            next_pop = [population[i] for i in ranked[: ga.elitism]]

            def tournament():
                picks = rng.integers(0, len(population), size=ga.tournament_size)
                winner = int(picks[0])
                for raw in picks[1:]:
                    i = int(raw)
                    if fits[i] > fits[winner]:
                        winner = i
                return population[winner]

            while len(next_pop) < ga.population_size:
                p1 = tournament()
                p2 = tournament()
                if m > 1 and rng.random() < ga.crossover_rate:
                    child_perm = _order_crossover(rng, p1[0], p2[0])
                else:
                    child_perm = p1[0].copy()
                child_pack = p1[1].copy()
                if mutable_cities and rng.random() < ga.mutation_rate:
                    ci = mutable_cities[int(rng.integers(0, len(mutable_cities)))]
                    lo, hi = int(inst.pack_off[ci]), int(inst.pack_off[ci + 1])
                    a = lo + int(rng.integers(0, hi - lo))
                    b = lo + int(rng.integers(0, hi - lo))
                    child_pack[a], child_pack[b] = child_pack[b], child_pack[a]
                next_pop.append((child_perm, child_pack))

            population = next_pop
            fits = evaluate(population)
            for chrom, f in zip(population, fits):
                if f > best_fit:
                    best_fit, best = f, chrom
            if on_generation is not None:
                on_generation(gen, best_fit)
    finally:
        if pool:
            pool.shutdown()

    return materialize_schedule(inst, best[0], best[1], generator="ga", seed=ga.seed)
