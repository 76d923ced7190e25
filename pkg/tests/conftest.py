"""Shared roster builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from visitplan import Client, ScheduleParameters

CITY_POOL = [f"City{chr(ord('A') + i)}" for i in range(12)]
COUNTRY_POOL = ["NL", "DE", "BE", "SG", "CN", "US"]


def make_roster(rng: np.random.Generator, n_clients: int, n_cities: int) -> list[Client]:
    """Random ranked roster across up to ``n_cities`` cities."""
    cities = CITY_POOL[:n_cities]
    roster = []
    for i in range(n_clients):
        city = cities[int(rng.integers(0, len(cities)))]
        roster.append(
            Client(
                client_id=f"c{i:03d}",
                name=f"Client {i}",
                country=COUNTRY_POOL[int(rng.integers(0, len(COUNTRY_POOL)))],
                city=city,
                rank=int(rng.integers(1, 6)),
                teu=int(rng.integers(0, 700_000)),
            )
        )
    return roster


@pytest.fixture
def params() -> ScheduleParameters:
    return ScheduleParameters()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240911)
