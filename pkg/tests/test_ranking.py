import pytest
from hypothesis import given, strategies as st

from visitplan import (
    Client,
    Terminal,
    TierConfig,
    apply_manual_rank,
    calculate_client_rate,
    rate_from_teu,
    suggest_rank_update,
)
from visitplan.errors import OwnershipError, RankOutOfRangeError


def client(teu=0, rank=None, country="NL"):
    return Client("c1", "C1", country, "Rotterdam", rank=rank, teu=teu)


def test_rate_threshold_and_boundaries():
    assert rate_from_teu(600_000) == 1
    assert rate_from_teu(500_000) == 2  # rule is strictly greater than 500k
    assert rate_from_teu(500_001) == 1
    assert rate_from_teu(0) == 5


@given(st.integers(min_value=500_001, max_value=10**9))
def test_threshold_law_any_teu_above_500k_is_rank_1(teu):
    assert rate_from_teu(teu) == 1


@given(st.integers(min_value=0, max_value=10**7), st.integers(min_value=0, max_value=10**7))
def test_rate_monotone_in_teu(a, b):
    ra, rb = rate_from_teu(a), rate_from_teu(b)
    if a >= b:
        assert ra <= rb
    else:
        assert ra >= rb


def test_calculate_rate_sums_owned_terminals():
    c = client(teu=300_000)
    terms = [Terminal("t1", "T1", "c1", "Rotterdam", "NL", teu=250_000)]
    assert calculate_client_rate(c, terms) == 1  # 550k > 500k

    assert calculate_client_rate(client(teu=100), []) == 5

    # 0 + 150k + 150k = 300k sits in the 250,001..500,000 tier
    terms = [
        Terminal("t1", "T1", "c1", "Rotterdam", "NL", teu=150_000),
        Terminal("t2", "T2", "c1", "Rotterdam", "NL", teu=150_000),
    ]
    assert calculate_client_rate(client(teu=0), terms) == 2


def test_calculate_rate_rejects_foreign_terminal():
    c = client()
    terms = [Terminal("t1", "T1", "other", "Rotterdam", "NL", teu=1)]
    with pytest.raises(OwnershipError):
        calculate_client_rate(c, terms)


def test_tier_table_enumeration_matches_rate():
    # Derived directly from the default tier table.
    table = [(0, 5), (25_000, 5), (25_001, 4), (100_001, 3), (250_001, 2), (500_001, 1)]
    for teu, expected in table:
        assert rate_from_teu(teu) == expected


def test_tier_config_invariants():
    with pytest.raises(Exception):
        TierConfig(tiers=((400_000, 1), (0, 5)))  # top tier must be 500,001
    with pytest.raises(Exception):
        TierConfig(tiers=((500_001, 1), (600_000, 2), (0, 5)))  # floors must drop


def test_manual_rank():
    assert apply_manual_rank(client(rank=3), 1).rank == 1
    assert apply_manual_rank(client(rank=None), 5).rank == 5
    with pytest.raises(RankOutOfRangeError):
        apply_manual_rank(client(), 0)


def test_suggest_growth_and_threshold():
    c = client(teu=600_000, rank=1)
    s = suggest_rank_update(c, previous_teu=400_000, current_teu=600_000, interest_countries=set())
    assert s.suggested_rank == 1  # improvement floors at rank 1
    assert set(s.reasons) == {"teu_threshold", "teu_increase"}


def test_suggest_interest_country_bump():
    c = client(teu=300_000, rank=2, country="SG")
    s = suggest_rank_update(c, previous_teu=300_000, current_teu=300_000, interest_countries={"SG"})
    assert s.suggested_rank == 1
    assert set(s.reasons) == {"interest_country"}


def test_suggest_decrease_worsens_by_one():
    # 300k -> 200k is a 33% drop; base rank from the tier table is 3.
    c = client(teu=200_000, rank=3)
    s = suggest_rank_update(c, previous_teu=300_000, current_teu=200_000, interest_countries=set())
    assert rate_from_teu(200_000) == 3
    assert s.suggested_rank == 4
    assert set(s.reasons) == {"teu_decrease"}


def test_suggest_is_idempotent():
    c = client(teu=450_000, rank=4, country="DE")
    kwargs = dict(
        previous_teu=300_000, current_teu=450_000, interest_countries={"DE"},
    )
    first = suggest_rank_update(c, **kwargs)
    second = suggest_rank_update(c, **kwargs)
    assert first == second
    assert first.reasons  # suggested differs from current, so reasons non-empty


def test_reasons_nonempty_whenever_suggestion_differs():
    # Tier placement alone can move the rank; that must still carry a reason.
    c = client(teu=300_000, rank=5)
    s = suggest_rank_update(c, previous_teu=300_000, current_teu=300_000, interest_countries=set())
    assert s.suggested_rank == 2
    assert "teu_threshold" in s.reasons
