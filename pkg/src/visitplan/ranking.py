"""Client rating: TEU tier lookup, combined client+terminal rating, and
rank-update suggestions driven by TEU variation and country interest."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .domain import Client, Terminal, VALID_RANKS
from .errors import OwnershipError, RankOutOfRangeError, ValidationError

# Only the top boundary (teu > 500,000 means rank 1) is a fixed business
# rule; the lower tiers are overridable configuration defaults.
DEFAULT_TIERS = ((500_001, 1), (250_001, 2), (100_001, 3), (25_001, 4), (0, 5))

REASON_TEU_THRESHOLD = "teu_threshold"
REASON_TEU_INCREASE = "teu_increase"
REASON_TEU_DECREASE = "teu_decrease"
REASON_INTEREST_COUNTRY = "interest_country"


@dataclass(frozen=True)
class TierConfig:
    tiers: tuple[tuple[int, int], ...] = DEFAULT_TIERS  # (teu_floor, rank), best first

    def __post_init__(self):
        if not self.tiers:
            raise ValidationError("tier table must not be empty", field="tiers")
        if self.tiers[0] != (500_001, 1):
            raise ValidationError(
                "topmost tier must be (500001, 1) so teu > 500,000 maps to rank 1",
                field="tiers",
            )
        if self.tiers[-1][0] != 0:
            raise ValidationError("lowest tier floor must be 0", field="tiers")
        prev_floor = None
        prev_rank = None
        for floor, rank in self.tiers:
            if rank not in VALID_RANKS:
                raise ValidationError(f"tier rank {rank} out of range 1..5", field="tiers")
            if prev_floor is not None and floor >= prev_floor:
                raise ValidationError("tier floors must strictly decrease", field="tiers")
            if prev_rank is not None and rank <= prev_rank:
                raise ValidationError("tier ranks must worsen as floors drop", field="tiers")
            prev_floor, prev_rank = floor, rank

    def to_dict(self) -> dict:
        return {"tiers": [list(t) for t in self.tiers]}

    @staticmethod
    def from_dict(d: dict) -> "TierConfig":
        return TierConfig(tiers=tuple((int(f), int(r)) for f, r in d["tiers"]))


@dataclass(frozen=True)
class RankSuggestion:
    client_id: str
    current_rank: int | None
    suggested_rank: int
    reasons: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "client_id": self.client_id,
            "current_rank": self.current_rank,
            "suggested_rank": self.suggested_rank,
            "reasons": list(self.reasons),
        }


def rate_from_teu(total_teu: int, tiers: TierConfig = TierConfig()) -> int:
    """Rank of the first tier whose floor covers the TEU total."""
    if total_teu < 0:
        raise ValidationError("teu must be >= 0", field="teu")
    for floor, rank in tiers.tiers:
        if total_teu >= floor:
            return rank
    return tiers.tiers[-1][1]


def calculate_client_rate(
    client: Client, terminals: list[Terminal], tiers: TierConfig = TierConfig()
) -> int:
    """Rate a client on its own TEU plus all owned-terminal TEU."""
    for t in terminals:
        if t.owner_client_id != client.client_id:
            raise OwnershipError(
                f"terminal {t.terminal_id} is not owned by {client.client_id}"
            )
    total = client.teu + sum(t.teu for t in terminals)
    return rate_from_teu(total, tiers)


def apply_manual_rank(client: Client, rank: int) -> Client:
    if rank not in VALID_RANKS:
        raise RankOutOfRangeError(f"rank {rank} out of range 1..5", field="rank")
    return replace(client, rank=rank)


def suggest_rank_update(
    client: Client,
    previous_teu: int,
    current_teu: int,
    interest_countries: set[str] | frozenset[str],
    tiers: TierConfig = TierConfig(),
    variation_threshold_pct: float = 20.0,
    terminals: list[Terminal] = (),
) -> RankSuggestion:
    """Suggest a rank from the tier table, nudged one step per fired rule:
    TEU growth/shrink beyond the threshold, and visitor country interest."""
    if previous_teu < 0:
        raise ValidationError("previous_teu must be >= 0", field="previous_teu")
    total = current_teu + sum(t.teu for t in terminals if t.owner_client_id == client.client_id)
    base = rate_from_teu(total, tiers)
    reasons: list[str] = []
    if total > 500_000 or base != client.rank:
        reasons.append(REASON_TEU_THRESHOLD)

    suggested = base
    if previous_teu > 0:
        change_pct = (current_teu - previous_teu) / previous_teu * 100.0
    else:
        change_pct = 100.0 if current_teu > 0 else 0.0
    if change_pct >= variation_threshold_pct:
        suggested = max(1, suggested - 1)
        reasons.append(REASON_TEU_INCREASE)
    elif -change_pct >= variation_threshold_pct:
        suggested = min(5, suggested + 1)
        reasons.append(REASON_TEU_DECREASE)

    if client.country in interest_countries:
        suggested = max(1, suggested - 1)
        reasons.append(REASON_INTEREST_COUNTRY)

    return RankSuggestion(
        client_id=client.client_id,
        current_rank=client.rank,
        suggested_rank=suggested,
        reasons=tuple(reasons),
    )
