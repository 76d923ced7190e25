"""Decision-support engine for planning ranked client visits over a fixed
working-day horizon: greedy baseline, genetic optimizer, confirmation-driven
regeneration, rank suggestions and a case memory of past schedules."""

from .casebook import Case, CaseBase, CaseDescriptor, retain, retrieve, reuse, revise
from .confirmation import (
    ConfirmationLedger,
    LedgerRecord,
    record_response,
    regenerate_from,
    reorder_unconfirmed,
)
from .config import EngineConfig, load_config
from .domain import (
    Client,
    DayPlan,
    Meeting,
    Schedule,
    ScheduleParameters,
    ScheduleStats,
    Terminal,
    Visitor,
    validate_roster,
    validate_schedule,
)
from .optimizer import FitnessWeights, GaParams, evolve, fitness
from .ranking import (
    RankSuggestion,
    TierConfig,
    apply_manual_rank,
    calculate_client_rate,
    rate_from_teu,
    suggest_rank_update,
)
from .scheduler import (
    budget_check,
    city_priority_order,
    fill_odd_slot,
    generate_greedy_schedule,
    group_clients_by_city,
    required_visiting_days,
)
from .store import Engine, EngineState, load_snapshot, parse_roster_files, save_snapshot

__version__ = "0.1.0"

__all__ = [
    "Case",
    "CaseBase",
    "CaseDescriptor",
    "Client",
    "ConfirmationLedger",
    "DayPlan",
    "Engine",
    "EngineConfig",
    "EngineState",
    "FitnessWeights",
    "GaParams",
    "LedgerRecord",
    "Meeting",
    "RankSuggestion",
    "Schedule",
    "ScheduleParameters",
    "ScheduleStats",
    "Terminal",
    "TierConfig",
    "Visitor",
    "apply_manual_rank",
    "budget_check",
    "calculate_client_rate",
    "city_priority_order",
    "evolve",
    "fill_odd_slot",
    "fitness",
    "generate_greedy_schedule",
    "group_clients_by_city",
    "load_config",
    "load_snapshot",
    "parse_roster_files",
    "rate_from_teu",
    "record_response",
    "regenerate_from",
    "reorder_unconfirmed",
    "required_visiting_days",
    "retain",
    "retrieve",
    "reuse",
    "revise",
    "save_snapshot",
    "suggest_rank_update",
    "validate_roster",
    "validate_schedule",
]
