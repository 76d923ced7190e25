"""Engine configuration file: tier table, fitness weights, GA parameters,
variation threshold and snapshot retention, all JSON with full defaults."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .domain import ScheduleParameters
from .errors import FormatError
from .optimizer import FitnessWeights, GaParams
from .ranking import TierConfig


@dataclass(frozen=True)
class EngineConfig:
    schedule: ScheduleParameters = field(default_factory=ScheduleParameters)
    tiers: TierConfig = field(default_factory=TierConfig)
    weights: FitnessWeights = field(default_factory=FitnessWeights)
    ga: GaParams = field(default_factory=GaParams)
    variation_threshold_pct: float = 20.0
    snapshot_retention: int = 50

    def to_dict(self) -> dict:
        return {
            "schedule": self.schedule.to_dict(),
            "tiers": self.tiers.to_dict()["tiers"],
            "fitness_weights": self.weights.to_dict(),
            "ga": self.ga.to_dict(),
            "variation_threshold_pct": self.variation_threshold_pct,
            "snapshot_retention": self.snapshot_retention,
        }

    @staticmethod
    def from_dict(d: dict) -> "EngineConfig":
        kwargs = {}
        if "schedule" in d:
            kwargs["schedule"] = ScheduleParameters.from_dict(d["schedule"])
        if "tiers" in d:
            kwargs["tiers"] = TierConfig.from_dict({"tiers": d["tiers"]})
        if "fitness_weights" in d:
            kwargs["weights"] = FitnessWeights.from_dict(d["fitness_weights"])
        if "ga" in d:
            kwargs["ga"] = GaParams.from_dict(d["ga"])
        if "variation_threshold_pct" in d:
            kwargs["variation_threshold_pct"] = float(d["variation_threshold_pct"])
        if "snapshot_retention" in d:
            kwargs["snapshot_retention"] = int(d["snapshot_retention"])
        return EngineConfig(**kwargs)


def load_config(path: str | Path | None) -> EngineConfig:
    if path is None:
        return EngineConfig()
    raw = Path(path).read_text()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise FormatError(f"config file is not valid JSON: {e}") from e
    return EngineConfig.from_dict(data)
