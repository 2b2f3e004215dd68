"""Engine settings and constants."""

from typing import Dict, Tuple

from pydantic import BaseModel, Field, ValidationError, model_validator

from ..core.errors import ConfigError

# Model file format
FORMAT_VERSION = 1
META_FORMAT = "csm-meta"
CASM_FORMAT = "casm"

# Broker topic kinds, "ctx/<domain>/<kind>"
TOPIC_KINDS = ("update", "hierarchy", "relation", "transition", "trigger", "mapping", "model")

# Relation type names produced by the engine itself
CO_LOCATED = "co-located"
CO_TIMED = "co-timed"
HIERARCHY_AFFINITY = "hierarchy-affinity"

# DEFLATE baseline: raw stream, level 6
DEFLATE_LEVEL = 6

# Reference run of the compression experiment (KB)
REFERENCE_COMPRESSION_KB = {
    "input_kb": 55669,
    "meta_kb": 5951,
    "casm_kb": 1512,
    "raw_ratio_pct": 13.41,
    "input_deflated_kb": 1186,
    "meta_deflated_kb": 346,
    "casm_deflated_kb": 239,
    "deflated_ratio_pct": 49.33,
}

# Reference phase timings at 100k IntellElevator items (ms)
REFERENCE_TIMINGS_100K_MS = {"conversion": 1436, "casm": 361, "cssm": 704}


class EngineSettings(BaseModel):
    """Every tunable of the engine, with the defaults used by the CLI."""

    transition_steps: int = Field(1, ge=1, le=8, description="R")
    hierarchy_depth: int = Field(2, ge=1, le=16, description="H")

    location_attribute: str = "location"
    colocation_window_s: float = Field(300.0, gt=0)
    cotiming_delta_s: float = Field(10.0, gt=0)
    cotiming_min_hits: int = Field(3, ge=1)
    strengthen_delta: int = Field(10, ge=0, le=100)
    base_closeness: int = Field(50, ge=1, le=100)
    hierarchy_bonus: int = Field(20, ge=0, le=100)

    situation_threshold: int = Field(50, ge=0, le=100)
    focus_attribute: str = "location"
    tracked_attributes: Tuple[str, ...] = ("location", "Action")

    count_self_loops: bool = False
    rdf_condition_depth: int = Field(3, ge=1)
    bin_widths: Dict[str, float] = Field(default_factory=dict)

    broker_log_limit: int = Field(10_000, ge=0)
    prediction_threshold: float = Field(0.5, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _focus_is_tracked(self):
        if self.focus_attribute not in self.tracked_attributes:
            self.tracked_attributes = (self.focus_attribute,) + tuple(self.tracked_attributes)
        return self

    @classmethod
    def build(cls, **overrides) -> "EngineSettings":
        """Create settings, dropping ``None`` overrides and raising ConfigError on bad values."""
        values = {k: v for k, v in overrides.items() if v is not None}
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(str(e)) from e
