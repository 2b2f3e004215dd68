"""Data models module."""

from .records import ElevatorRecord, StateChangeEvent, TripleHR, TripleRDF
from .events import RelationEvent, ThresholdRule
from .identity import IdentityRecord
from .reports import CompressionReport, PhaseTimings
from .workloads import (
    ACTIVITY_LISTS,
    DEFAULT_LOCATIONS,
    RESTAURANT_ATTRIBUTES,
    RESTAURANT_PRESETS,
    ElevatorConfig,
    RestaurantConfig,
)
