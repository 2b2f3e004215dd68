"""Generator configuration models for the two synthetic systems."""

from typing import Dict, List, Tuple

from pydantic import BaseModel, Field, model_validator

DEFAULT_LOCATIONS: Tuple[str, ...] = ("Home", "GYM", "DINNINGHALL", "COFFEESHOP", "SEC")

RESTAURANT_ATTRIBUTES: Tuple[str, ...] = (
    "location", "Health", "BloodSugar", "Emotion", "Age", "Sex", "Activity",
)

ACTIVITY_LISTS: Dict[str, List[str]] = {
    "work activities": ["Meeting", "Coding", "Planning", "Presenting", "Researching"],
    "study activities": ["Reading", "Writing", "Lecturing", "Reviewing", "Discussing"],
    "dining activities": ["Eating", "Ordering", "Waiting", "Paying", "Talking"],
    "leisure activities": ["Shopping", "Browsing", "Chatting", "Resting", "Gaming"],
    "exercise activities": ["Walking", "Running", "Cycling", "Stretching", "Swimming"],
}


class ElevatorConfig(BaseModel):
    person_count: int = Field(50, ge=1)
    locations: Tuple[str, ...] = DEFAULT_LOCATIONS
    record_count: int = Field(1000, ge=0)
    seed: int = 7

    @model_validator(mode="after")
    def _need_two_locations(self):
        if len(self.locations) < 2:
            raise ValueError("at least two locations are needed to move between")
        if len(set(self.locations)) != len(self.locations):
            raise ValueError("location names must be unique")
        return self


class RestaurantConfig(BaseModel):
    student_count: int = Field(2000, ge=0)
    professor_count: int = Field(500, ge=0)
    store_count: int = Field(23, ge=1)
    restaurant_count: int = Field(10, ge=1)
    attributes: Tuple[str, ...] = RESTAURANT_ATTRIBUTES
    activity_lists: Dict[str, List[str]] = Field(default_factory=lambda: {k: list(v) for k, v in ACTIVITY_LISTS.items()})
    favorites_per_person: int = Field(4, ge=2)
    record_count: int = Field(100_000, ge=0)
    seed: int = 7

    @property
    def person_count(self) -> int:
        return self.student_count + self.professor_count

    @property
    def location_count(self) -> int:
        return self.store_count + self.restaurant_count

    @model_validator(mode="after")
    def _bounds(self):
        if self.person_count < 1:
            raise ValueError("at least one person is needed")
        if len(self.activity_lists) < 2 or any(not v for v in self.activity_lists.values()):
            raise ValueError("at least two non-empty activity lists are needed")
        if self.favorites_per_person > self.location_count:
            raise ValueError("more favorite locations than locations")
        if self.record_count and self.record_count < self.person_count * len(self.attributes):
            raise ValueError("record_count must cover one initial record per person and attribute")
        return self


# Named restaurant configurations. Two professor counts are in use next to
# 2000 students; both are kept.
RESTAURANT_PRESETS: Dict[str, dict] = {
    "full": {"student_count": 2000, "professor_count": 500},
    "compression": {"student_count": 2000, "professor_count": 100},
    "desk": {"student_count": 200, "professor_count": 50, "record_count": 40_000},
}
