"""IntellRestaurant generator: students and professors with seven context attributes."""

import logging
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path
from typing import Dict, Iterator, List, TextIO

import numpy as np
from pydantic import ValidationError

from ..core.errors import ConfigError
from ..ingestion.parsers import TripleHRParser
from ..models.records import TripleHR
from ..models.workloads import RESTAURANT_PRESETS, RestaurantConfig

logger = logging.getLogger(__name__)

BASE_TIME = datetime(2023, 1, 2, 8, 0, 0)
MAX_STEP_S = 30

HEALTH = ("Healthy", "Sick", "Recovering", "Tired")
EMOTIONS = ("Happy", "Calm", "Stressed", "Bored", "Excited")
SEXES = ("F", "M")
SOURCES = {
    "location": "GPS", "Health": "Wearable", "BloodSugar": "Glucometer", "Emotion": "Camera",
    "Age": "Registry", "Sex": "Registry", "Activity": "Calendar",
}
# relative frequency of each attribute after the initial block
WEIGHTS = {
    "location": 0.35, "Activity": 0.25, "Emotion": 0.15, "BloodSugar": 0.12,
    "Health": 0.08, "Age": 0.025, "Sex": 0.025,
}
BIRTHDAY_CHANCE = 0.01


def location_names(config: RestaurantConfig) -> List[str]:
    stores = [f"Store-{i + 1:02d}" for i in range(config.store_count)]
    restaurants = [f"Restaurant-{i + 1:02d}" for i in range(config.restaurant_count)]
    return stores + restaurants


@dataclass
class _Person:
    category: str
    name: str
    favorites: List[int]
    primary: List[str]
    secondary: List[str]
    age: int
    sex: str


def _people(config: RestaurantConfig, rng: np.random.Generator) -> List[_Person]:
    n_loc = config.location_count
    lists = list(config.activity_lists.values())
    people = []
    for i in range(config.person_count):
        student = i < config.student_count
        category = "Person::Student" if student else "Person::Professor"
        name = f"Student-{i + 1:04d}" if student else f"Professor-{i - config.student_count + 1:04d}"
        first = i % n_loc
        others = [int(x) for x in rng.permutation(n_loc) if x != first][:config.favorites_per_person - 1]
        # professors work; students draw their primary list from the rest
        primary = 0 if not student else 1 + int(rng.integers(len(lists) - 1))
        secondary = int(rng.integers(len(lists)))
        if secondary == primary:
            secondary = (secondary + 1) % len(lists)
        age = int(rng.integers(18, 31)) if student else int(rng.integers(30, 71))
        people.append(_Person(category, name, [first] + others, lists[primary], lists[secondary],
                              age, SEXES[int(rng.integers(2))]))
    return people


def _value(person: _Person, attribute: str, rng: np.random.Generator, locations: List[str]) -> str:
    if attribute == "location":
        return locations[person.favorites[int(rng.integers(len(person.favorites)))]]
    if attribute == "Activity":
        # the primary list is picked twice as often as the secondary one
        pool = person.primary if rng.random() < 2 / 3 else person.secondary
        return pool[int(rng.integers(len(pool)))]
    if attribute == "Health":
        return HEALTH[int(rng.integers(len(HEALTH)))]
    if attribute == "Emotion":
        return EMOTIONS[int(rng.integers(len(EMOTIONS)))]
    if attribute == "BloodSugar":
        return str(int(rng.integers(14, 37)) * 5)
    if attribute == "Age":
        if rng.random() < BIRTHDAY_CHANCE:
            person.age += 1
        return str(person.age)
    if attribute == "Sex":
        return person.sex
    return f"{attribute}-{int(rng.integers(5))}"


def generate_restaurant(config: RestaurantConfig) -> Iterator[TripleHR]:
    """Seeded stream of ``record_count`` Triple-H-R records.

    First one record per person and attribute (initial location = the
    person's first favorite), then attributes picked by ``WEIGHTS`` for
    uniformly chosen persons. Locations come from each person's favorites,
    activities from a primary and a secondary activity list.
    """
    rng = np.random.default_rng(config.seed)
    people = _people(config, rng)
    locations = location_names(config)
    attributes = list(config.attributes)
    weights = np.array([WEIGHTS.get(a, 0.1) for a in attributes], dtype=float)
    weights /= weights.sum()

    initial = config.person_count * len(attributes) if config.record_count else 0
    rest = config.record_count - initial
    seconds = rng.integers(1, MAX_STEP_S + 1, size=config.record_count)
    picked_person = rng.integers(len(people), size=rest)
    picked_attribute = rng.choice(len(attributes), size=rest, p=weights)

    clock = BASE_TIME
    for i in range(config.record_count):
        clock += timedelta(seconds=int(seconds[i]))
        if i < initial:
            person = people[i // len(attributes)]
            attribute = attributes[i % len(attributes)]
            value = locations[person.favorites[0]] if attribute == "location" else _value(person, attribute, rng, locations)
        else:
            person = people[int(picked_person[i - initial])]
            attribute = attributes[int(picked_attribute[i - initial])]
            value = _value(person, attribute, rng, locations)
        yield TripleHR(
            category_path=person.category,
            object_name=person.name,
            attribute=attribute,
            state_value=value,
            conditions=[f"Timestamp={clock.strftime('%Y-%m-%d %H:%M:%S')}"],
            sources=[SOURCES.get(attribute, "Sensor")],
            timestamp=clock,
        )


def write_restaurant(config: RestaurantConfig, out: TextIO) -> int:
    count = 0
    for triple in generate_restaurant(config):
        out.write(TripleHRParser.format_line(triple))
        out.write("\n")
        count += 1
    return count


def write_restaurant_file(config: RestaurantConfig, path: Path) -> int:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        count = write_restaurant(config, fh)
    logger.info(f"Wrote {count} IntellRestaurant records to {path}")
    return count


def restaurant_config(preset: str = "full", **overrides) -> RestaurantConfig:
    """A preset configuration with field overrides; ``None`` overrides are ignored."""
    if preset not in RESTAURANT_PRESETS:
        raise ConfigError(f"unknown restaurant preset {preset!r}; choose from {', '.join(RESTAURANT_PRESETS)}")
    values: Dict = {**RESTAURANT_PRESETS[preset], **{k: v for k, v in overrides.items() if v is not None}}
    try:
        return RestaurantConfig(**values)
    except ValidationError as e:
        raise ConfigError(str(e)) from e
