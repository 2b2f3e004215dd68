"""IntellElevator generator: people moving between campus buildings."""

import logging
from datetime import datetime, timedelta
from pathlib import Path
from typing import Iterator, List, TextIO, Tuple

import numpy as np

from ..models.records import ElevatorRecord
from ..models.workloads import ElevatorConfig

logger = logging.getLogger(__name__)

BASE_TIME = datetime(2023, 1, 2, 8, 0, 0)
MAX_STEP_S = 30
LOCATION_PREFIX = "urn:intellelevator:location:"
ACTION_PREFIX = "urn:intellelevator:action:"
MOVE = "MoveTo"

PERSON_TYPES = ("Student", "Professor", "Staff")
FIRST_NAMES = ("Avery", "Blake", "Casey", "Devon", "Emery", "Finley", "Harper", "Jordan", "Kendall", "Logan")
LAST_NAMES = ("Adler", "Brooks", "Carver", "Dalton", "Ellison", "Fowler", "Garrison", "Holt", "Irving", "Jensen")
DECISIONS = ("UseElevator", "UseStairs", "NoLift")
ACTIONS = ("Walking", "Riding", "Waiting", "Carrying")
# kept free of substrings of the default location names
LOCATION_TYPES = {"Home": "Residence", "GYM": "Gym", "DINNINGHALL": "Dining", "COFFEESHOP": "Cafe", "SEC": "Academic"}


def _people(config: ElevatorConfig, rng: np.random.Generator) -> List[Tuple[str, str, str]]:
    first = rng.integers(len(FIRST_NAMES), size=config.person_count)
    last = rng.integers(len(LAST_NAMES), size=config.person_count)
    kind = rng.integers(len(PERSON_TYPES), size=config.person_count)
    return [
        (f"P{i:04d}", f"{FIRST_NAMES[first[i]]} {LAST_NAMES[last[i]]}", PERSON_TYPES[kind[i]])
        for i in range(config.person_count)
    ]


def generate_elevator(config: ElevatorConfig) -> Iterator[ElevatorRecord]:
    """Seeded stream of ``record_count`` records.

    The first ``person_count`` records place every person in a random
    building; each later record moves a uniformly chosen person to one of the
    other buildings, uniformly. The clock advances 1..30 s per record.
    """
    rng = np.random.default_rng(config.seed)
    people = _people(config, rng)
    locations = config.locations
    n_loc = len(locations)
    n = config.record_count

    who = rng.integers(config.person_count, size=n)
    step = rng.integers(1, n_loc, size=n)
    born = rng.integers(n_loc, size=n)
    seconds = rng.integers(1, MAX_STEP_S + 1, size=n)
    decision = rng.integers(len(DECISIONS), size=n)
    action = rng.integers(len(ACTIONS), size=n)

    current = [-1] * config.person_count
    clock = BASE_TIME
    for i in range(n):
        if i < config.person_count:
            person = i
            where = int(born[i])
        else:
            person = int(who[i])
            where = (current[person] + int(step[i])) % n_loc
        current[person] = where
        clock += timedelta(seconds=int(seconds[i]))
        person_id, name, kind = people[person]
        place = locations[where]
        yield ElevatorRecord(
            index=i,
            person_id=person_id,
            person_name=name,
            person_type=kind,
            date=clock.strftime("%Y-%m-%d %H:%M:%S"),
            decision=DECISIONS[decision[i]],
            action=ACTIONS[action[i]],
            action_uri=ACTION_PREFIX + MOVE,
            action_type=MOVE,
            location_uri=LOCATION_PREFIX + place,
            location_name=place,
            location_type=LOCATION_TYPES.get(place, "Building"),
        )


def write_elevator(config: ElevatorConfig, out: TextIO) -> int:
    count = 0
    for record in generate_elevator(config):
        out.write(record.to_line())
        out.write("\n")
        count += 1
    return count


def write_elevator_file(config: ElevatorConfig, path: Path) -> int:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        count = write_elevator(config, fh)
    logger.info(f"Wrote {count} IntellElevator records to {path}")
    return count
