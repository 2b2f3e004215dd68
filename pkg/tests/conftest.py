import sys
from datetime import datetime, timedelta
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.config.settings import EngineSettings  # noqa: E402
from src.core.domain import ContextDomain  # noqa: E402
from src.engine.casm import casm_for  # noqa: E402
from src.models.records import StateChangeEvent  # noqa: E402
from src.models.workloads import ElevatorConfig, RestaurantConfig  # noqa: E402
from src.workloads.elevator import write_elevator_file  # noqa: E402
from src.workloads.restaurant import write_restaurant_file  # noqa: E402

T0 = datetime(2023, 1, 2, 8, 0, 0)


def feed_trace(domain: ContextDomain, object_index: int, attribute: str, values, start: datetime = T0,
               step_s: int = 10):
    """Assert ``values`` one after another on an attribute and run them through its CASM."""
    events = []
    for i, value in enumerate(values):
        state, _ = domain.register_state(object_index, attribute, value)
        domain.objects[object_index].attributes[attribute].set_current(state)
        event = StateChangeEvent(object_index=object_index, attribute_name=attribute, new_state_index=state,
                                 timestamp=start + timedelta(seconds=step_s * i))
        casm_for(domain, object_index, attribute).record_event(event)
        events.append(event)
    return events


@pytest.fixture
def settings():
    return EngineSettings()


@pytest.fixture
def domain():
    return ContextDomain("test", hierarchy_depth=2, transition_steps=1)


@pytest.fixture
def campus_domain():
    """Person001 -> Building001 -> LAB001, LAB001.owner = Person001."""
    d = ContextDomain("campus", hierarchy_depth=2, transition_steps=1)
    person = d.register_object("Person::Student", "uri:person001", "Person001")
    building = d.register_object("Place::Building", "uri:building001", "Building001")
    lab = d.register_object("Place::Lab", "uri:lab001", "LAB001")
    d.register_state(person, "location", "Building001")
    d.register_state(building, "rooms", "LAB001")
    d.register_state(lab, "owner", "Person001")
    return d, person, building, lab


@pytest.fixture
def elevator_file(tmp_path):
    path = tmp_path / "elevator.txt"
    write_elevator_file(ElevatorConfig(person_count=20, record_count=1000, seed=3), path)
    return path


@pytest.fixture
def restaurant_file(tmp_path):
    path = tmp_path / "restaurant.txt"
    config = RestaurantConfig(student_count=20, professor_count=5, record_count=2000, seed=3)
    write_restaurant_file(config, path)
    return path
