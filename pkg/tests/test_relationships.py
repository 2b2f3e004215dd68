from collections import defaultdict
from datetime import timedelta
from itertools import combinations

import numpy as np
import pytest

from src.broker.channels import MessageBroker
from src.config.settings import CO_LOCATED, CO_TIMED, EngineSettings
from src.core.domain import ContextDomain
from src.core.errors import InvalidRelationError, RangeError
from src.ingestion import Normalizer
from src.management import RelationshipManager, colocated_pairs, cotimed_pairs, related_entities
from src.models.records import StateChangeEvent
from src.models.workloads import ElevatorConfig
from src.workloads import generate_elevator

from .conftest import T0


def _event(obj, attr, state, seconds):
    return StateChangeEvent(object_index=obj, attribute_name=attr, new_state_index=state,
                            timestamp=T0 + timedelta(seconds=seconds))


@pytest.fixture
def people(domain):
    return [domain.register_object("Person::Student", f"uri:p{i}") for i in range(4)]


def test_register_and_query(domain, people):
    manager = RelationshipManager(domain)
    event = manager.register_relation(people[0], people[1], "friend", 80)
    manager.register_relation(people[0], people[2], "colleague", 80)
    manager.register_relation(people[0], people[3], "friend", 30)
    assert event.kind == "registered"
    assert event.old_closeness == 0
    assert manager.related_entities(people[0]) == [(1, "friend", 80), (2, "colleague", 80), (3, "friend", 30)]
    assert related_entities(domain.relationships, people[0], 50) == [(1, "friend", 80), (2, "colleague", 80)]
    assert domain.relationship_types == ["friend", "colleague"]


def test_relations_are_directed(domain, people):
    manager = RelationshipManager(domain)
    manager.register_relation(people[0], people[1], "mentor", 70)
    assert domain.relationships.get(0, 1, "mentor") == 70
    assert domain.relationships.get(1, 0, "mentor") == 0
    assert domain.relationships.related_sources(1) == [0]
    assert domain.relationships.related_targets(1) == []


@pytest.mark.parametrize("closeness", [-1, 101, 50.5])
def test_closeness_range(domain, people, closeness):
    with pytest.raises(RangeError):
        RelationshipManager(domain).register_relation(people[0], people[1], "friend", closeness)


def test_self_relation_rejected(domain, people):
    manager = RelationshipManager(domain)
    with pytest.raises(InvalidRelationError):
        manager.register_relation(people[0], people[0], "friend", 50)
    with pytest.raises(InvalidRelationError):
        manager.set_closeness(people[0], people[0], "friend", 50)


def test_zero_closeness_disables(domain, people):
    manager = RelationshipManager(domain)
    manager.register_relation(people[0], people[1], "friend", 60)
    event = manager.set_closeness(people[0], people[1], "friend", 0)
    assert event.kind == "disabled"
    assert event.old_closeness == 60
    assert manager.related_entities(people[0]) == []
    assert len(domain.relationships) == 0
    assert domain.relationships.entries() == [(0, 1, 0, 0)]


def test_reinforce_creates_then_strengthens(domain, people):
    manager = RelationshipManager(domain)
    first = manager.reinforce(0, 1, CO_LOCATED, delta=10, initial=50)
    assert (first.kind, first.new_closeness) == ("identified", 50)
    for _ in range(10):
        last = manager.reinforce(0, 1, CO_LOCATED, delta=10, initial=50)
    assert last.kind == "updated"
    assert last.new_closeness == 100


def test_relation_events_published(domain, people):
    broker = MessageBroker()
    seen = []
    broker.subscribe("ctx/test/relation", lambda m: seen.append(m.payload))
    RelationshipManager(domain, broker=broker).register_relation(0, 1, "friend", 40)
    assert [e.key for e in seen] == [(0, 1, "friend")]


def test_colocation_needs_overlap_of_window(domain, people):
    for person in people:
        for value in ("Lab", "Cafe"):
            domain.register_state(person, "location", value)
    lab, cafe = 0, 1
    events = [
        _event(0, "location", lab, 0),
        _event(1, "location", lab, 100),
        _event(2, "location", lab, 350),
        _event(0, "location", cafe, 500),
        _event(1, "location", cafe, 520),
        _event(2, "location", cafe, 560),
        _event(3, "location", lab, 700),
    ]
    # 0 and 1 share the lab for 400 s, 2 overlaps them for at most 170 s and 3 arrives after everybody left
    assert colocated_pairs(domain, events, "location", 300) == [(0, 1)]


def test_cotiming_counts_hits():
    events = []
    for k in range(3):
        events.append(_event(0, "Action", 0, 100 * k))
        events.append(_event(1, "Action", 0, 100 * k + 5))
    events.append(_event(2, "Action", 0, 50))
    assert cotimed_pairs(events, delta_s=10, min_hits=3) == [(0, 1)]
    assert cotimed_pairs(events, delta_s=10, min_hits=4) == []


def test_identify_relations_is_symmetric(domain, people):
    settings = EngineSettings(colocation_window_s=60, cotiming_min_hits=1, cotiming_delta_s=1)
    manager = RelationshipManager(domain, settings)
    for person in people[:3]:
        domain.register_state(person, "location", "Lab")
    events = [_event(0, "location", 0, 0), _event(1, "location", 0, 30), _event(2, "location", 0, 500)]
    emitted = manager.identify_relations(events)
    assert {e.key for e in emitted} == {(0, 1, CO_LOCATED), (1, 0, CO_LOCATED)}
    assert domain.relationships.get(0, 1, CO_LOCATED) == settings.base_closeness
    assert manager.identify_relations([]) == []
    manager.identify_relations(events)
    assert domain.relationships.get(1, 0, CO_LOCATED) == settings.base_closeness + settings.strengthen_delta
    assert domain.relationships.get(0, 1, CO_TIMED) == 0


def test_seed_file(tmp_path, domain, people, caplog):
    seed = tmp_path / "relations.csv"
    seed.write_text(
        "# a, b, type, closeness\n"
        "uri:p0,uri:p1,friend,70\n"
        "uri:p1,uri:p9,friend,70\n"
        "uri:p2,uri:p3,friend\n"
        "uri:p2,uri:p3,friend,170\n",
        encoding="utf-8",
    )
    emitted = RelationshipManager(domain).load_seed_file(seed)
    assert [e.key for e in emitted] == [(0, 1, "friend")]
    assert sum("skipped" in r.getMessage() for r in caplog.records) == 3


def _elevator_trace(seed):
    domain = ContextDomain("trace")
    normalizer = Normalizer(domain)
    config = ElevatorConfig(person_count=10, record_count=400, seed=seed)
    events = [e for record in generate_elevator(config) for e in normalizer.normalize(record)]
    return domain, events


def _colocated_by_scan(domain, events, window_s):
    """Every pair of stays at the same place, compared directly."""
    end_of_window = max(e.timestamp for e in events)
    moves = defaultdict(list)
    for e in events:
        moves[e.object_index].append(e)
    stays = []
    for entity, seq in moves.items():
        seq.sort(key=lambda e: e.timestamp)
        for i, e in enumerate(seq):
            end = seq[i + 1].timestamp if i + 1 < len(seq) else end_of_window
            place = domain.objects[entity].attributes["location"].states[e.new_state_index].value
            stays.append((entity, place, e.timestamp, end))
    pairs = set()
    for (a, place_a, start_a, end_a), (b, place_b, start_b, end_b) in combinations(stays, 2):
        if a != b and place_a == place_b:
            if (min(end_a, end_b) - max(start_a, start_b)).total_seconds() >= window_s:
                pairs.add((min(a, b), max(a, b)))
    return pairs


def _cotimed_by_scan(events, delta_s, min_hits):
    hits = defaultdict(int)
    for first, second in combinations(events, 2):
        if first.object_index != second.object_index:
            if abs((first.timestamp - second.timestamp).total_seconds()) <= delta_s:
                hits[tuple(sorted((first.object_index, second.object_index)))] += 1
    return {pair for pair, n in hits.items() if n >= min_hits}


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_identification_matches_pairwise_scan(seed):
    domain, events = _elevator_trace(seed)
    assert len(domain) <= 50
    settings = EngineSettings(colocation_window_s=120, cotiming_delta_s=10, cotiming_min_hits=2)
    assert set(colocated_pairs(domain, events, "location", 120)) == _colocated_by_scan(domain, events, 120)
    assert set(cotimed_pairs(events, 10, 2)) == _cotimed_by_scan(events, 10, 2)

    RelationshipManager(domain, settings).identify_relations(events)
    for kind, expected in ((CO_LOCATED, _colocated_by_scan(domain, events, 120)),
                           (CO_TIMED, _cotimed_by_scan(events, 10, 2))):
        found = {(a, b) for a, b, t, c in domain.relationships.entries()
                 if domain.relationship_types[t] == kind and c > 0}
        assert found == expected | {(b, a) for a, b in expected}


def test_related_entities_match_full_scan():
    rng = np.random.default_rng(11)
    domain = ContextDomain("random")
    manager = RelationshipManager(domain)
    types = ["friend", "colleague", "family"]
    truth = {}
    for _ in range(400):
        a, b = (int(x) for x in rng.choice(50, size=2, replace=False))
        kind = types[int(rng.integers(len(types)))]
        closeness = int(rng.integers(0, 101))
        manager.register_relation(a, b, kind, closeness)
        truth[(a, b, kind)] = closeness
    for entity in range(50):
        for floor in (0, 1, 40, 90):
            expected = sorted(((b, kind, c) for (a, b, kind), c in truth.items()
                               if a == entity and c >= max(1, floor)),
                              key=lambda row: (-row[2], row[0], row[1]))
            assert manager.related_entities(entity, floor) == expected
            assert domain.relationships.related_targets(entity, floor) == sorted({b for b, _, _ in expected})
            sources = {a for (a, b, kind), c in truth.items() if b == entity and c >= max(1, floor)}
            assert domain.relationships.related_sources(entity, floor) == sorted(sources)
