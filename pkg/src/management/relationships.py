"""Relationship management: directed, typed closeness matrix between entities.

Relations are registered (seed files, human input), identified (co-location,
co-timing), updated, and disabled by setting their closeness to 0.
"""

import csv
import logging
from collections import defaultdict
from datetime import datetime
from pathlib import Path
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from ..config.settings import CO_LOCATED, CO_TIMED, EngineSettings
from ..core.errors import InvalidRelationError, NotFoundError, RangeError
from ..models.events import RelationEvent
from ..models.records import StateChangeEvent

if TYPE_CHECKING:
    from ..broker.channels import MessageBroker
    from ..core.domain import ContextDomain

logger = logging.getLogger(__name__)

MAX_CLOSENESS = 100


def _check_closeness(value: int) -> int:
    if not isinstance(value, int) or value < 0 or value > MAX_CLOSENESS:
        raise RangeError(f"closeness must be an integer in 0..100, got {value!r}")
    return value


class RelationshipMatrix:
    """Sparse (entity_a, entity_b, relation_type) -> closeness store.

    A closeness of 0 marks a disabled relation; queries skip it.
    """

    def __init__(self):
        self.relation_type_names: List[str] = []
        self._type_index: Dict[str, int] = {}
        self.closeness: Dict[Tuple[int, int, int], int] = {}
        self._outgoing: Dict[int, Dict[Tuple[int, int], int]] = defaultdict(dict)
        self._incoming: Dict[int, Dict[Tuple[int, int], int]] = defaultdict(dict)

    def __len__(self) -> int:
        return sum(1 for c in self.closeness.values() if c > 0)

    def type_index(self, name: str, create: bool = True) -> Optional[int]:
        index = self._type_index.get(name)
        if index is None and create:
            index = len(self.relation_type_names)
            self.relation_type_names.append(name)
            self._type_index[name] = index
        return index

    def get(self, a: int, b: int, type_name: str) -> int:
        t = self._type_index.get(type_name)
        if t is None:
            return 0
        return self.closeness.get((a, b, t), 0)

    def set(self, a: int, b: int, type_name: str, value: int) -> int:
        """Store a closeness and return the previous one."""
        _check_closeness(value)
        t = self.type_index(type_name)
        old = self.closeness.get((a, b, t), 0)
        self.closeness[(a, b, t)] = value
        self._outgoing[a][(b, t)] = value
        self._incoming[b][(a, t)] = value
        return old

    def related_entities(self, entity: int, min_closeness: int = 1) -> List[Tuple[int, str, int]]:
        """Active outgoing relations, closest first, ties by lower entity index."""
        floor = max(1, min_closeness)
        rows = [
            (b, self.relation_type_names[t], c)
            for (b, t), c in self._outgoing.get(entity, {}).items()
            if c >= floor
        ]
        rows.sort(key=lambda r: (-r[2], r[0], r[1]))
        return rows

    def related_targets(self, entity: int, min_closeness: int = 1) -> List[int]:
        """Distinct entities ``entity`` relates to, in index order."""
        floor = max(1, min_closeness)
        return sorted({b for (b, _), c in self._outgoing.get(entity, {}).items() if c >= floor})

    def related_sources(self, entity: int, min_closeness: int = 1) -> List[int]:
        """Distinct entities relating to ``entity``, in index order."""
        floor = max(1, min_closeness)
        return sorted({a for (a, _), c in self._incoming.get(entity, {}).items() if c >= floor})

    def entries(self) -> List[Tuple[int, int, int, int]]:
        """All stored entries, disabled ones included, in key order."""
        return sorted((a, b, t, c) for (a, b, t), c in self.closeness.items())


class RelationshipManager:
    """Registers, identifies, updates and disables relations of a domain."""

    def __init__(self, domain: "ContextDomain", settings: Optional[EngineSettings] = None,
                 broker: Optional["MessageBroker"] = None):
        self.domain = domain
        self.matrix = domain.relationships
        self.settings = settings or EngineSettings()
        self.broker = broker

    def _emit(self, event: RelationEvent) -> RelationEvent:
        if self.broker is not None:
            self.broker.publish(self.broker.topic_name(self.domain.domain_id, "relation"), event)
        return event

    def register_relation(self, a: int, b: int, type_name: str, closeness: int) -> RelationEvent:
        if a == b:
            raise InvalidRelationError(f"entity {a} cannot relate to itself")
        _check_closeness(closeness)
        if not type_name:
            raise InvalidRelationError("empty relation type")
        old = self.matrix.set(a, b, type_name, closeness)
        logger.debug(f"registered relation {a} -> {b} ({type_name}) = {closeness}")
        return self._emit(RelationEvent(kind="registered", entity_a=a, entity_b=b, relation_type=type_name,
                                        old_closeness=old, new_closeness=closeness))

    def set_closeness(self, a: int, b: int, type_name: str, closeness: int) -> RelationEvent:
        """Update a relation; 0 disables it."""
        if a == b:
            raise InvalidRelationError(f"entity {a} cannot relate to itself")
        old = self.matrix.set(a, b, type_name, _check_closeness(closeness))
        kind = "disabled" if closeness == 0 else "updated"
        return self._emit(RelationEvent(kind=kind, entity_a=a, entity_b=b, relation_type=type_name,
                                        old_closeness=old, new_closeness=closeness))

    def reinforce(self, a: int, b: int, type_name: str, delta: int, initial: int) -> RelationEvent:
        """Create the relation at ``initial`` or strengthen it by ``delta``, capped at 100."""
        old = self.matrix.get(a, b, type_name)
        if old == 0:
            new, kind = min(MAX_CLOSENESS, initial), "identified"
        else:
            new, kind = min(MAX_CLOSENESS, old + delta), "updated"
        self.matrix.set(a, b, type_name, new)
        return self._emit(RelationEvent(kind=kind, entity_a=a, entity_b=b, relation_type=type_name,
                                        old_closeness=old, new_closeness=new))

    def related_entities(self, entity: int, min_closeness: int = 1) -> List[Tuple[int, str, int]]:
        return self.matrix.related_entities(entity, min_closeness)

    # ------------------------------------------------------------------
    # identification through correlations
    # ------------------------------------------------------------------
    def identify_relations(self, events: Sequence[StateChangeEvent]) -> List[RelationEvent]:
        """Create or strengthen "co-located" and "co-timed" relations from an event window."""
        if not events:
            return []
        s = self.settings
        emitted: List[RelationEvent] = []
        for a, b in colocated_pairs(self.domain, events, s.location_attribute, s.colocation_window_s):
            emitted.append(self.reinforce(a, b, CO_LOCATED, s.strengthen_delta, s.base_closeness))
            emitted.append(self.reinforce(b, a, CO_LOCATED, s.strengthen_delta, s.base_closeness))
        for a, b in cotimed_pairs(events, s.cotiming_delta_s, s.cotiming_min_hits):
            emitted.append(self.reinforce(a, b, CO_TIMED, s.strengthen_delta, s.base_closeness))
            emitted.append(self.reinforce(b, a, CO_TIMED, s.strengthen_delta, s.base_closeness))
        logger.info(f"identified {len(emitted)} relation updates from {len(events)} events")
        return emitted

    # ------------------------------------------------------------------
    # seed file: a_uri, b_uri, type, closeness
    # ------------------------------------------------------------------
    def load_seed_file(self, path: Path, delimiter: str = ",") -> List[RelationEvent]:
        emitted = []
        with open(path, newline="", encoding="utf-8") as fh:
            for line_no, row in enumerate(csv.reader(fh, delimiter=delimiter), start=1):
                if not row or row[0].startswith("#"):
                    continue
                if len(row) != 4:
                    logger.warning(f"relation seed line {line_no} skipped: expected 4 fields, got {len(row)}")
                    continue
                a_uri, b_uri, type_name, closeness = (f.strip() for f in row)
                try:
                    a = self.domain.object_index.resolve_index(a_uri)
                    b = self.domain.object_index.resolve_index(b_uri)
                    emitted.append(self.register_relation(a, b, type_name, int(closeness)))
                except (NotFoundError, ValueError) as e:
                    logger.warning(f"relation seed line {line_no} skipped: {e}")
        logger.info(f"loaded {len(emitted)} seed relations from {path}")
        return emitted


def _location_value(domain: "ContextDomain", event: StateChangeEvent) -> str:
    attribute = domain.objects[event.object_index].attributes[event.attribute_name]
    return attribute.states[event.new_state_index].value


def location_intervals(domain: "ContextDomain", events: Sequence[StateChangeEvent],
                       location_attribute: str) -> Dict[str, List[Tuple[datetime, datetime, int]]]:
    """Per location value, the (start, end, entity) stays seen in the window.

    A stay lasts until the entity's next location event; the last one lasts
    until the end of the window.
    """
    window_end = max(e.timestamp for e in events)
    per_entity: Dict[int, List[StateChangeEvent]] = defaultdict(list)
    for e in events:
        if e.attribute_name == location_attribute:
            per_entity[e.object_index].append(e)
    stays: Dict[str, List[Tuple[datetime, datetime, int]]] = defaultdict(list)
    for entity, moves in per_entity.items():
        moves.sort(key=lambda e: e.timestamp)
        for current, nxt in zip(moves, moves[1:] + [None]):
            end = nxt.timestamp if nxt is not None else window_end
            stays[_location_value(domain, current)].append((current.timestamp, end, entity))
    return stays


def colocated_pairs(domain: "ContextDomain", events: Sequence[StateChangeEvent],
                    location_attribute: str, window_s: float) -> List[Tuple[int, int]]:
    """Unordered entity pairs that shared a location for at least ``window_s`` seconds."""
    pairs: Set[Tuple[int, int]] = set()
    for stays in location_intervals(domain, events, location_attribute).values():
        stays.sort()
        active: List[Tuple[datetime, datetime, int]] = []
        for start, end, entity in stays:
            # a stay ending less than W after this start cannot overlap any later stay by W
            active = [s for s in active if (s[1] - start).total_seconds() >= window_s]
            for _, other_end, other in active:
                if other != entity and (min(end, other_end) - start).total_seconds() >= window_s:
                    pairs.add((min(entity, other), max(entity, other)))
            active.append((start, end, entity))
    return sorted(pairs)


def cotimed_pairs(events: Iterable[StateChangeEvent], delta_s: float, min_hits: int) -> List[Tuple[int, int]]:
    """Unordered entity pairs with at least ``min_hits`` state changes within ``delta_s`` of each other."""
    ordered = sorted(events, key=lambda e: e.timestamp)
    hits: Dict[Tuple[int, int], int] = defaultdict(int)
    for i, first in enumerate(ordered):
        for second in ordered[i + 1:]:
            if (second.timestamp - first.timestamp).total_seconds() > delta_s:
                break
            if second.object_index != first.object_index:
                a, b = sorted((first.object_index, second.object_index))
                hits[(a, b)] += 1
    return sorted(pair for pair, n in hits.items() if n >= min_hits)


def related_entities(matrix: RelationshipMatrix, entity: int, min_closeness: int = 1) -> List[Tuple[int, str, int]]:
    return matrix.related_entities(entity, min_closeness)
