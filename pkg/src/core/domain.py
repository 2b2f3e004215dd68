"""Ontology-state data model: domain, categories, objects, attributes, states."""

import logging
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime
from typing import Deque, Dict, Iterator, List, Optional, Tuple

from .errors import ConfigError, FormatError, NotFoundError
from .mapping import ObjectURIMapping

logger = logging.getLogger(__name__)

NOMINAL = "nominal"
ORDINAL = "ordinal"
CATEGORY_SEPARATOR = "::"


def split_category_path(category_path: str) -> List[str]:
    """Split ``"Person::Student"`` into ``["Person", "Student"]``."""
    if not category_path or not category_path.strip():
        raise FormatError("empty category path")
    segments = [s.strip() for s in category_path.split(CATEGORY_SEPARATOR)]
    if any(not s for s in segments):
        raise FormatError(f"empty segment in category path {category_path!r}")
    return segments


@dataclass
class ContextAttributeState:
    state_index: int
    value: str
    referenced_object: Optional[int] = None
    # True when the value matched the referenced object's name rather than its URI
    ref_by_name: bool = False
    # the value names the owning object itself; stored as a reference, never a hierarchy link
    self_reference: bool = False

    def mark_reference(self, owner: int, target: int, by_name: bool) -> None:
        if target == owner:
            self.self_reference = True
        else:
            self.referenced_object = target
        self.ref_by_name = by_name


class ContextAttribute:
    """An attribute of a context object with its registered states.

    ``history`` holds the previous R states (oldest first) that feed the
    attribute's transition tensor.
    """

    def __init__(self, name: str, history_size: int, kind: str = NOMINAL):
        self.name = name
        self.kind = kind
        self.states: List[ContextAttributeState] = []
        self._by_value: Dict[str, int] = {}
        self.current_state_index: Optional[int] = None
        self.previous_state_index: Optional[int] = None
        self.history: Deque[Tuple[int, Optional[datetime]]] = deque(maxlen=history_size)
        self.casm = None

    def __len__(self) -> int:
        return len(self.states)

    def lookup(self, value: str) -> Optional[int]:
        return self._by_value.get(value)

    def register_state(self, value: str) -> int:
        """Idempotent; new values get the next dense local index."""
        if value is None or not str(value).strip():
            raise FormatError(f"empty state value for attribute {self.name!r}")
        index = self._by_value.get(value)
        if index is None:
            index = len(self.states)
            self.states.append(ContextAttributeState(index, value))
            self._by_value[value] = index
        return index

    def state(self, state_index: int) -> ContextAttributeState:
        if state_index < 0 or state_index >= len(self.states):
            raise NotFoundError(f"attribute {self.name!r} has no state {state_index}")
        return self.states[state_index]

    def state_index_of(self, value: str) -> int:
        index = self._by_value.get(value)
        if index is None:
            raise NotFoundError(f"attribute {self.name!r} has no state {value!r}")
        return index

    def set_current(self, state_index: int) -> None:
        self.state(state_index)
        self.previous_state_index = self.current_state_index
        self.current_state_index = state_index

    @property
    def last_transition(self) -> Optional[Tuple[int, int]]:
        if self.previous_state_index is None or self.current_state_index is None:
            return None
        return self.previous_state_index, self.current_state_index

    def history_states(self) -> Tuple[int, ...]:
        return tuple(s for s, _ in self.history)


@dataclass
class ContextObject:
    object_index: int
    uri: str
    category: str
    labels: List[str] = field(default_factory=list)
    name: Optional[str] = None
    attributes: Dict[str, ContextAttribute] = field(default_factory=dict)

    def get_attribute(self, name: str) -> ContextAttribute:
        try:
            return self.attributes[name]
        except KeyError:
            raise NotFoundError(f"object {self.object_index} has no attribute {name!r}") from None


@dataclass
class ContextCategory:
    name: str
    objects: Dict[int, ContextObject] = field(default_factory=dict)


class ContextDomain:
    """Root container: categories, objects, the index mapping, relations and the H/R hyperparameters.

    A domain has a single writer; share it between threads only as a snapshot.
    """

    def __init__(self, domain_id: str, hierarchy_depth: int = 2, transition_steps: int = 1):
        if transition_steps < 1:
            raise ConfigError(f"transition steps R must be >= 1, got {transition_steps}")
        if hierarchy_depth < 1:
            raise ConfigError(f"hierarchy depth H must be >= 1, got {hierarchy_depth}")
        from ..management.relationships import RelationshipMatrix

        self.domain_id = domain_id
        self.hierarchy_depth = hierarchy_depth
        self.transition_steps = transition_steps
        self.categories: Dict[str, ContextCategory] = {}
        self.object_index = ObjectURIMapping()
        self.objects: List[ContextObject] = []
        self.relationships = RelationshipMatrix()
        self.cssms: Dict[int, object] = {}
        self._names: Dict[str, int] = {}
        self._states_by_value: Dict[str, List[Tuple[int, ContextAttributeState]]] = {}

    # ------------------------------------------------------------------
    # registration
    # ------------------------------------------------------------------
    @property
    def relationship_types(self) -> List[str]:
        return list(self.relationships.relation_type_names)

    def register_object(self, category_path: str, uri: str, name: Optional[str] = None) -> int:
        """Idempotent on ``uri``; returns the object's dense index."""
        if uri in self.object_index:
            index = self.object_index.resolve_index(uri)
            obj = self.objects[index]
            if name and obj.name is None:
                obj.name = name
                self._remember_name(name, index)
            return index
        segments = split_category_path(category_path)
        if not uri or not uri.strip():
            raise FormatError("empty object uri")
        index, _ = self.object_index.register(uri)

        category = self.categories.get(segments[0])
        if category is None:
            category = self.categories[segments[0]] = ContextCategory(segments[0])
        obj = ContextObject(index, uri, segments[0], segments[1:], name)
        self.objects.append(obj)
        category.objects[index] = obj
        if name:
            self._remember_name(name, index)
        self._backfill_references(uri, index)
        logger.debug(f"registered object {index} in category {segments[0]}")
        return index

    def _remember_name(self, name: str, index: int) -> None:
        if name not in self._names:
            self._names[name] = index
            self._backfill_references(name, index)

    def _backfill_references(self, token: str, index: int) -> None:
        for owner, state in self._states_by_value.get(token, ()):
            if state.referenced_object is None and not state.self_reference:
                state.mark_reference(owner, index, token not in self.object_index)

    def ensure_attribute(self, object_index: int, name: str, kind: Optional[str] = None) -> Tuple[ContextAttribute, bool]:
        obj = self.get_object(object_index)
        attribute = obj.attributes.get(name)
        if attribute is not None:
            return attribute, False
        if not name or not name.strip():
            raise FormatError("empty attribute name")
        attribute = ContextAttribute(name, self.transition_steps, kind or NOMINAL)
        obj.attributes[name] = attribute
        return attribute, True

    def register_state(self, object_index: int, attribute_name: str, value: str,
                       kind: Optional[str] = None) -> Tuple[int, bool]:
        """Register ``value`` on the object's attribute; returns ``(state_index, created)``.

        ``kind`` only applies when the attribute is created here.
        """
        attribute, _ = self.ensure_attribute(object_index, attribute_name, kind)
        before = len(attribute.states)
        state_index = attribute.register_state(value)
        created = len(attribute.states) > before
        if created:
            state = attribute.states[state_index]
            self._states_by_value.setdefault(value, []).append((object_index, state))
            target = self.find_object(value)
            if target is not None:
                state.mark_reference(object_index, target, value not in self.object_index)
        return state_index, created

    def reset_states(self, object_index: int, attribute_name: str) -> ContextAttribute:
        """Empty an attribute's state registry so it can be rebuilt at another granularity."""
        attribute = self.get_object(object_index).get_attribute(attribute_name)
        for state in attribute.states:
            owners = self._states_by_value.get(state.value, [])
            owners[:] = [(o, s) for o, s in owners if s is not state]
        attribute.states = []
        attribute._by_value = {}
        return attribute

    # ------------------------------------------------------------------
    # lookup
    # ------------------------------------------------------------------
    def get_object(self, object_index: int) -> ContextObject:
        if object_index < 0 or object_index >= len(self.objects):
            raise NotFoundError(f"no object with index {object_index}")
        return self.objects[object_index]

    def find_object(self, token: str) -> Optional[int]:
        """Exact match on a registered URI, then on a registered object name."""
        if token in self.object_index:
            return self.object_index.resolve_index(token)
        return self._names.get(token)

    def iter_attributes(self) -> Iterator[Tuple[ContextObject, ContextAttribute]]:
        for obj in self.objects:
            for attribute in obj.attributes.values():
                yield obj, attribute

    def __len__(self) -> int:
        return len(self.objects)


def register_object(domain: ContextDomain, category_path: str, uri: str, name: Optional[str] = None) -> int:
    return domain.register_object(category_path, uri, name)


def register_state(attribute: ContextAttribute, value: str) -> int:
    return attribute.register_state(value)
