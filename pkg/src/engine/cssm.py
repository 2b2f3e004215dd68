"""Context Situation State Machines.

A situation combines an entity's focus-attribute state and last transition
with the tracked attributes' states and last transitions of the entities it
relates to. Situations are indexed per owner and counted in a transition
tensor exactly like attribute states.
"""

from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, Iterable, List, NamedTuple, Optional, Protocol, Sequence, Tuple

from ..core.domain import ContextDomain
from ..core.errors import FormatError, NotFoundError
from ..models.records import StateChangeEvent
from .tensor import Path, TransitionTensor

StateReading = Tuple[int, Optional[Tuple[int, int]]]


class SituationPart(NamedTuple):
    object_index: int
    attribute_name: str
    state_index: int
    last_transition: Optional[Tuple[int, int]]

    def fields(self) -> List[str]:
        start, end = self.last_transition if self.last_transition else (-1, -1)
        return [str(self.object_index), self.attribute_name, str(self.state_index), str(start), str(end)]


def _encode(fields: Iterable[str]) -> str:
    return "".join(f"{len(f)}:{f}" for f in fields)


def _decode(text: str) -> List[str]:
    fields, pos = [], 0
    while pos < len(text):
        colon = text.find(":", pos)
        if colon < 0:
            raise FormatError(f"bad situation encoding at offset {pos}")
        size = int(text[pos:colon])
        fields.append(text[colon + 1:colon + 1 + size])
        pos = colon + 1 + size
    return fields


def _part(fields: Sequence[str]) -> SituationPart:
    obj, attr, state, start, end = fields
    transition = None if start == "-1" else (int(start), int(end))
    return SituationPart(int(obj), attr, int(state), transition)


@dataclass(frozen=True)
class SituationState:
    focus: SituationPart
    context_parts: Tuple[SituationPart, ...] = ()

    def canonical(self) -> str:
        """Length-prefixed serialization; equal situations give equal strings."""
        fields = self.focus.fields() + [str(len(self.context_parts))]
        for part in self.context_parts:
            fields.extend(part.fields())
        return _encode(fields)

    @classmethod
    def from_canonical(cls, text: str) -> "SituationState":
        fields = _decode(text)
        if len(fields) < 6 or (len(fields) - 6) % 5:
            raise FormatError(f"bad situation encoding {text!r}")
        focus = _part(fields[:5])
        n = int(fields[5])
        parts = tuple(_part(fields[6 + 5 * i:11 + 5 * i]) for i in range(n))
        return cls(focus, parts)


class StateView(Protocol):
    def state_of(self, object_index: int, attribute_name: str) -> Optional[StateReading]:
        ...


class DomainView:
    """Live view: the domain's current states."""

    def __init__(self, domain: ContextDomain):
        self.domain = domain

    def state_of(self, object_index: int, attribute_name: str) -> Optional[StateReading]:
        attribute = self.domain.objects[object_index].attributes.get(attribute_name)
        if attribute is None or attribute.current_state_index is None:
            return None
        return attribute.current_state_index, attribute.last_transition


class ReplayView:
    """States as of the last applied event.

    Batch builds replay a finished event list through it; streaming ingestion
    applies each event as it is handled, so both see the same states.
    """

    def __init__(self):
        self._states: Dict[Tuple[int, str], StateReading] = {}

    @classmethod
    def of_domain(cls, domain: ContextDomain) -> "ReplayView":
        """Start from the domain's current states (e.g. a loaded model)."""
        view = cls()
        for obj, attribute in domain.iter_attributes():
            if attribute.current_state_index is not None:
                view._states[(obj.object_index, attribute.name)] = (attribute.current_state_index,
                                                                    attribute.last_transition)
        return view

    def apply(self, event: StateChangeEvent) -> None:
        key = (event.object_index, event.attribute_name)
        previous = self._states.get(key)
        transition = (previous[0], event.new_state_index) if previous else None
        self._states[key] = (event.new_state_index, transition)

    def state_of(self, object_index: int, attribute_name: str) -> Optional[StateReading]:
        return self._states.get((object_index, attribute_name))


def extract_situation(domain: ContextDomain, object_index: int, attribute_name: str, *,
                      min_closeness: int = 50, tracked_attributes: Sequence[str] = ("location", "Action"),
                      view: Optional[StateView] = None) -> SituationState:
    obj = domain.get_object(object_index)
    obj.get_attribute(attribute_name)
    view = view or DomainView(domain)
    reading = view.state_of(object_index, attribute_name)
    state, transition = reading if reading else (-1, None)
    focus = SituationPart(object_index, attribute_name, state, transition)

    parts = []
    for other in domain.relationships.related_targets(object_index, min_closeness):
        attributes = domain.objects[other].attributes
        for name in tracked_attributes:
            if name not in attributes:
                continue
            other_reading = view.state_of(other, name)
            if other_reading is not None:
                parts.append(SituationPart(other, name, other_reading[0], other_reading[1]))
    parts.sort(key=lambda p: (p.object_index, p.attribute_name))
    return SituationState(focus, tuple(parts))


class SituationRegistry:
    """Canonical serialization <-> dense situation index."""

    def __init__(self, situations: Iterable[str] = ()):
        self._index: Dict[str, int] = {}
        self.situations: List[str] = []
        for canonical in situations:
            self.register(canonical)

    def __len__(self) -> int:
        return len(self.situations)

    def register(self, canonical: str) -> Tuple[int, bool]:
        index = self._index.get(canonical)
        if index is not None:
            return index, False
        index = len(self.situations)
        self.situations.append(canonical)
        self._index[canonical] = index
        return index, True

    def index_of(self, canonical: str) -> int:
        try:
            return self._index[canonical]
        except KeyError:
            raise NotFoundError("unknown situation") from None

    def situation(self, index: int) -> SituationState:
        if index < 0 or index >= len(self.situations):
            raise NotFoundError(f"no situation with index {index}")
        return SituationState.from_canonical(self.situations[index])


class CSSM:
    def __init__(self, owner: int, focus_attribute: str, transition_steps: int):
        self.owner = owner
        self.focus_attribute = focus_attribute
        self.registry = SituationRegistry()
        self.tensor = TransitionTensor(transition_steps + 1)
        self.history: Deque[int] = deque(maxlen=transition_steps)

    @property
    def last_index(self) -> Optional[int]:
        return self.history[-1] if self.history else None

    def record_situation_event(self, situation: SituationState) -> Tuple[int, Optional[Path]]:
        """Index the situation (registering it when new) and count the completed path."""
        return self._record(situation.canonical())

    def _record(self, canonical: str) -> Tuple[int, Optional[Path]]:
        index, created = self.registry.register(canonical)
        if created:
            self.tensor.grow_dimension(index)
        path = None
        if len(self.history) == self.history.maxlen:
            path = tuple(self.history) + (index,)
            self.tensor.increment(path)
        self.history.append(index)
        return index, path

    def observe(self, situation: SituationState) -> Optional[Tuple[int, Optional[Path]]]:
        """Record only when the situation differs from the last one."""
        canonical = situation.canonical()
        last = self.last_index
        if last is not None and self.registry.situations[last] == canonical:
            return None
        return self._record(canonical)


def record_situation_event(cssm: CSSM, situation: SituationState) -> CSSM:
    cssm.record_situation_event(situation)
    return cssm
