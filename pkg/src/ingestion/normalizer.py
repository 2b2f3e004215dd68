"""Turn parsed records into registrations and state-change events."""

import logging
import math
import re
from datetime import datetime
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from ..config.settings import EngineSettings
from ..core.domain import NOMINAL, ORDINAL, ContextDomain, split_category_path
from ..core.errors import ConfigError, FormatError
from ..models.identity import IdentityRecord
from ..models.records import ElevatorRecord, StateChangeEvent, TripleHR, TripleRDF
from ..privacy.coordinator import CoordinatorStore
from .parsers import ElevatorParser, RecordParser

logger = logging.getLogger(__name__)

HR_URI_PREFIX = "urn:csm:"
DEFAULT_CATEGORY = "Thing"
# condition predicates describing the subject itself rather than asserting a state
_DESCRIPTIVE = {"type", "name", "date"}
_URI = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:\S+$")

NewState = Tuple[int, str, int]


def discretize(value: str, width: float) -> str:
    """Bin a numeric state into ``"lo-hi"`` with bins of ``width``."""
    if width <= 0:
        raise ConfigError(f"bin width must be positive, got {width}")
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise FormatError(f"cannot bin non-numeric state {value!r}") from None
    low = math.floor(number / width) * width
    return f"{low:g}-{low + width:g}"


def hr_object_uri(category_path: str, object_name: str) -> str:
    return f"{HR_URI_PREFIX}{split_category_path(category_path)[0]}:{object_name}"


class Normalizer:
    """Registers unseen objects, attributes and states and emits one event per state change.

    An assertion equal to the attribute's current state emits nothing unless
    ``count_self_loops`` is set.
    """

    def __init__(self, domain: ContextDomain, settings: Optional[EngineSettings] = None,
                 coordinator: Optional[CoordinatorStore] = None):
        self.domain = domain
        self.settings = settings or EngineSettings()
        self.coordinator = coordinator
        self.suppressed = 0
        self._new_states: List[NewState] = []
        self._warned: Set[str] = set()

    def drain_new_states(self) -> List[NewState]:
        """States registered since the last call, as ``(object, attribute, state)``."""
        drained, self._new_states = self._new_states, []
        return drained

    def normalize(self, record: Union[TripleHR, TripleRDF, ElevatorRecord]) -> List[StateChangeEvent]:
        if isinstance(record, TripleHR):
            return self._normalize_hr(record)
        if isinstance(record, ElevatorRecord):
            return self._normalize_elevator(record)
        if isinstance(record, TripleRDF):
            return self._normalize_rdf(record)
        raise FormatError(f"cannot normalize {type(record).__name__}")

    # ------------------------------------------------------------------
    def _register(self, category_path: str, uri: str, name: Optional[str]) -> int:
        known = uri in self.domain.object_index
        index = self.domain.register_object(category_path, uri, name)
        if self.coordinator is not None and name and not (known and uri in self.coordinator):
            self.coordinator.put(IdentityRecord(uri=uri, name=name))
        return index

    def _assert(self, object_index: int, attribute_name: str, value: str, timestamp: datetime,
                conditions: Sequence[str] = ()) -> Optional[StateChangeEvent]:
        width = self.settings.bin_widths.get(attribute_name)
        if width:
            value = discretize(value, width)
        # binned numeric attributes have ordered states
        kind = ORDINAL if width else NOMINAL
        state_index, created = self.domain.register_state(object_index, attribute_name, value, kind)
        if created:
            self._new_states.append((object_index, attribute_name, state_index))
        attribute = self.domain.objects[object_index].attributes[attribute_name]
        if attribute.current_state_index == state_index and not self.settings.count_self_loops:
            self.suppressed += 1
            return None
        attribute.set_current(state_index)
        # fields come from the registries, so validation is skipped
        return StateChangeEvent.model_construct(object_index=object_index, attribute_name=attribute_name,
                                                new_state_index=state_index, timestamp=timestamp,
                                                conditions=tuple(conditions))

    def _check_complement(self, complement: Optional[str]) -> None:
        if not complement or not _URI.match(complement) or complement in self._warned:
            return
        if self.domain.find_object(complement) is None:
            self._warned.add(complement)
            logger.warning(f"unresolved cross-domain complement {complement} recorded verbatim")

    def _normalize_hr(self, triple: TripleHR) -> List[StateChangeEvent]:
        uri = hr_object_uri(triple.category_path, triple.object_name)
        index = self._register(triple.category_path, uri, triple.object_name)
        self._check_complement(triple.complement)
        event = self._assert(index, triple.attribute, triple.state_value, triple.timestamp, triple.conditions)
        return [event] if event else []

    def _normalize_rdf(self, triple: TripleRDF) -> List[StateChangeEvent]:
        described: Dict[str, Dict[str, str]] = {}
        for condition in triple.conditions:
            if condition.predicate in _DESCRIPTIVE:
                described.setdefault(condition.subject, {})[condition.predicate] = condition.object

        # objects described in the conditions are registered before the state names them
        for uri, facts in described.items():
            if uri != triple.subject and "type" in facts:
                self._register(facts["type"], uri, facts.get("name"))
        facts = described.get(triple.subject, {})
        subject = self._register(facts.get("type", DEFAULT_CATEGORY), triple.subject, facts.get("name"))
        if "date" not in facts:
            raise FormatError(f"record for {triple.subject} carries no date condition")
        timestamp = RecordParser.parse_timestamp(facts["date"])

        # other facts about the subject qualify the event instead of asserting states
        conditions = [f"decision={d}" for d in triple.decisions]
        conditions.extend(f"{c.predicate}={c.object}" for c in triple.conditions
                          if c.subject == triple.subject and c.predicate not in _DESCRIPTIVE)
        attribute = ElevatorParser.PREDICATE_ATTRIBUTES.get(triple.predicate, triple.predicate)
        event = self._assert(subject, attribute, triple.object, timestamp, conditions)
        return [event] if event else []

    def _normalize_elevator(self, record: ElevatorRecord) -> List[StateChangeEvent]:
        """Same result as normalizing ``ElevatorParser.to_triple_rdf(record)``, without building it."""
        self._register(f"Place::{record.location_type}", record.location_uri, record.location_name)
        subject = self._register(f"Person::{record.person_type}", ElevatorParser.PERSON_PREFIX + record.person_id,
                                 record.person_name)
        timestamp = RecordParser.parse_timestamp(record.date)
        attribute = ElevatorParser.PREDICATE_ATTRIBUTES.get(record.action_type, record.action_type)
        conditions = (f"decision={record.decision}", f"Action={record.action}")
        event = self._assert(subject, attribute, record.location_uri, timestamp, conditions)
        return [event] if event else []


def normalize(domain: ContextDomain, record: Union[TripleHR, TripleRDF, ElevatorRecord],
              settings: Optional[EngineSettings] = None) -> List[StateChangeEvent]:
    return Normalizer(domain, settings).normalize(record)
