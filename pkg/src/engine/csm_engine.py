"""CSM engine: wires normalization, CASM/CSSM building, hierarchy, relations and the broker.

Records can be fed one at a time (``ingest``) or in three batch phases
(``convert``, ``build_casms``, ``build_cssms``) that the build pipeline times
separately. Both routes give the same tensors for the same input.
"""

import logging
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from ..broker.channels import MessageBroker, Subscription
from ..broker.thresholds import ThresholdMonitor
from ..config.settings import EngineSettings
from ..core.domain import ContextDomain
from ..core.errors import NotFoundError
from ..ingestion.normalizer import Normalizer
from ..management.hierarchy import HierarchyLink, HierarchyManager
from ..management.relationships import RelationshipManager
from ..models.events import RelationEvent, ThresholdRule
from ..models.records import ElevatorRecord, StateChangeEvent, TripleHR, TripleRDF
from ..privacy.coordinator import CoordinatorStore
from .casm import CASM, casm_for
from .cssm import CSSM, ReplayView, StateView, extract_situation
from .prediction import ReasoningFunction
from .tensor import Path

logger = logging.getLogger(__name__)

Record = Union[TripleHR, TripleRDF, ElevatorRecord]


class CSMEngine:
    def __init__(self, domain: Optional[ContextDomain] = None, settings: Optional[EngineSettings] = None,
                 broker: Optional[MessageBroker] = None, coordinator: Optional[CoordinatorStore] = None,
                 domain_id: str = "default"):
        self.settings = settings or EngineSettings()
        s = self.settings
        self.domain = domain or ContextDomain(domain_id, s.hierarchy_depth, s.transition_steps)
        self.broker = broker or MessageBroker(s.broker_log_limit)
        self.coordinator = coordinator if coordinator is not None else CoordinatorStore()
        self.normalizer = Normalizer(self.domain, s, self.coordinator)
        self.relations = RelationshipManager(self.domain, s, self.broker)
        self.hierarchy = HierarchyManager(self.domain, self.relations, s, self.broker)
        self.thresholds = ThresholdMonitor(self.broker)
        self.reasoning = ReasoningFunction(threshold=s.prediction_threshold)
        self.events: List[StateChangeEvent] = []
        self._topics = {kind: self.broker.topic_name(self.domain.domain_id, kind)
                        for kind in ("update", "transition")}
        self._transitions = self.broker.channel(self._topics["transition"])
        self._live: Optional[ReplayView] = None

    # ------------------------------------------------------------------
    # streaming
    # ------------------------------------------------------------------
    def ingest(self, record: Record) -> List[StateChangeEvent]:
        """Normalize one record and push its events through every machine.

        Situations see the states as of each event, the same way
        ``build_cssms`` replays them.
        """
        if self._live is None:
            self._live = ReplayView.of_domain(self.domain)
        events = self.normalizer.normalize(record)
        self._link_new_states()
        for event in events:
            self.events.append(event)
            self.broker.publish(self._topics["update"], event)
            self._record_casm(event)
            self._live.apply(event)
            self._record_situations(event, self._live)
        return events

    def ingest_all(self, records: Iterable[Record]) -> int:
        return sum(len(self.ingest(r)) for r in records)

    # ------------------------------------------------------------------
    # batch phases
    # ------------------------------------------------------------------
    def convert(self, records: Iterable[Record]) -> List[StateChangeEvent]:
        """Normalize records into events without touching the state machines."""
        events: List[StateChangeEvent] = []
        for record in records:
            events.extend(self.normalizer.normalize(record))
        self._link_new_states()
        self.events.extend(events)
        logger.info(f"converted records into {len(events)} events "
                    f"({self.normalizer.suppressed} unchanged assertions suppressed)")
        return events

    def build_casms(self, events: Sequence[StateChangeEvent]) -> int:
        for event in events:
            self._record_casm(event)
        return len(events)

    def build_cssms(self, events: Sequence[StateChangeEvent]) -> int:
        """Replay events against the relations as they stand now."""
        view = ReplayView()
        for event in events:
            view.apply(event)
            self._record_situations(event, view)
        return len(self.domain.cssms)

    # ------------------------------------------------------------------
    # relations and hierarchy
    # ------------------------------------------------------------------
    def identify_relations(self, events: Optional[Sequence[StateChangeEvent]] = None) -> List[RelationEvent]:
        return self.relations.identify_relations(self.events if events is None else events)

    def mine_hierarchy(self) -> List[RelationEvent]:
        self.hierarchy.identify_all()
        return self.hierarchy.mine()

    def _link_new_states(self) -> List[HierarchyLink]:
        links = []
        for object_index, attribute_name, state_index in self.normalizer.drain_new_states():
            link = self.hierarchy.identify(object_index, attribute_name, state_index)
            if link is not None:
                links.append(link)
        return links

    # ------------------------------------------------------------------
    # machines
    # ------------------------------------------------------------------
    def _transition(self, machine: str, object_index: int, attribute_name: Optional[str], path: Path,
                    count: int) -> None:
        # payloads are only built for listeners
        if self._transitions.has_subscribers:
            self._transitions.publish({
                "machine": machine, "object_index": object_index, "attribute_name": attribute_name,
                "path": list(path), "count": count,
            })
        if len(self.thresholds):
            self.thresholds.evaluate(machine, object_index, attribute_name, path, count)

    def _record_casm(self, event: StateChangeEvent) -> None:
        casm = casm_for(self.domain, event.object_index, event.attribute_name)
        path = casm.record_event(event)
        if path is not None:
            self._transition("casm", event.object_index, event.attribute_name, path, casm.tensor.count(path))

    def _record_situations(self, event: StateChangeEvent, view: StateView) -> None:
        s = self.settings
        if event.attribute_name not in s.tracked_attributes:
            return
        owners = self.domain.relationships.related_sources(event.object_index, s.situation_threshold or 1)
        if event.attribute_name == s.focus_attribute:
            owners = [event.object_index] + owners
        for owner in owners:
            if s.focus_attribute not in self.domain.objects[owner].attributes:
                continue
            if view.state_of(owner, s.focus_attribute) is None:
                continue
            situation = extract_situation(self.domain, owner, s.focus_attribute,
                                          min_closeness=s.situation_threshold,
                                          tracked_attributes=s.tracked_attributes, view=view)
            result = self.cssm(owner).observe(situation)
            if result is not None and result[1] is not None:
                path = result[1]
                self._transition("cssm", owner, None, path, self.domain.cssms[owner].tensor.count(path))

    def cssm(self, object_index: int) -> CSSM:
        """The object's situation machine, created on first use."""
        machine = self.domain.cssms.get(object_index)
        if machine is None:
            machine = self.domain.cssms[object_index] = CSSM(
                object_index, self.settings.focus_attribute, self.domain.transition_steps)
        return machine

    def casm(self, object_index: int, attribute_name: str) -> CASM:
        return casm_for(self.domain, object_index, attribute_name)

    # ------------------------------------------------------------------
    # transition management and application callbacks
    # ------------------------------------------------------------------
    def register_threshold(self, rule: ThresholdRule) -> ThresholdRule:
        return self.thresholds.register(rule)

    def on_transition(self, callback: Callable[[dict], None]) -> Subscription:
        """Call ``callback`` with every counted CASM/CSSM transition from now on."""
        return self.broker.subscribe(self._topics["transition"], lambda message: callback(message.payload))

    # ------------------------------------------------------------------
    # prediction
    # ------------------------------------------------------------------
    def predict(self, object_index: int, attribute_name: str, prefix: Optional[Sequence[int]] = None,
                reasoning: Optional[ReasoningFunction] = None) -> Optional[Tuple[int, float]]:
        """Next state of an attribute; ``prefix`` defaults to the attribute's recorded history."""
        casm = self.casm(object_index, attribute_name)
        if prefix is None:
            prefix = casm.attribute.history_states()
        return (reasoning or self.reasoning).predict(casm.tensor, prefix)

    def predict_value(self, object_index: int, attribute_name: str, prefix_values: Sequence[str],
                      reasoning: Optional[ReasoningFunction] = None) -> Optional[Tuple[str, float]]:
        attribute = self.domain.get_object(object_index).get_attribute(attribute_name)
        prefix = [attribute.state_index_of(v) for v in prefix_values]
        result = self.predict(object_index, attribute_name, prefix, reasoning)
        if result is None:
            return None
        return attribute.states[result[0]].value, result[1]

    def predict_situation(self, object_index: int, prefix: Optional[Sequence[int]] = None,
                          reasoning: Optional[ReasoningFunction] = None) -> Optional[Tuple[int, float]]:
        machine = self.domain.cssms.get(object_index)
        if machine is None:
            raise NotFoundError(f"object {object_index} has no situation machine")
        if prefix is None:
            prefix = tuple(machine.history)
        return (reasoning or self.reasoning).predict(machine.tensor, prefix)
