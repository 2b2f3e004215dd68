"""Hierarchy management: state -> object references and the relations mined from them.

A state whose value is a registered object's URI or name links its owner to
that object (``Person001.location = Building001``). Following such links up to
depth H gives chains; when the far end of a chain refers back to the start
(``LAB001.owner = Person001``) the two get a "hierarchy-affinity" relation.
"""

import logging
from collections import defaultdict
from typing import TYPE_CHECKING, Dict, List, Mapping, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict

from ..config.settings import HIERARCHY_AFFINITY, EngineSettings
from ..core.domain import ContextDomain
from ..core.errors import FormatError
from ..models.events import RelationEvent
from .relationships import RelationshipManager

if TYPE_CHECKING:
    from ..broker.channels import MessageBroker

logger = logging.getLogger(__name__)

Chain = Tuple[int, ...]


class HierarchyLink(BaseModel):
    model_config = ConfigDict(frozen=True)

    object_index: int
    attribute_name: str
    state_index: int
    target: int

    @property
    def source(self) -> Tuple[int, str, int]:
        return self.object_index, self.attribute_name, self.state_index


def identify_hierarchy(domain: ContextDomain, object_index: int, attribute_name: str,
                       state_index: int) -> Optional[HierarchyLink]:
    """The link from a registered state to the object its value names, if any."""
    state = domain.get_object(object_index).get_attribute(attribute_name).state(state_index)
    if state.referenced_object is None:
        return None
    return HierarchyLink(object_index=object_index, attribute_name=attribute_name,
                         state_index=state_index, target=state.referenced_object)


def _references(domain: ContextDomain) -> Dict[int, Set[int]]:
    refs: Dict[int, Set[int]] = defaultdict(set)
    for obj, attribute in domain.iter_attributes():
        for state in attribute.states:
            if state.referenced_object is not None:
                refs[obj.object_index].add(state.referenced_object)
    return refs


def hierarchy_chains(domain: ContextDomain, object_index: int, depth: Optional[int] = None,
                     refs: Optional[Mapping[int, Set[int]]] = None) -> List[Chain]:
    """All acyclic reference chains starting at ``object_index`` of at most ``depth`` links."""
    depth = depth or domain.hierarchy_depth
    refs = refs if refs is not None else _references(domain)
    chains: List[Chain] = []
    frontier: List[Chain] = [(object_index,)]
    for _ in range(depth):
        extended = []
        for chain in frontier:
            for target in sorted(refs.get(chain[-1], ())):
                if target not in chain:
                    extended.append(chain + (target,))
        chains.extend(extended)
        frontier = extended
    return chains


class HierarchyManager:
    """Identifies hierarchy links as states appear and mines bi-directional relations."""

    def __init__(self, domain: ContextDomain, relations: Optional[RelationshipManager] = None,
                 settings: Optional[EngineSettings] = None, broker: Optional["MessageBroker"] = None):
        self.domain = domain
        self.settings = settings or EngineSettings()
        self.broker = broker
        self.relations = relations or RelationshipManager(domain, self.settings, broker)
        self.links: Dict[Tuple[int, str, int], HierarchyLink] = {}
        self.mined: Set[Tuple[int, int]] = set()

    def identify(self, object_index: int, attribute_name: str, state_index: int) -> Optional[HierarchyLink]:
        link = identify_hierarchy(self.domain, object_index, attribute_name, state_index)
        if link is None or self.links.get(link.source) == link:
            return link
        self.links[link.source] = link
        if self.broker is not None:
            self.broker.publish(self.broker.topic_name(self.domain.domain_id, "hierarchy"), link)
        logger.debug(f"hierarchy link {link.source} -> {link.target}")
        return link

    def identify_all(self) -> List[HierarchyLink]:
        """Scan every registered state; picks up references back-filled by later registrations."""
        found = []
        for obj, attribute in self.domain.iter_attributes():
            for state in attribute.states:
                link = self.identify(obj.object_index, attribute.name, state.state_index)
                if link is not None:
                    found.append(link)
        return found

    def chains(self, object_index: int) -> List[Chain]:
        return hierarchy_chains(self.domain, object_index)

    def mine(self) -> List[RelationEvent]:
        """Relate P and X both ways when a chain P -> ... -> X exists and X refers back to P."""
        refs = _references(self.domain)
        s = self.settings
        emitted: List[RelationEvent] = []
        for start in sorted(refs):
            for chain in hierarchy_chains(self.domain, start, refs=refs):
                end = chain[-1]
                pair = (start, end)
                if pair in self.mined or start not in refs.get(end, ()):
                    continue
                self.mined.add(pair)
                self.mined.add((end, start))
                initial = s.base_closeness + s.hierarchy_bonus
                emitted.append(self.relations.reinforce(start, end, HIERARCHY_AFFINITY, s.hierarchy_bonus, initial))
                emitted.append(self.relations.reinforce(end, start, HIERARCHY_AFFINITY, s.hierarchy_bonus, initial))
        if emitted:
            logger.info(f"mined {len(emitted)} hierarchy-affinity relation updates")
        return emitted


def mine_bidirectional_relations(domain: ContextDomain, manager: Optional[HierarchyManager] = None) -> List[RelationEvent]:
    return (manager or HierarchyManager(domain)).mine()


def merge_states(domain: ContextDomain, object_index: int, attribute_name: str,
                 groups: Mapping[str, Sequence[str]]) -> Dict[int, int]:
    """Coarsen an attribute: every value listed under a group label becomes that label.

    Remaps the state registry, current/previous state, history and CASM counts.
    Returns old -> new state index. Situation machines are not remapped.
    """
    attribute = domain.get_object(object_index).get_attribute(attribute_name)
    label_of: Dict[str, str] = {}
    for label, values in groups.items():
        for value in values:
            if value in label_of and label_of[value] != label:
                raise FormatError(f"state {value!r} listed under two groups")
            label_of[value] = label

    old_values = [s.value for s in attribute.states]
    domain.reset_states(object_index, attribute_name)
    remap = {}
    for old_index, value in enumerate(old_values):
        remap[old_index], _ = domain.register_state(object_index, attribute_name, label_of.get(value, value))

    if attribute.current_state_index is not None:
        attribute.current_state_index = remap[attribute.current_state_index]
    if attribute.previous_state_index is not None:
        attribute.previous_state_index = remap[attribute.previous_state_index]
    history = list(attribute.history)
    attribute.history.clear()
    attribute.history.extend((remap[s], ts) for s, ts in history)

    casm = attribute.casm
    if casm is not None:
        from ..engine.tensor import TransitionTensor

        merged = TransitionTensor(casm.tensor.arity, len(attribute.states))
        for path, n in casm.tensor.items():
            merged.increment(tuple(remap[s] for s in path), n)
        casm.tensor = merged
    logger.info(f"merged {len(old_values)} states of {attribute_name} into {len(attribute.states)}")
    return remap
