"""Context Attribute State Machines: one transition tensor per (object, attribute)."""

from typing import List, Optional, Sequence, Tuple

from ..core.domain import ContextAttribute, ContextAttributeState, ContextDomain
from ..core.errors import InternalError
from ..models.records import StateChangeEvent
from .tensor import Path, TransitionTensor


class CASM:
    """R-step state machine of one attribute.

    The tensor dimension follows the attribute's state registry; the
    attribute's history ring holds the R states preceding the next event.
    """

    def __init__(self, object_index: int, attribute: ContextAttribute, transition_steps: int):
        self.owner: Tuple[int, str] = (object_index, attribute.name)
        self.attribute = attribute
        self.tensor = TransitionTensor(transition_steps + 1)
        self.sync_dimension()

    @property
    def state_registry(self) -> List[ContextAttributeState]:
        return self.attribute.states

    @property
    def transition_steps(self) -> int:
        return self.tensor.arity - 1

    def sync_dimension(self) -> None:
        self.tensor.grow_to(len(self.attribute.states))

    def grow_dimension(self, new_state_index: int) -> None:
        self.tensor.grow_dimension(new_state_index)

    def record_event(self, event: StateChangeEvent) -> Optional[Path]:
        """Append the event's state to the history; return the counted path, if any."""
        if (event.object_index, event.attribute_name) != self.owner:
            raise InternalError(f"event for {(event.object_index, event.attribute_name)} sent to CASM {self.owner}")
        self.sync_dimension()
        history = self.attribute.history
        path = None
        if len(history) == history.maxlen:
            path = tuple(s for s, _ in history) + (event.new_state_index,)
            self.tensor.increment(path)
        history.append((event.new_state_index, event.timestamp))
        return path

    def transition_count(self, path: Sequence[int]) -> int:
        return self.tensor.count(path)


def casm_for(domain: ContextDomain, object_index: int, attribute_name: str) -> CASM:
    """The attribute's CASM, created on first use."""
    attribute = domain.get_object(object_index).get_attribute(attribute_name)
    if attribute.casm is None:
        attribute.casm = CASM(object_index, attribute, domain.transition_steps)
    return attribute.casm


def record_event(casm: CASM, event: StateChangeEvent) -> CASM:
    casm.record_event(event)
    return casm


def transition_count(casm: CASM, path: Sequence[int]) -> int:
    return casm.transition_count(path)


def grow_dimension(casm: CASM, new_state_index: int) -> CASM:
    casm.grow_dimension(new_state_index)
    return casm
