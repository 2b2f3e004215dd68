"""Privacy-separated broker channels: model artifacts and URI mapping never share a topic."""

import json
import logging
from typing import TYPE_CHECKING, Any, List, Optional, Tuple

from pydantic import BaseModel

from ..broker.channels import Channel, MessageBroker
from ..core.errors import PolicyViolationError
from ..core.mapping import ObjectURIMapping
from ..models.identity import IdentityRecord
from .coordinator import CoordinatorStore

if TYPE_CHECKING:
    from ..core.domain import ContextDomain

logger = logging.getLogger(__name__)


def payload_text(payload: Any) -> str:
    if isinstance(payload, bytes):
        return payload.decode("utf-8", errors="replace")
    if isinstance(payload, str):
        return payload
    if isinstance(payload, BaseModel):
        return payload.model_dump_json()
    try:
        return json.dumps(payload, default=str)
    except (TypeError, ValueError):
        return str(payload)


def forbidden_tokens(domain: "ContextDomain", coordinator: Optional[CoordinatorStore] = None) -> List[str]:
    """URIs and identity strings that must never appear in model traffic."""
    tokens = set(domain.object_index.uris())
    if coordinator is not None:
        tokens.update(coordinator.identity_strings())
    return sorted(t for t in tokens if t)


def find_leaks(data: Any, tokens: List[str]) -> List[str]:
    text = payload_text(data)
    return [t for t in tokens if t in text]


class ModelChannel(Channel):
    """Carries indexes, tensors and model files; rejects mapping or identity data."""

    def __init__(self, topic: str, domain: "ContextDomain", coordinator: Optional[CoordinatorStore] = None,
                 log_limit: Optional[int] = 10_000):
        super().__init__(topic, log_limit)
        self.domain = domain
        self.coordinator = coordinator

    def check(self, payload: Any) -> None:
        if isinstance(payload, (ObjectURIMapping, CoordinatorStore, IdentityRecord)):
            raise PolicyViolationError(f"{type(payload).__name__} may only travel on the mapping channel")
        leaks = find_leaks(payload, forbidden_tokens(self.domain, self.coordinator))
        if leaks:
            logger.error(f"blocked model payload containing {len(leaks)} identifying strings")
            raise PolicyViolationError(f"model payload contains identifying strings ({len(leaks)} found)")


class MappingChannel(Channel):
    """Carries the index <-> URI mapping only."""

    def check(self, payload: Any) -> None:
        if isinstance(payload, ObjectURIMapping):
            return
        if isinstance(payload, dict) and set(payload) == {"uris"}:
            return
        raise PolicyViolationError("mapping channel only accepts ObjectURIMapping payloads")


def open_privacy_channels(broker: MessageBroker, domain: "ContextDomain",
                          coordinator: Optional[CoordinatorStore] = None) -> Tuple[ModelChannel, MappingChannel]:
    model = broker.attach(ModelChannel(broker.topic_name(domain.domain_id, "model"), domain, coordinator,
                                       broker.log_limit))
    mapping = broker.attach(MappingChannel(broker.topic_name(domain.domain_id, "mapping"), broker.log_limit))
    return model, mapping
