"""Index <-> URI bijection used to anonymize entities inside the model."""

import logging
from typing import Dict, Iterator, List, Tuple

from .errors import InternalError, NotFoundError

logger = logging.getLogger(__name__)


class ObjectURIMapping:
    """Dense, first-seen index assignment for entity URIs.

    Only indexes enter tensors, registries and model files; the URIs travel
    separately (mapping channel / mapping file).
    """

    def __init__(self):
        self._forward: List[str] = []
        self._reverse: Dict[str, int] = {}

    @property
    def next_index(self) -> int:
        return len(self._forward)

    def __len__(self) -> int:
        return len(self._forward)

    def __contains__(self, uri: str) -> bool:
        return uri in self._reverse

    def __iter__(self) -> Iterator[Tuple[int, str]]:
        return iter(enumerate(self._forward))

    def register(self, uri: str) -> Tuple[int, bool]:
        """Return ``(index, created)`` for ``uri``."""
        index = self._reverse.get(uri)
        if index is not None:
            return index, False
        index = len(self._forward)
        self._forward.append(uri)
        self._reverse[uri] = index
        return index, True

    def resolve_uri(self, index: int) -> str:
        if not isinstance(index, int) or index < 0 or index >= len(self._forward):
            raise NotFoundError(f"no entity with index {index}")
        return self._forward[index]

    def resolve_index(self, uri: str) -> int:
        try:
            return self._reverse[uri]
        except KeyError:
            raise NotFoundError(f"unknown uri {uri!r}") from None

    def uris(self) -> List[str]:
        return list(self._forward)

    def to_dict(self) -> dict:
        return {"uris": list(self._forward)}

    @classmethod
    def from_dict(cls, data: dict) -> "ObjectURIMapping":
        mapping = cls()
        for uri in data.get("uris", []):
            _, created = mapping.register(uri)
            if not created:
                raise InternalError(f"duplicate uri {uri!r} in mapping payload")
        return mapping


def resolve_uri(mapping: ObjectURIMapping, index: int) -> str:
    return mapping.resolve_uri(index)


def resolve_index(mapping: ObjectURIMapping, uri: str) -> int:
    return mapping.resolve_index(uri)
