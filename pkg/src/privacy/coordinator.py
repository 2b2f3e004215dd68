"""
Coordinator Store - Real Identities Kept Apart From the Model

The coordinator is the only place that links an entity URI to the real-world
information behind it (names, descriptors). Model artifacts carry indexes
only; the ObjectURIMapping travels on its own channel and this store lives in
its own file, so the two halves can be shipped to a computing platform
separately.

Storage:
    A JSON document ``{uri: IdentityRecord}`` written next to, but never
    inside, the model files.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Iterable, Iterator, List

from ..core.errors import LoadError, NotFoundError
from ..models.identity import IdentityRecord

logger = logging.getLogger(__name__)


class CoordinatorStore:
    """URI -> identity record map.

    Records are added while ingesting (object names, person names) and can be
    persisted with ``save``/``load``. ``identity_strings`` lists everything a
    privacy scan must not find in model bytes.
    """

    def __init__(self, records: Iterable[IdentityRecord] = ()):
        self._records: Dict[str, IdentityRecord] = {}
        for record in records:
            self.put(record)

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, uri: str) -> bool:
        return uri in self._records

    def __iter__(self) -> Iterator[IdentityRecord]:
        return iter(self._records.values())

    def put(self, record: IdentityRecord) -> IdentityRecord:
        """Insert or merge a record; descriptors of an existing record are extended."""
        existing = self._records.get(record.uri)
        if existing is None:
            self._records[record.uri] = record
            return record
        merged = existing.model_copy(update={
            "name": existing.name or record.name,
            "descriptors": {**existing.descriptors, **record.descriptors},
        })
        self._records[record.uri] = merged
        return merged

    def get(self, uri: str) -> IdentityRecord:
        try:
            return self._records[uri]
        except KeyError:
            raise NotFoundError(f"no identity record for {uri!r}") from None

    def identity_strings(self) -> List[str]:
        values = set()
        for record in self._records.values():
            values.update(record.identity_strings())
        return sorted(values)

    def save(self, path: Path) -> None:
        """
        Persist the store as JSON.

        Args:
            path: Target file; parent directories must exist.
        """
        data = {uri: record.model_dump() for uri, record in sorted(self._records.items())}
        path.write_text(json.dumps(data, indent=2, sort_keys=True), encoding="utf-8")
        logger.info(f"Saved {len(self._records)} identity records to {path}")

    @classmethod
    def load(cls, path: Path) -> "CoordinatorStore":
        """
        Load a store written by ``save``.

        A missing file yields an empty store; a corrupted one raises LoadError
        rather than silently dropping identities.
        """
        if not path.exists():
            logger.info(f"Coordinator file {path} does not exist - returning empty store")
            return cls()
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            store = cls(IdentityRecord(**record) for record in data.values())
        except (json.JSONDecodeError, TypeError, ValueError) as e:
            logger.error(f"Failed to parse coordinator file {path}: {e}")
            raise LoadError(f"corrupted coordinator file {path}: {e}") from e
        logger.info(f"Loaded {len(store)} identity records from {path}")
        return store
