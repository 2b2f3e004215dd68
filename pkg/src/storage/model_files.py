"""Two-file model format: the CASM meta file and the CASM file.

Both are sorted-key compact JSON followed by a ``#crc32=`` footer line.

Meta file::

    {"format": "csm-meta", "version": 1, "domain_id": ..., "H": 2, "R": 1,
     "categories": [name, ...],
     "objects": [[category_position, [label, ...]], ...],        # position = object index
     "values": [state value, ...],
     "attributes": [[object, name, kind, [code, ...], current, previous,
                     [[state, iso timestamp], ...]], ...],
     "relation_types": [name, ...],
     "relations": [a, b, type, closeness, ...],
     "situations": [[owner, focus attribute, [canonical, ...], [history...]], ...]}

A state code ``>= 0`` indexes ``values``; ``-(2k+1)`` stands for the URI of
object ``k`` and ``-(2k+2)`` for its name, so no identifying text is stored.

CASM file::

    {"format": "casm", "version": 1,
     "casms": [[attribute_position, m, p0, ..., pR, count, ...], ...],
     "cssms": [[owner, m, p0, ..., pR, count, ...], ...]}
"""

import json
import logging
import zlib
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

from ..config.settings import CASM_FORMAT, FORMAT_VERSION, META_FORMAT
from ..core.domain import CATEGORY_SEPARATOR, ContextDomain
from ..core.errors import (
    ArityError,
    ChecksumError,
    DanglingIndexError,
    InternalError,
    LoadError,
    NotFoundError,
    TruncatedFileError,
    VersionMismatchError,
)
from ..core.mapping import ObjectURIMapping
from ..engine.casm import CASM
from ..engine.cssm import CSSM, SituationRegistry
from ..engine.tensor import TransitionTensor
from ..privacy.coordinator import CoordinatorStore

logger = logging.getLogger(__name__)

FOOTER = b"\n#crc32="
PLACEHOLDER_URI = "urn:csm:index:{}"


def encode_document(document: Dict[str, Any]) -> bytes:
    body = json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
    return body + FOOTER + f"{zlib.crc32(body):08x}\n".encode("ascii")


def decode_document(data: bytes, kind: str) -> Dict[str, Any]:
    cut = data.rfind(FOOTER)
    if cut < 0:
        raise TruncatedFileError(f"{kind} file has no checksum footer")
    body, footer = data[:cut], data[cut + len(FOOTER):].strip()
    try:
        expected = int(footer, 16)
    except ValueError:
        raise TruncatedFileError(f"{kind} file has a damaged checksum footer") from None
    if zlib.crc32(body) != expected:
        raise ChecksumError(f"{kind} file checksum mismatch")
    try:
        document = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise TruncatedFileError(f"{kind} file is not complete JSON: {e}") from e
    return document


def _check_header(document: Dict[str, Any], fmt: str) -> None:
    if document.get("format") != fmt:
        raise VersionMismatchError(f"expected a {fmt!r} file, got {document.get('format')!r}")
    if document.get("version") != FORMAT_VERSION:
        raise VersionMismatchError(f"{fmt} version {document.get('version')!r} is not {FORMAT_VERSION}")


# ----------------------------------------------------------------------
# save
# ----------------------------------------------------------------------
def save(domain: ContextDomain) -> Tuple[bytes, bytes]:
    """Serialize a domain into (meta bytes, casm bytes)."""
    categories = list(domain.categories)
    category_pos = {name: i for i, name in enumerate(categories)}
    values: List[str] = []
    value_pos: Dict[str, int] = {}

    def code(owner: int, state) -> int:
        k = owner if state.self_reference else state.referenced_object
        if k is not None:
            return -(2 * k + 2) if state.ref_by_name else -(2 * k + 1)
        pos = value_pos.get(state.value)
        if pos is None:
            pos = value_pos[state.value] = len(values)
            values.append(state.value)
        return pos

    attributes, casms = [], []
    for obj, attribute in domain.iter_attributes():
        position = len(attributes)
        attributes.append([
            obj.object_index, attribute.name, attribute.kind,
            [code(obj.object_index, s) for s in attribute.states],
            attribute.current_state_index, attribute.previous_state_index,
            [[s, ts.isoformat() if ts else None] for s, ts in attribute.history],
        ])
        if attribute.casm is not None:
            attribute.casm.sync_dimension()
            casms.append([position, attribute.casm.tensor.dimension_size] + attribute.casm.tensor.flatten())

    relations: List[int] = []
    for entry in domain.relationships.entries():
        relations.extend(entry)

    situations, cssms = [], []
    for owner in sorted(domain.cssms):
        machine = domain.cssms[owner]
        situations.append([owner, machine.focus_attribute, list(machine.registry.situations), list(machine.history)])
        cssms.append([owner, machine.tensor.dimension_size] + machine.tensor.flatten())

    meta = {
        "format": META_FORMAT,
        "version": FORMAT_VERSION,
        "domain_id": domain.domain_id,
        "H": domain.hierarchy_depth,
        "R": domain.transition_steps,
        "categories": categories,
        "objects": [[category_pos[o.category], list(o.labels)] for o in domain.objects],
        "values": values,
        "attributes": attributes,
        "relation_types": list(domain.relationships.relation_type_names),
        "relations": relations,
        "situations": situations,
    }
    casm = {"format": CASM_FORMAT, "version": FORMAT_VERSION, "casms": casms, "cssms": cssms}
    return encode_document(meta), encode_document(casm)


def save_mapping(mapping: ObjectURIMapping) -> bytes:
    return encode_document(mapping.to_dict())


def load_mapping(data: bytes) -> ObjectURIMapping:
    return ObjectURIMapping.from_dict(decode_document(data, "mapping"))


# ----------------------------------------------------------------------
# load
# ----------------------------------------------------------------------
class _Loader:
    def __init__(self, meta: Dict[str, Any], casm: Dict[str, Any], mapping: Optional[ObjectURIMapping],
                 coordinator: Optional[CoordinatorStore]):
        self.meta = meta
        self.casm = casm
        self.mapping = mapping
        self.coordinator = coordinator

    def _uri(self, k: int) -> str:
        if self.mapping is not None:
            return self.mapping.resolve_uri(k)
        return PLACEHOLDER_URI.format(k)

    def _name(self, k: int) -> Optional[str]:
        if self.coordinator is None or self.mapping is None:
            return None
        uri = self.mapping.resolve_uri(k)
        return self.coordinator.get(uri).name if uri in self.coordinator else None

    def _value(self, code: int, object_count: int) -> Tuple[str, Optional[int], bool]:
        if code >= 0:
            values = self.meta["values"]
            if code >= len(values):
                raise DanglingIndexError(f"state value {code} outside the value table")
            return values[code], None, False
        k, by_name = divmod(-code - 1, 2)
        if k >= object_count:
            raise DanglingIndexError(f"state refers to missing object {k}")
        if by_name:
            name = self._name(k)
            return (name if name else f"<ref-name:{k}>"), k, True
        return (self._uri(k) if self.mapping is not None else f"<ref:{k}>"), k, False

    def build(self) -> ContextDomain:
        meta = self.meta
        domain = ContextDomain(meta["domain_id"], meta["H"], meta["R"])
        objects = meta["objects"]
        categories = meta["categories"]
        if self.mapping is not None and len(self.mapping) != len(objects):
            raise DanglingIndexError(f"mapping holds {len(self.mapping)} URIs for {len(objects)} objects")
        for k, (category, labels) in enumerate(objects):
            if category >= len(categories):
                raise DanglingIndexError(f"object {k} names missing category {category}")
            path = CATEGORY_SEPARATOR.join([categories[category]] + list(labels))
            domain.register_object(path, self._uri(k), self._name(k))

        attributes = []
        for object_index, name, kind, codes, current, previous, history in meta["attributes"]:
            if object_index >= len(objects):
                raise DanglingIndexError(f"attribute {name!r} owned by missing object {object_index}")
            attribute, _ = domain.ensure_attribute(object_index, name, kind)
            for code in codes:
                value, ref, by_name = self._value(code, len(objects))
                state_index, _ = domain.register_state(object_index, name, value)
                state = attribute.states[state_index]
                state.referenced_object, state.self_reference, state.ref_by_name = None, False, False
                if ref is not None:
                    state.mark_reference(object_index, ref, by_name)
            m = len(attribute.states)
            for s in (current, previous, *(h[0] for h in history)):
                if s is not None and not 0 <= s < m:
                    raise DanglingIndexError(f"attribute {name!r} of object {object_index} has no state {s}")
            attribute.current_state_index = current
            attribute.previous_state_index = previous
            attribute.history.extend((s, datetime.fromisoformat(ts) if ts else None) for s, ts in history)
            attributes.append((object_index, attribute))

        for type_name in meta["relation_types"]:
            domain.relationships.type_index(type_name)
        flat = meta["relations"]
        if len(flat) % 4:
            raise TruncatedFileError("relation table is not a multiple of 4")
        for i in range(0, len(flat), 4):
            a, b, t, c = flat[i:i + 4]
            if max(a, b) >= len(objects) or t >= len(meta["relation_types"]):
                raise DanglingIndexError(f"relation {a} -> {b} refers to missing entities or types")
            domain.relationships.set(a, b, meta["relation_types"][t], c)

        self._load_casms(domain, attributes)
        self._load_cssms(domain, len(objects))
        return domain

    def _tensor(self, arity: int, m: int, flat: List[int], what: str) -> TransitionTensor:
        try:
            return TransitionTensor.from_flat(arity, m, flat)
        except NotFoundError as e:
            raise DanglingIndexError(f"{what}: {e}") from e
        except (ArityError, InternalError) as e:
            raise LoadError(f"{what}: {e}") from e

    def _load_casms(self, domain: ContextDomain, attributes) -> None:
        arity = domain.transition_steps + 1
        for row in self.casm["casms"]:
            position, m, flat = row[0], row[1], row[2:]
            if position >= len(attributes):
                raise DanglingIndexError(f"CASM for missing attribute row {position}")
            object_index, attribute = attributes[position]
            if m > len(attribute.states):
                raise DanglingIndexError(f"CASM of {attribute.name!r} has {m} states, registry has {len(attribute.states)}")
            machine = CASM(object_index, attribute, domain.transition_steps)
            machine.tensor = self._tensor(arity, m, flat, f"CASM of {attribute.name!r}")
            machine.sync_dimension()
            attribute.casm = machine

    def _load_cssms(self, domain: ContextDomain, object_count: int) -> None:
        arity = domain.transition_steps + 1
        tensors = {row[0]: (row[1], row[2:]) for row in self.casm["cssms"]}
        for owner, focus, situations, history in self.meta["situations"]:
            if owner >= object_count or owner not in tensors:
                raise DanglingIndexError(f"situation machine of missing object {owner}")
            m, flat = tensors.pop(owner)
            if m != len(situations) or any(not 0 <= h < m for h in history):
                raise DanglingIndexError(f"situation machine of {owner} does not match its registry")
            machine = CSSM(owner, focus, domain.transition_steps)
            machine.registry = SituationRegistry(situations)
            machine.tensor = self._tensor(arity, m, flat, f"CSSM of {owner}")
            machine.history.extend(history)
            domain.cssms[owner] = machine
        if tensors:
            raise DanglingIndexError(f"CSSM tensors without a registry: {sorted(tensors)}")


def load(meta_bytes: bytes, casm_bytes: bytes, mapping: Optional[ObjectURIMapping] = None,
         coordinator: Optional[CoordinatorStore] = None) -> ContextDomain:
    """Rebuild a domain; URIs and names come back only when mapping/coordinator are given."""
    meta = decode_document(meta_bytes, "meta")
    casm = decode_document(casm_bytes, "casm")
    _check_header(meta, META_FORMAT)
    _check_header(casm, CASM_FORMAT)
    try:
        domain = _Loader(meta, casm, mapping, coordinator).build()
    except LoadError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise LoadError(f"malformed model files: {e!r}") from e
    logger.info(f"loaded domain {domain.domain_id}: {len(domain)} objects")
    return domain
