"""Ingestion record models using Pydantic."""

from datetime import datetime
from typing import ClassVar, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class TripleHR(BaseModel):
    """Object / attribute / state record with conditions, complement and sources."""

    category_path: str
    object_name: str
    attribute: str
    state_value: str
    conditions: List[str] = Field(default_factory=list)
    complement: Optional[str] = None
    sources: List[str] = Field(default_factory=list)
    timestamp: datetime

    @field_validator("category_path", "object_name", "attribute", "state_value")
    @classmethod
    def _non_empty(cls, v: str) -> str:
        v = v.strip()
        if not v:
            raise ValueError("must be non-empty")
        return v


class TripleRDF(BaseModel):
    """Subject / predicate / object extended with decisions and nested condition triples."""

    subject: str
    predicate: str
    object: str
    decisions: List[str] = Field(default_factory=list)
    conditions: List["TripleRDF"] = Field(default_factory=list)

    @field_validator("subject", "predicate", "object")
    @classmethod
    def _non_empty(cls, v: str) -> str:
        v = v.strip()
        if not v:
            raise ValueError("must be non-empty")
        return v

    def depth(self) -> int:
        """Nesting depth; a triple without conditions has depth 0."""
        if not self.conditions:
            return 0
        return 1 + max(c.depth() for c in self.conditions)


TripleRDF.model_rebuild()


class ElevatorRecord(BaseModel):
    """One IntellElevator line, 12 fields in this order."""

    index: int
    person_id: str
    person_name: str
    person_type: str
    date: str
    decision: str
    action: str
    action_uri: str
    action_type: str
    location_uri: str
    location_name: str
    location_type: str

    FIELDS: ClassVar[Tuple[str, ...]] = (
        "index", "person_id", "person_name", "person_type", "date", "decision",
        "action", "action_uri", "action_type", "location_uri", "location_name", "location_type",
    )

    def to_fields(self) -> List[str]:
        return [str(getattr(self, name)) for name in self.FIELDS]

    def to_line(self, delimiter: str = ",") -> str:
        return delimiter.join(self.to_fields())


class StateChangeEvent(BaseModel):
    """Normalized state assertion feeding the CASM and CSSM engines."""

    model_config = ConfigDict(frozen=True)

    object_index: int = Field(ge=0)
    attribute_name: str
    new_state_index: int = Field(ge=0)
    timestamp: datetime
    conditions: Tuple[str, ...] = ()
