"""Relation and threshold models carried on the broker."""

from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

RelationKind = Literal["registered", "identified", "updated", "disabled"]


class RelationEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: RelationKind
    entity_a: int
    entity_b: int
    relation_type: str
    old_closeness: int = Field(0, ge=0, le=100)
    new_closeness: int = Field(ge=0, le=100)

    @property
    def key(self) -> Tuple[int, int, str]:
        return self.entity_a, self.entity_b, self.relation_type


class ThresholdRule(BaseModel):
    """Fire one message on ``action_topic`` when a watched tensor count reaches ``threshold``."""

    rule_id: str
    machine: Literal["casm", "cssm"] = "casm"
    object_index: int = Field(ge=0)
    attribute_name: Optional[str] = None
    path: Tuple[int, ...]
    threshold: int = Field(ge=1)
    action_topic: str
    fired: bool = False

    @field_validator("path")
    @classmethod
    def _path_well_formed(cls, v):
        if len(v) < 2 or any(i < 0 for i in v):
            raise ValueError("path needs at least two non-negative state indexes")
        return tuple(v)

    @property
    def owner(self) -> tuple:
        return self.machine, self.object_index, self.attribute_name
