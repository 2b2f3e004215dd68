"""Identity record model kept by the coordinator store."""

from typing import Dict, Optional

from pydantic import BaseModel, Field


class IdentityRecord(BaseModel):
    """Real-world information about an entity, keyed by its URI."""
    uri: str
    name: Optional[str] = None
    descriptors: Dict[str, str] = Field(default_factory=dict)

    def identity_strings(self) -> list:
        """Every string that identifies the entity and must stay out of model artifacts."""
        values = [self.name] if self.name else []
        values.extend(v for v in self.descriptors.values() if v)
        return values
