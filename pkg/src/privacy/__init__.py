"""Privacy protection: coordinator identities and separated channels."""

from .coordinator import CoordinatorStore
from .channels import MappingChannel, ModelChannel, find_leaks, forbidden_tokens, open_privacy_channels
