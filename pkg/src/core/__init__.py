"""Core ontology-state model and index mapping."""

from .errors import *
from .mapping import ObjectURIMapping, resolve_index, resolve_uri
from .domain import (
    NOMINAL,
    ORDINAL,
    ContextAttribute,
    ContextAttributeState,
    ContextCategory,
    ContextDomain,
    ContextObject,
    register_object,
    register_state,
    split_category_path,
)
