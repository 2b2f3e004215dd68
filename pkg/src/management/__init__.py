"""Relationship and hierarchy management."""

from .relationships import (
    MAX_CLOSENESS,
    RelationshipManager,
    RelationshipMatrix,
    colocated_pairs,
    cotimed_pairs,
    location_intervals,
    related_entities,
)
from .hierarchy import (
    HierarchyLink,
    HierarchyManager,
    hierarchy_chains,
    identify_hierarchy,
    merge_states,
    mine_bidirectional_relations,
)
