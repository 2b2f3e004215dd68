"""CSM-H-R Workbench - hierarchical ontology-state context modeling."""

__version__ = "1.0.0"
__description__ = "Context attribute/situation state machines with hierarchy, relations and privacy-by-indexing"
