"""Tabular reports (pandas) for timings, compression and predictions."""

from .tables import TIMING_COLUMNS, ReportTables
