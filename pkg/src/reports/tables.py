"""Tabular output for timings, sweeps, compression reports and predictions."""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, TextIO

import pandas as pd

from ..config.settings import REFERENCE_TIMINGS_100K_MS, REFERENCE_COMPRESSION_KB
from ..models.reports import CompressionReport, PhaseTimings

logger = logging.getLogger(__name__)

TIMING_COLUMNS = ["system", "items", "persons", "events", "conversion_ms", "casm_ms", "cssm_ms", "total_ms"]


class ReportTables:
    """Builds pandas frames and writes them as delimited text, a pretty table or xlsx."""

    @staticmethod
    def timings_frame(timings: Iterable[PhaseTimings]) -> pd.DataFrame:
        rows = [{**t.model_dump(), "total_ms": round(t.total_ms, 3)} for t in timings]
        return pd.DataFrame(rows, columns=TIMING_COLUMNS)

    @staticmethod
    def reference_timings_frame() -> pd.DataFrame:
        """Reference phase timings at 100k IntellElevator items, for comparison only."""
        return pd.DataFrame([{"items": 100_000, **{f"{k}_ms": v for k, v in REFERENCE_TIMINGS_100K_MS.items()}}])

    @staticmethod
    def compression_frame(report: CompressionReport) -> pd.DataFrame:
        """Rows laid out as a compression table: raw, deflated, deflated/raw."""
        zip_ratios = report.zip_ratios()
        return pd.DataFrame(
            [
                ["Uncompressed (bytes)", report.input_bytes, report.meta_bytes, report.casm_bytes, report.raw_ratio],
                ["DEFLATE (bytes)", report.input_deflated, report.meta_deflated, report.casm_deflated,
                 report.deflated_ratio],
                ["DEFLATE/Uncompressed (%)", zip_ratios["input"], zip_ratios["meta"], zip_ratios["casm"], None],
            ],
            columns=["row", "input_file", "meta_file", "casm_file", "ratio_pct"],
        )

    @staticmethod
    def reference_compression_frame() -> pd.DataFrame:
        t = REFERENCE_COMPRESSION_KB
        return pd.DataFrame(
            [
                ["Uncompressed (KB)", t["input_kb"], t["meta_kb"], t["casm_kb"], t["raw_ratio_pct"]],
                ["DEFLATE (KB)", t["input_deflated_kb"], t["meta_deflated_kb"], t["casm_deflated_kb"],
                 t["deflated_ratio_pct"]],
            ],
            columns=["row", "input_file", "meta_file", "casm_file", "ratio_pct"],
        )

    @staticmethod
    def distribution_frame(distribution: Dict[int, float], labels: Optional[Sequence[str]] = None) -> pd.DataFrame:
        rows = [
            {"state_index": s, "state": labels[s] if labels is not None else str(s), "probability": p}
            for s, p in sorted(distribution.items(), key=lambda kv: (-kv[1], kv[0]))
        ]
        return pd.DataFrame(rows, columns=["state_index", "state", "probability"])

    @staticmethod
    def emit(frame: pd.DataFrame, out: TextIO, fmt: str = "csv", title: Optional[str] = None) -> None:
        """Write ``frame`` as comma-delimited text (``csv``) or a pretty table (``table``)."""
        if title and fmt == "table":
            out.write(f"{title}\n")
        if fmt == "table":
            out.write(frame.to_string(index=False) if not frame.empty else "(empty)")
            out.write("\n")
        else:
            frame.to_csv(out, index=False, lineterminator="\n")

    @staticmethod
    def export_xlsx(frames: Dict[str, pd.DataFrame], path: Path) -> Path:
        """One sheet per frame, through openpyxl."""
        with pd.ExcelWriter(path, engine="openpyxl") as writer:
            for sheet, frame in frames.items():
                frame.to_excel(writer, sheet_name=sheet[:31], index=False)
        logger.info(f"Exported {len(frames)} tables to {path}")
        return path
