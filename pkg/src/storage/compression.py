"""Compression report: model files against the raw input, with a DEFLATE baseline."""

import logging
import zlib
from pathlib import Path
from typing import Optional

from ..config.settings import DEFLATE_LEVEL
from ..core.domain import ContextDomain
from ..core.errors import MissingInputError
from ..models.reports import CompressionReport
from .model_files import save

logger = logging.getLogger(__name__)


def deflate_size(data: bytes, level: int = DEFLATE_LEVEL) -> int:
    """Size of a raw DEFLATE stream (no zlib header), the algorithm used inside ZIP."""
    if not data:
        return 0
    compressor = zlib.compressobj(level, zlib.DEFLATED, -15)
    return len(compressor.compress(data) + compressor.flush())


def compression_report(input_path: Path, domain: Optional[ContextDomain] = None, *,
                       meta_bytes: Optional[bytes] = None, casm_bytes: Optional[bytes] = None) -> CompressionReport:
    """Compare the input file with the model files built from it (or given directly)."""
    input_path = Path(input_path)
    if not input_path.exists():
        raise MissingInputError(f"input file {input_path} does not exist")
    if meta_bytes is None or casm_bytes is None:
        if domain is None:
            raise MissingInputError("compression report needs a domain or both model files")
        meta_bytes, casm_bytes = save(domain)
    raw = input_path.read_bytes()
    report = CompressionReport(
        input_bytes=len(raw),
        meta_bytes=len(meta_bytes),
        casm_bytes=len(casm_bytes),
        input_deflated=deflate_size(raw),
        meta_deflated=deflate_size(meta_bytes),
        casm_deflated=deflate_size(casm_bytes),
    )
    if report.degenerate:
        logger.warning(f"input {input_path} is empty; ratios are reported as 0")
    return report
