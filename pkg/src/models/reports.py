"""Report models: compression report and phase timings."""

from typing import Dict

from pydantic import BaseModel, Field


def _pct(part: int, whole: int) -> float:
    return round(100.0 * part / whole, 2) if whole else 0.0


class CompressionReport(BaseModel):
    """Model files versus the raw input, uncompressed and after DEFLATE."""
    input_bytes: int = Field(ge=0)
    meta_bytes: int = Field(ge=0)
    casm_bytes: int = Field(ge=0)
    input_deflated: int = Field(ge=0)
    meta_deflated: int = Field(ge=0)
    casm_deflated: int = Field(ge=0)

    @property
    def degenerate(self) -> bool:
        return self.input_bytes == 0

    @property
    def raw_ratio(self) -> float:
        """(meta + casm) / input, in percent."""
        return _pct(self.meta_bytes + self.casm_bytes, self.input_bytes)

    @property
    def deflated_ratio(self) -> float:
        return _pct(self.meta_deflated + self.casm_deflated, self.input_deflated)

    def zip_ratios(self) -> Dict[str, float]:
        """Per-file deflated / uncompressed ratios, in percent."""
        return {
            "input": _pct(self.input_deflated, self.input_bytes),
            "meta": _pct(self.meta_deflated, self.meta_bytes),
            "casm": _pct(self.casm_deflated, self.casm_bytes),
        }


class PhaseTimings(BaseModel):
    """Wall-clock milliseconds of one build, split into conversion, CASM and CSSM phases."""
    system: str
    items: int = Field(ge=0)
    persons: int = Field(ge=0)
    conversion_ms: float = Field(0.0, ge=0)
    casm_ms: float = Field(0.0, ge=0)
    cssm_ms: float = Field(0.0, ge=0)
    events: int = Field(0, ge=0)

    @property
    def total_ms(self) -> float:
        return self.conversion_ms + self.casm_ms + self.cssm_ms
