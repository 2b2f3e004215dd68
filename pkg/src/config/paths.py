"""Path configuration for the CSM-H-R workbench."""

import os
from datetime import datetime
from pathlib import Path

OUTPUT_ENV_VAR = "CSM_OUTPUT_DIR"


def ensure_dir(p: Path) -> Path:
    """Ensure directory exists, handling conflicts by renaming existing files."""
    if p.exists() and not p.is_dir():
        backup = p.with_name(f"{p.name}.conflict.{datetime.now().strftime('%Y%m%d%H%M%S')}")
        p.rename(backup)
    p.mkdir(parents=True, exist_ok=True)
    return p


def output_dir() -> Path:
    """Default output directory; the environment variable wins over ./output."""
    env = os.environ.get(OUTPUT_ENV_VAR)
    return Path(env) if env else Path.cwd() / "output"


def models_dir() -> Path:
    return output_dir() / "models"


def logs_dir() -> Path:
    return output_dir() / "logs"


# File name suffixes of the model artifacts
META_SUFFIX = ".csm-meta.json"
CASM_SUFFIX = ".casm.json"
MAPPING_SUFFIX = ".mapping.json"
COORDINATOR_SUFFIX = ".coordinator.json"


def artifact_paths(directory: Path, name: str) -> dict:
    """Return the four artifact paths of a model called ``name``."""
    return {
        "meta": directory / f"{name}{META_SUFFIX}",
        "casm": directory / f"{name}{CASM_SUFFIX}",
        "mapping": directory / f"{name}{MAPPING_SUFFIX}",
        "coordinator": directory / f"{name}{COORDINATOR_SUFFIX}",
    }
