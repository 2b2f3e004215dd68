"""CSM actuator: "machine" <-> "file" transforms for a model directory."""

import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..config.paths import CASM_SUFFIX, META_SUFFIX, artifact_paths, ensure_dir
from ..core.domain import ContextDomain
from ..core.errors import ConfigError, LoadError, MissingInputError
from ..privacy.coordinator import CoordinatorStore
from .model_files import load, load_mapping, save, save_mapping

logger = logging.getLogger(__name__)

SAFE_NAME = re.compile(r"^[A-Za-z0-9._-]{1,64}$")


class CSMActuator:
    """Writes and reads models as four files in one directory.

    ``<name>.csm-meta.json`` and ``<name>.casm.json`` are the model;
    ``<name>.mapping.json`` and ``<name>.coordinator.json`` hold the URIs and
    identities and can be shipped separately.
    """

    def __init__(self, storage_dir: Path):
        self.dir = ensure_dir(Path(storage_dir))

    def paths(self, name: str) -> Dict[str, Path]:
        name = (name or "").strip()
        if not SAFE_NAME.match(name):
            raise ConfigError(f"model name {name!r}: only letters/numbers/dot/dash/underscore (max 64)")
        return artifact_paths(self.dir, name)

    def write(self, name: str, domain: ContextDomain, coordinator: Optional[CoordinatorStore] = None) -> Dict[str, Path]:
        """Machine -> file. Returns the written paths."""
        paths = self.paths(name)
        meta, casm = save(domain)
        paths["meta"].write_bytes(meta)
        paths["casm"].write_bytes(casm)
        paths["mapping"].write_bytes(save_mapping(domain.object_index))
        (coordinator or CoordinatorStore()).save(paths["coordinator"])
        logger.info(f"Saved model {name} ({len(meta)} + {len(casm)} bytes) to {self.dir}")
        return paths

    def read(self, name: str, with_identities: bool = True) -> Tuple[ContextDomain, CoordinatorStore]:
        """File -> machine. Without identities the domain carries placeholder URIs and no names."""
        paths = self.paths(name)
        for key in ("meta", "casm"):
            if not paths[key].exists():
                raise MissingInputError(f"model file {paths[key]} is missing")
        mapping, coordinator = None, CoordinatorStore()
        if with_identities:
            if paths["mapping"].exists():
                mapping = load_mapping(paths["mapping"].read_bytes())
            coordinator = CoordinatorStore.load(paths["coordinator"])
        domain = load(paths["meta"].read_bytes(), paths["casm"].read_bytes(), mapping, coordinator)
        logger.info(f"Loaded model {name} from {self.dir}")
        return domain, coordinator

    def list_models(self) -> List[str]:
        return sorted(p.name[:-len(META_SUFFIX)] for p in self.dir.glob(f"*{META_SUFFIX}")
                      if (self.dir / (p.name[:-len(META_SUFFIX)] + CASM_SUFFIX)).exists())

    def delete(self, name: str) -> int:
        removed = 0
        for path in self.paths(name).values():
            if path.exists():
                path.unlink()
                removed += 1
        if not removed:
            raise LoadError(f"no model called {name!r} in {self.dir}")
        return removed
