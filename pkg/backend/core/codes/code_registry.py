"""
Code Registry System
====================

Data-driven registry of component codes. Shipped codes are JSON code
descriptions under data/codes/; user code files are loaded and saved in the
same format:

    {"name": ..., "k": 2, "m": 13, "J": 4,
     "generators": ["1001100000001", ...] or [[0, 3, 4, 12], ...]}
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..errors import CodeStructureError
from .csoc import CsocCode

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parents[2] / "data" / "codes"
DEFAULT_CODE = "csoc_3_2_13"


@dataclass
class CodeSpecification:
    """A named component code and where it came from."""
    name: str
    code: CsocCode
    description: str = ""
    source: str = ""
    active: bool = True
    custom_fields: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        """Convert to the code-description file format."""
        return {
            'name': self.name,
            'description': self.description,
            **self.code.to_dict(),
            **self.custom_fields
        }

    @classmethod
    def from_dict(cls, data: Dict, source: str = "") -> 'CodeSpecification':
        """Create from a code description."""
        known = {'name', 'description', 'k', 'm', 'J', 'generators'}
        return cls(
            name=str(data.get('name', Path(source).stem if source else "unnamed")),
            code=CsocCode.from_dict(data),
            description=str(data.get('description', "")),
            source=source,
            custom_fields={key: value for key, value in data.items() if key not in known}
        )


def load_code_file(path: Union[str, Path]) -> CodeSpecification:
    """Read a code description file; structural problems raise CodeStructureError."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CodeStructureError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise CodeStructureError(f"{path}: code description must be a JSON object")
    return CodeSpecification.from_dict(data, source=str(path))


def save_code_file(spec: CodeSpecification, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(json.dumps(spec.to_dict(), indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote code {spec.name} to {path}")
    return path


class CodeRegistry:
    """Central registry of component codes, seeded from the shipped data directory."""

    def __init__(self, data_dir: Optional[Path] = DATA_DIR):
        self._codes: Dict[str, CodeSpecification] = {}
        if data_dir is not None and data_dir.is_dir():
            self._load_directory(data_dir)

    def _load_directory(self, data_dir: Path) -> None:
        for path in sorted(data_dir.glob("*.json")):
            try:
                self.register(load_code_file(path))
            except CodeStructureError as exc:
                logger.warning(f"Skipping malformed code file {path}: {exc}")

    def register(self, spec: CodeSpecification) -> None:
        self._codes[spec.name] = spec

    def get(self, name: str) -> Optional[CodeSpecification]:
        return self._codes.get(name)

    def get_all(self, active_only: bool = True) -> Dict[str, CodeSpecification]:
        if active_only:
            return {name: spec for name, spec in self._codes.items() if spec.active}
        return dict(self._codes)

    def names(self) -> List[str]:
        return sorted(self._codes)


code_registry = CodeRegistry()


def get_code(name: str = DEFAULT_CODE) -> CsocCode:
    spec = code_registry.get(name)
    if spec is None:
        raise KeyError(f"unknown code {name!r}; known: {code_registry.names()}")
    return spec.code
