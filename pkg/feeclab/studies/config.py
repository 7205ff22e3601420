"""Study configuration: a flat ``key = value`` file overridden by command-line flags."""

import logging
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, ClassVar, Optional, Union

from feeclab.core.exceptions import ValidationError
from feeclab.geometry.surfaces import SURFACES

logger = logging.getLogger(__name__)

TRUE_WORDS = frozenset({"1", "true", "yes", "on"})
FALSE_WORDS = frozenset({"0", "false", "no", "off"})


@dataclass(frozen=True)
class StudyConfig:
    """Parameters of a refinement study; levels run from ``min_level`` to ``levels − 1``."""

    surface: str = "sphere"
    k: int = 0
    s: int = 1
    r: int = 1
    levels: int = 4
    ell: int = 2
    quad_degree: int = 6
    seed: int = 42
    out: Optional[str] = None
    format: str = "csv"
    min_level: int = 0
    nev: int = 6
    trials: int = 100
    exact_geometry: bool = False
    max_concurrent: int = 1
    project_load: bool = True
    FORMATS: ClassVar[tuple[str, ...]] = ("csv", "json")
    ORDERS: ClassVar[tuple[int, ...]] = (1, 2)

    def __post_init__(self) -> None:
        """Validate parameter combinations after initialization."""
        if self.surface not in SURFACES:
            raise ValidationError("surface", f"choose from {sorted(SURFACES)}", self.surface)
        if self.k not in (0, 1, 2):
            raise ValidationError("k", "must be 0, 1 or 2", self.k)
        if self.s not in self.ORDERS:
            raise ValidationError("s", f"must be one of {self.ORDERS}", self.s)
        if self.r not in self.ORDERS:
            raise ValidationError("r", f"must be one of {self.ORDERS}", self.r)
        if self.r == 2 and self.k != 0:  # noqa: PLR2004
            raise ValidationError("r", "r = 2 elements exist for k = 0 only", self.r)
        if self.surface == "torus" and (self.s, self.r) != (1, 1):
            raise ValidationError("surface", "the torus supports s = r = 1 only", self.surface)
        if not 0 <= self.min_level < self.levels:
            raise ValidationError(
                "min_level", f"must lie in 0..{self.levels - 1}", self.min_level
            )
        if self.quad_degree < 2 * self.s:
            raise ValidationError(
                "quad_degree", f"must be at least {2 * self.s}", self.quad_degree
            )
        if self.format not in self.FORMATS:
            raise ValidationError("format", f"must be one of {self.FORMATS}", self.format)
        for name in ("nev", "trials", "max_concurrent"):
            if getattr(self, name) < 1:
                raise ValidationError(name, "must be positive", getattr(self, name))

    @property
    def family(self) -> str:
        """Element family implied by r."""
        return "lagrange2" if self.r == 2 else "whitney"  # noqa: PLR2004

    @property
    def level_range(self) -> list[int]:
        """Refinement levels of the study."""
        return list(range(self.min_level, self.levels))

    def with_overrides(self, **overrides: Any) -> "StudyConfig":
        """Copy with non-None overrides applied; string values are coerced."""
        known = {f.name: f for f in fields(self)}
        values = {}
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in known:
                raise ValidationError(key, "unknown configuration key")
            if isinstance(value, str):
                value = _coerce(key, known[key].default, value)
            values[key] = value
        return replace(self, **values)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "StudyConfig":
        """Load a ``key = value`` file; ``#`` starts a comment.

        Raises
        ------
            ValidationError: Unknown key, malformed line or invalid value

        """
        entries: dict[str, str] = {}
        for number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValidationError("config", f"line {number}: expected key = value", raw)
            entries[key.strip().replace("-", "_")] = value.strip()
        logger.debug("loaded %d configuration keys from %s", len(entries), path)
        return cls().with_overrides(**entries)

    def to_dict(self) -> dict[str, Any]:
        """Convert configuration to dictionary.

        Returns
        -------
            Dictionary representation of the configuration

        """
        return asdict(self)


def _coerce(key: str, default: Any, value: str) -> Any:
    if isinstance(default, bool):
        word = value.lower()
        if word in TRUE_WORDS:
            return True
        if word in FALSE_WORDS:
            return False
        raise ValidationError(key, "expected a boolean", value)
    if isinstance(default, int):
        try:
            return int(value)
        except ValueError:
            raise ValidationError(key, "expected an integer", value) from None
    if default is None and value.lower() in ("", "none"):
        return None
    return value
