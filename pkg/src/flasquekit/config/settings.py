from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import yaml

from flasquekit.utils.errors import InvalidInputError

PACKAGE_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT_SETTINGS_PATH = Path(PACKAGE_ROOT) / "config" / "settings.yaml"


@dataclass(frozen=True)
class EngineSettings:
    subgroup_order_bound: int = 64
    nonzero_budget: int = 5_000_000
    permutation_search_effort: int = 2000
    enumeration_limit: int = 4096
    threads: int = 1
    stretch_max_order: int = 27

    def __post_init__(self) -> None:
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidInputError(f"setting {field.name!r} must be a positive integer, got {value!r}")

    def with_overrides(self, **values: Any) -> "EngineSettings":
        updates = {key: value for key, value in values.items() if value is not None}
        unknown = sorted(set(updates) - {f.name for f in dataclasses.fields(self)})
        if unknown:
            raise InvalidInputError(f"unknown settings: {', '.join(unknown)}")
        return dataclasses.replace(self, **updates)


def load_settings(path: str | Path | None = None) -> EngineSettings:
    config_path = Path(path).resolve() if path is not None else DEFAULT_SETTINGS_PATH
    if config_path.is_dir():
        config_path = config_path / "settings.yaml"
    if not config_path.exists():
        raise InvalidInputError(f"settings file not found: {config_path}")
    raw = _load_raw_config(config_path)
    if not isinstance(raw, Mapping):
        raise InvalidInputError("settings file must contain a mapping")
    return EngineSettings().with_overrides(**dict(raw))


def _load_raw_config(config_path: Path) -> Any:
    with config_path.open("r", encoding="utf-8") as f:
        if config_path.suffix.lower() in {".yaml", ".yml"}:
            return yaml.safe_load(f) or {}
        return json.load(f)


class FlasqueKitConfig:
    """Active engine settings, consulted when a call passes no explicit bound."""

    SETTINGS = EngineSettings()

    @classmethod
    def configure(cls, settings: EngineSettings) -> None:
        cls.SETTINGS = settings

    @classmethod
    def current(cls) -> EngineSettings:
        return cls.SETTINGS


__all__ = ["DEFAULT_SETTINGS_PATH", "EngineSettings", "FlasqueKitConfig", "PACKAGE_ROOT", "load_settings"]
