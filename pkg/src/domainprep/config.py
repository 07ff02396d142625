"""Pipeline configuration: a single JSON file, every value overridable by a
command-line flag of the same dotted name (e.g. ``--sizes.slot_budget 100``).

Relative paths in the file resolve against the config file's directory, so
a checked-in config keeps working from any working directory.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

from .corpus import DEFAULT_ABBREVIATIONS, CleaningConfig


@dataclass
class PathsConfig:
    corpus_dir: str | None = None
    base_vocab: str | None = None
    classification_overrides: str | None = None
    club_overrides: str | None = None
    output_dir: str = "out"


@dataclass
class ThresholdsConfig:
    formula_density: float = 0.15
    formula_equals_limit: int = 2
    min_prefix_len: int = 5
    min_pair_freq: int = 2


@dataclass
class SizesConfig:
    custom_vocab_target: int = 30_000
    slot_budget: int = 429


@dataclass
class SplitConfig:
    dev_fraction: float = 0.1
    seed: int = 0


@dataclass
class CleaningSection:
    abbreviations: list[str] = field(
        default_factory=lambda: list(DEFAULT_ABBREVIATIONS))


@dataclass
class PipelineConfig:
    paths: PathsConfig = field(default_factory=PathsConfig)
    thresholds: ThresholdsConfig = field(default_factory=ThresholdsConfig)
    sizes: SizesConfig = field(default_factory=SizesConfig)
    split: SplitConfig = field(default_factory=SplitConfig)
    cleaning: CleaningSection = field(default_factory=CleaningSection)

    def validate(self) -> None:
        t = self.thresholds
        if not 0 < t.formula_density <= 1:
            raise ValueError(
                f"thresholds.formula_density must lie in (0, 1], "
                f"got {t.formula_density}")
        if t.formula_equals_limit < 1:
            raise ValueError("thresholds.formula_equals_limit must be >= 1")
        if t.min_prefix_len < 3:
            raise ValueError("thresholds.min_prefix_len must be >= 3")
        if t.min_pair_freq < 1:
            raise ValueError("thresholds.min_pair_freq must be >= 1")
        if self.sizes.custom_vocab_target < 1:
            raise ValueError("sizes.custom_vocab_target must be >= 1")
        if self.sizes.slot_budget < 0:
            raise ValueError("sizes.slot_budget must be >= 0")
        if not 0 < self.split.dev_fraction < 1:
            raise ValueError(
                f"split.dev_fraction must lie in (0, 1), "
                f"got {self.split.dev_fraction}")

    def cleaning_config(self) -> CleaningConfig:
        return CleaningConfig(
            formula_density_threshold=self.thresholds.formula_density,
            formula_equals_limit=self.thresholds.formula_equals_limit,
            abbreviations=tuple(self.cleaning.abbreviations),
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


_SECTIONS = {
    "paths": PathsConfig,
    "thresholds": ThresholdsConfig,
    "sizes": SizesConfig,
    "split": SplitConfig,
    "cleaning": CleaningSection,
}

_PATH_FIELDS = ("corpus_dir", "base_vocab", "classification_overrides",
                "club_overrides", "output_dir")


def _build_section(cls: type, data: Mapping[str, Any], section: str) -> Any:
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ValueError(f"unknown config key(s) in {section!r}: {unknown}")
    return cls(**data)


def build_config(data: Mapping[str, Any],
                 base_dir: Path | None = None) -> PipelineConfig:
    """Construct and validate a PipelineConfig from nested plain data."""
    unknown = sorted(set(data) - set(_SECTIONS))
    if unknown:
        raise ValueError(f"unknown config section(s): {unknown}")
    kwargs = {
        name: _build_section(cls, data.get(name, {}) or {}, name)
        for name, cls in _SECTIONS.items()
    }
    config = PipelineConfig(**kwargs)
    if base_dir is not None:
        for name in _PATH_FIELDS:
            value = getattr(config.paths, name)
            if value is not None and not Path(value).is_absolute():
                setattr(config.paths, name, str(base_dir / value))
    config.validate()
    return config


def apply_overrides(data: dict, overrides: Mapping[str, str]) -> dict:
    """Apply dotted-name overrides onto nested config data.

    Values are parsed as JSON when possible (numbers, booleans, null) and
    kept as strings otherwise.
    """
    data = json.loads(json.dumps(data))  # deep copy
    for dotted, raw in overrides.items():
        parts = dotted.split(".")
        if len(parts) != 2:
            raise ValueError(
                f"override {dotted!r} must be of the form section.key")
        section, key = parts
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        data.setdefault(section, {})[key] = value
    return data


def load_config(path: str | Path,
                overrides: Mapping[str, str] | None = None) -> PipelineConfig:
    """Load a JSON config file, apply dotted overrides, resolve paths."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise FileNotFoundError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config root must be a JSON object")
    if overrides:
        data = apply_overrides(data, overrides)
    return build_config(data, base_dir=path.resolve().parent)
