"""Plant knowledge base: per-species shape priors used for sizing boxes.

Three facts rule every layout: each species keeps a fixed width-to-height
ratio, foreground heights encode relative plant sizes, and each step back in
depth shrinks a plant by a constant scale.  The builtin table covers common
garden species plus two hardscape entries; projects with their own palette
load a JSON file of the same shape.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, UnknownSpecies

CATEGORIES = ("tree", "shrub", "flower", "structure")

DEFAULT_DEPTH_SCALE = 0.8


@dataclass(frozen=True)
class PlantSpec:
    """Shape prior for one species.

    `canonical_height` is the box height in pixels at depth 0 on the default
    512px canvas; `aspect_ratio` is width divided by height.
    """

    species: str
    category: str
    aspect_ratio: float
    canonical_height: int

    def validate(self) -> None:
        if not self.species or not self.species.strip():
            raise ConfigError("species name must be non-empty")
        if self.category not in CATEGORIES:
            raise ConfigError(
                f"{self.species!r}: category {self.category!r} not in {CATEGORIES}"
            )
        if not (0.1 <= self.aspect_ratio <= 10.0):
            raise ConfigError(
                f"{self.species!r}: aspect ratio {self.aspect_ratio} out of range"
            )
        if self.canonical_height <= 0:
            raise ConfigError(f"{self.species!r}: canonical height must be positive")


@dataclass(frozen=True)
class PlantKnowledgeBase:
    entries: tuple[PlantSpec, ...]
    depth_scale: float = DEFAULT_DEPTH_SCALE

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "_by_name", {e.species.lower(): e for e in self.entries})

    def validate(self) -> None:
        if not self.entries:
            raise ConfigError("knowledge base must contain at least one species")
        if not (0.0 < self.depth_scale < 1.0):
            raise ConfigError(f"depth scale {self.depth_scale} must lie in (0, 1)")
        seen = set()
        for spec in self.entries:
            spec.validate()
            key = spec.species.lower()
            if key in seen:
                raise ConfigError(f"duplicate species {spec.species!r}")
            seen.add(key)

    def species_names(self) -> tuple[str, ...]:
        return tuple(e.species for e in self.entries)

    def __contains__(self, species: str) -> bool:
        return species.lower() in self._by_name

    def get(self, species: str) -> PlantSpec:
        spec = self._by_name.get(species.lower())
        if spec is None:
            raise UnknownSpecies(f"species {species!r} is not in the knowledge base")
        return spec

    def to_json_dict(self) -> dict:
        return {
            "depth_scale": self.depth_scale,
            "species": [
                {
                    "species": e.species,
                    "category": e.category,
                    "aspect_ratio": e.aspect_ratio,
                    "canonical_height": e.canonical_height,
                }
                for e in self.entries
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PlantKnowledgeBase":
        try:
            entries = tuple(
                PlantSpec(
                    species=str(e["species"]),
                    category=str(e["category"]),
                    aspect_ratio=float(e["aspect_ratio"]),
                    canonical_height=int(e["canonical_height"]),
                )
                for e in data["species"]
            )
            kb = cls(entries=entries, depth_scale=float(data.get("depth_scale", DEFAULT_DEPTH_SCALE)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed knowledge base document: {exc}") from exc
        kb.validate()
        return kb

    @classmethod
    def load(cls, path: str | Path) -> "PlantKnowledgeBase":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read knowledge base {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"knowledge base {path} is not valid JSON: {exc}") from exc
        return cls.from_json_dict(data)


# Canonical heights are tuned so integer rounding at depths 0..4 perturbs
# height ratios by well under a percent; keep that property when editing.
_BUILTIN = (
    PlantSpec("dogwood", "tree", 0.95, 180),
    PlantSpec("cherry tree", "tree", 1.05, 190),
    PlantSpec("japanese maple", "tree", 1.10, 170),
    PlantSpec("weeping willow", "tree", 1.20, 200),
    PlantSpec("pine", "tree", 0.60, 220),
    PlantSpec("banyan", "tree", 1.30, 185),
    PlantSpec("boxwood", "shrub", 1.50, 120),
    PlantSpec("hydrangea", "shrub", 1.40, 125),
    PlantSpec("azalea", "shrub", 1.60, 110),
    PlantSpec("daisy", "flower", 0.80, 90),
    PlantSpec("white tulip", "flower", 0.55, 95),
    PlantSpec("lavender", "flower", 0.90, 80),
    PlantSpec("rose", "flower", 0.70, 100),
    PlantSpec("house", "structure", 1.50, 160),
    PlantSpec("garden arch", "structure", 0.75, 150),
)


def builtin_knowledge_base() -> PlantKnowledgeBase:
    return PlantKnowledgeBase(entries=_BUILTIN)
