"""Configuration primitives for the regulatory network complexity toolkit."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Literal, Optional


REPO_ROOT = Path(__file__).resolve().parents[2]

EngineMode = Literal["itinerary-exact", "injective-fast"]
NumericMode = Literal["rational", "float"]


@dataclass(slots=True)
class NumericConfig:
	"""Arithmetic used by the partition engine."""

	mode: NumericMode = "rational"
	epsilon: float = 1e-12


@dataclass(slots=True)
class EngineConfig:
	"""Settings for the dynamical partition engine."""

	mode: EngineMode = "itinerary-exact"
	max_atoms: int = 1_000_000
	max_seconds: Optional[float] = None
	keep_generations: bool = False
	check_invariants: bool = True
	predecessor_samples: int = 3
	max_indegree: int = 20


@dataclass(slots=True)
class StructureConfig:
	"""Limits for the underlying-digraph searches."""

	exhaustive_limit: int = 20
	max_independent_sets: int = 64
	max_decompositions: int = 64
	bundle_samples: int = 16


@dataclass(slots=True)
class AttractorConfig:
	"""Settings for orbit simulation and attractor extraction."""

	orbit_quantum: Fraction = Fraction(1, 10**9)
	rotation_horizon: int = 200


@dataclass(slots=True)
class PresetDefaults:
	"""Parameter defaults shared by the preset networks."""

	a: Fraction = Fraction(1, 4)
	threshold: Fraction = Fraction(1, 2)


@dataclass(slots=True)
class RegNetConfig:
	"""Container for reusable configuration across the project."""

	output_dir: Path = field(default_factory=lambda: REPO_ROOT / "results")
	seed: int = 42
	numeric: NumericConfig = field(default_factory=NumericConfig)
	engine: EngineConfig = field(default_factory=EngineConfig)
	structure: StructureConfig = field(default_factory=StructureConfig)
	attractor: AttractorConfig = field(default_factory=AttractorConfig)
	presets: PresetDefaults = field(default_factory=PresetDefaults)

	@property
	def exact(self) -> bool:
		return self.numeric.mode == "rational"

	def ensure_directories(self) -> None:
		self.output_dir.mkdir(parents=True, exist_ok=True)


def get_default_config() -> RegNetConfig:
	"""Fresh defaults; creates no directories.

	Library calls write nothing, so only ``pipeline.execute`` calls
	:meth:`RegNetConfig.ensure_directories` before saving artifacts.
	"""

	return RegNetConfig()
