"""Named example networks and the random network generator."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from .config import PresetDefaults, RegNetConfig, get_default_config
from .model import NetworkSpec, injectivity_analysis, require_valid
from .numerics import parse_rational

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, int, float, str]


def _rate(a: Optional[Scalar], defaults: PresetDefaults) -> Fraction:
	return parse_rational(a) if a is not None else defaults.a


def _threshold(value: Optional[Scalar], defaults: PresetDefaults) -> Fraction:
	return parse_rational(value) if value is not None else defaults.threshold


def _zeros(d: int) -> List[List[object]]:
	return [[0] * d for _ in range(d)]


def _build(
	K: List[List[object]],
	T: List[List[object]],
	s: List[List[object]],
	a: Fraction,
	names: Sequence[str],
) -> NetworkSpec:
	spec = NetworkSpec.from_matrices(K, T, s, a, names=names)
	require_valid(spec)
	return spec


def self_inhibitor(a: Optional[Scalar] = None, T: Optional[Scalar] = None, *, defaults: Optional[PresetDefaults] = None) -> NetworkSpec:
	"""One unit repressing itself: ``x -> a*x + (1-a)*H(T - x)``."""

	params = defaults or PresetDefaults()
	return _build([[1]], [[_threshold(T, params)]], [[-1]], _rate(a, params), ("x",))


def circuit(
	d: int,
	signs: Optional[Sequence[int]] = None,
	a: Optional[Scalar] = None,
	T: Union[None, Scalar, Sequence[Scalar]] = None,
	*,
	names: Optional[Sequence[str]] = None,
	defaults: Optional[PresetDefaults] = None,
) -> NetworkSpec:
	"""Circuit ``0 -> 1 -> ... -> d-1 -> 0``; ``signs[i]`` and ``T[i]`` belong to the arrow leaving unit ``i``."""

	params = defaults or PresetDefaults()
	if d < 1:
		raise ValueError(f"A circuit needs at least one unit, got {d}")
	arrow_signs = list(signs) if signs is not None else [1] * d
	if len(arrow_signs) != d or any(sign not in (-1, 1) for sign in arrow_signs):
		raise ValueError(f"Expected {d} signs in {{-1, 1}}, got {arrow_signs}")
	if T is None or isinstance(T, (Fraction, int, float, str)):
		thresholds = [_threshold(T, params)] * d
	else:
		thresholds = [parse_rational(value) for value in T]
		if len(thresholds) != d:
			raise ValueError(f"Expected {d} thresholds, got {len(thresholds)}")
	K, Tm, s = _zeros(d), _zeros(d), _zeros(d)
	for i in range(d):
		j = (i + 1) % d
		K[i][j] = 1
		Tm[i][j] = thresholds[i]
		s[i][j] = arrow_signs[i]
	return _build(K, Tm, s, _rate(a, params), names or tuple(str(i + 1) for i in range(d)))


def toggle_switch(
	a: Optional[Scalar] = None,
	T12: Optional[Scalar] = None,
	T21: Optional[Scalar] = None,
	*,
	defaults: Optional[PresetDefaults] = None,
) -> NetworkSpec:
	"""Two mutually repressing units (a positive 2-circuit)."""

	params = defaults or PresetDefaults()
	return circuit(2, (-1, -1), a, (_threshold(T12, params), _threshold(T21, params)), names=("1", "2"), defaults=params)


def negative_2_circuit(
	a: Optional[Scalar] = None,
	T12: Optional[Scalar] = None,
	T21: Optional[Scalar] = None,
	*,
	defaults: Optional[PresetDefaults] = None,
) -> NetworkSpec:
	"""Unit 1 activates unit 2, which represses unit 1."""

	params = defaults or PresetDefaults()
	return circuit(2, (1, -1), a, (_threshold(T12, params), _threshold(T21, params)), names=("1", "2"), defaults=params)


def repressilator(
	a: Optional[Scalar] = None,
	thresholds: Union[None, Scalar, Sequence[Scalar]] = None,
	*,
	defaults: Optional[PresetDefaults] = None,
) -> NetworkSpec:
	"""Negative 3-circuit of repressions."""

	return circuit(3, (-1, -1, -1), a, thresholds, names=("1", "2", "3"), defaults=defaults)


def three_loops(
	a: Optional[Scalar] = None,
	thresholds: Optional[Scalar] = None,
	*,
	defaults: Optional[PresetDefaults] = None,
) -> NetworkSpec:
	"""Three disjoint 2-loops ``i_n <-> end_n`` with isolated ends a, b and c.

	Each driver activates its isolated end, which represses it back.
	"""

	params = defaults or PresetDefaults()
	names = ("i1", "a", "i2", "b", "i3", "c")
	threshold = _threshold(thresholds, params)
	K, T, s = _zeros(6), _zeros(6), _zeros(6)
	for driver in (0, 2, 4):
		end = driver + 1
		K[driver][end] = K[end][driver] = 1
		T[driver][end] = T[end][driver] = threshold
		s[driver][end], s[end][driver] = 1, -1
	return _build(K, T, s, _rate(a, params), names)


def p53(
	a: Optional[Scalar] = None,
	thresholds: Optional[Scalar] = None,
	*,
	defaults: Optional[PresetDefaults] = None,
) -> NetworkSpec:
	"""p53 regulation: p53 -> m, m -| p53, p53 -| b, p53 -| c, b -> c, c -> b.

	Columns b and c split their weight equally between their two regulators.
	"""

	params = defaults or PresetDefaults()
	names = ("p53", "m", "b", "c")
	threshold = _threshold(thresholds, params)
	half = Fraction(1, 2)
	arrows = {
		(0, 1): (1, 1),
		(1, 0): (1, -1),
		(0, 2): (half, -1),
		(0, 3): (half, -1),
		(2, 3): (half, 1),
		(3, 2): (half, 1),
	}
	K, T, s = _zeros(4), _zeros(4), _zeros(4)
	for (i, j), (weight, sign) in arrows.items():
		K[i][j], T[i][j], s[i][j] = weight, threshold, sign
	return _build(K, T, s, _rate(a, params), names)


@dataclass(slots=True)
class PresetRegistry:
	"""Name -> builder table; every builder accepts ``a`` plus its own threshold arguments."""

	builders: Dict[str, Callable[..., NetworkSpec]] = field(
		default_factory=lambda: {
			"self_inhibitor": self_inhibitor,
			"circuit": circuit,
			"toggle_switch": toggle_switch,
			"negative_2_circuit": negative_2_circuit,
			"repressilator": repressilator,
			"three_loops": three_loops,
			"p53": p53,
		}
	)

	def names(self) -> List[str]:
		return sorted(self.builders)

	def __contains__(self, name: object) -> bool:
		return name in self.builders

	def build(self, name: str, *args, **kwargs) -> NetworkSpec:
		try:
			builder = self.builders[name]
		except KeyError as exc:
			raise KeyError(f"Unknown preset {name!r}; available: {', '.join(self.names())}") from exc
		spec = builder(*args, **kwargs)
		logger.debug("Preset %s built with a=%s", name, spec.a)
		return spec

	def iter_specs(self) -> Iterable[NetworkSpec]:
		for name in self.names():
			if name == "circuit":
				yield self.build(name, 3)
			else:
				yield self.build(name)


def build_preset(
	name: str,
	*,
	a: Optional[Scalar] = None,
	threshold: Optional[Scalar] = None,
	dimension: Optional[int] = None,
	signs: Optional[Sequence[int]] = None,
	config: Optional[RegNetConfig] = None,
) -> NetworkSpec:
	"""Build a preset from the uniform CLI parameters (one rate, one threshold)."""

	cfg = config or get_default_config()
	registry = PresetRegistry()
	defaults = cfg.presets
	if name == "circuit":
		return registry.build(name, dimension or 2, signs, a, threshold, defaults=defaults)
	if name == "self_inhibitor":
		return registry.build(name, a, threshold, defaults=defaults)
	if name in ("toggle_switch", "negative_2_circuit"):
		return registry.build(name, a, threshold, threshold, defaults=defaults)
	return registry.build(name, a, threshold, defaults=defaults)


def random_spec(d: int, density: float, seed: int, below_a0: bool = False) -> NetworkSpec:
	"""Random valid network with integer weights 1..4 normalized per column and thresholds k/8.

	Every column gets at least one regulator. With ``below_a0`` the rate is
	``a0 * u / 100`` for a random integer ``u`` in ``1..99``.
	"""

	if d < 1:
		raise ValueError(f"d must be positive, got {d}")
	if not 0 < density <= 1:
		raise ValueError(f"density must lie in (0, 1], got {density}")
	rng = np.random.default_rng(seed)
	mask = rng.random((d, d)) < density
	for j in range(d):
		if not mask[:, j].any():
			mask[rng.integers(d), j] = True
	weights = np.where(mask, rng.integers(1, 5, size=(d, d)), 0)
	thresholds = rng.integers(1, 8, size=(d, d))
	signs = rng.choice(np.array([-1, 1]), size=(d, d))
	totals = weights.sum(axis=0)
	K = [[Fraction(int(weights[i, j]), int(totals[j])) for j in range(d)] for i in range(d)]
	T = [[Fraction(int(thresholds[i, j]), 8) if mask[i, j] else 0 for j in range(d)] for i in range(d)]
	s = [[int(signs[i, j]) if mask[i, j] else 0 for j in range(d)] for i in range(d)]
	draw = Fraction(int(rng.integers(1, 100)), 100)
	spec = NetworkSpec.from_matrices(K, T, s, draw)
	if below_a0:
		a0 = injectivity_analysis(spec).a0
		spec = spec.with_a(Fraction(a0) * draw)
	require_valid(spec)
	return spec
