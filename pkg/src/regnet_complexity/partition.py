"""Base partition, exact forward propagation of dynamical partitions and complexity traces.

Atoms of the dynamical partition at time ``t`` are tracked through their forward
images ``F^{t-1}(A)``; each step applies the affine branch selected by the atom's
current base atom and intersects the image with the base partition again. In
rational mode every endpoint at time ``t`` lives on a common integer lattice, so the
engine stores plain integers together with the lattice denominator.
"""

from __future__ import annotations

import bisect
import itertools
import logging
import math
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .config import EngineMode, RegNetConfig, get_default_config
from .model import (
    InfeasibleEnumerationError,
    InjectivityReport,
    InvalidNetworkError,
    NetworkSpec,
    OffsetSequence,
    branch_systems,
    evaluate_map,
    heaviside,
    injectivity_analysis,
    require_valid,
    validate_offsets,
)
from .numerics import FlaggedInterval, Number, Rect, interval_intersect, parse_rational, to_float

logger = logging.getLogger(__name__)

# (target unit or None for an observed cut, threshold, sign)
Cut = Tuple[Optional[int], Number, int]
ExtraCuts = Mapping[int, Sequence[Tuple[object, int]]]


class InjectivityError(ValueError):
    """Raised when injective-fast mode is requested for a non-injective network."""

    def __init__(self, report: Optional[InjectivityReport], reason: str = "") -> None:
        self.report = report
        witness = report.witness if report is not None else None
        if witness is not None:
            message = (
                f"injective-fast mode refused: branches with offsets {witness.low_offset} and "
                f"{witness.high_offset} of unit {witness.coordinate + 1} overlap on {witness.overlap} "
                f"at a={report.a}"
            )
        else:
            message = f"injective-fast mode refused: {reason or 'injectivity could not be established'}"
        super().__init__(message)


class PartitionInvariantError(RuntimeError):
    """Raised when an atom does not lie inside the base atom it is labelled with."""


class _AtomCapExceeded(Exception):
    pass


@dataclass(frozen=True, slots=True)
class InvariantViolation:
    t: int
    check: str
    detail: str


@dataclass(frozen=True, slots=True)
class CoordinatePartition:
    """Atoms of one coordinate, ascending, each with its Heaviside signature over ``cuts``."""

    atoms: Tuple[FlaggedInterval, ...]
    signatures: Tuple[Tuple[int, ...], ...]
    cuts: Tuple[Cut, ...]

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def cut_values(self) -> Tuple[Number, ...]:
        return tuple(sorted({threshold for _, threshold, _ in self.cuts}))

    def locate(self, x: Number) -> int:
        for k, atom in enumerate(self.atoms):
            if atom.contains(x):
                return k
        raise ValueError(f"{x} lies outside [0, 1]")

    def bit(self, k: int, target: int) -> int:
        for position, (cut_target, _, _) in enumerate(self.cuts):
            if cut_target == target:
                return self.signatures[k][position]
        raise KeyError(f"No cut feeds unit {target + 1}")


@dataclass(slots=True)
class BasePartition:
    """Product of the coordinate partitions; atoms are addressed by a mixed-radix symbol."""

    coordinates: Tuple[CoordinatePartition, ...]
    weights: Tuple[Tuple[Tuple[int, Number], ...], ...]
    strides: Tuple[int, ...] = field(init=False)
    _drives: Dict[int, Tuple[Number, ...]] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        sizes = self.sizes
        self.strides = tuple(math.prod(sizes[i + 1 :]) for i in range(len(sizes)))

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(coordinate) for coordinate in self.coordinates)

    @property
    def size(self) -> int:
        return math.prod(self.sizes)

    @property
    def c(self) -> int:
        return self.size - 1

    def encode(self, indices: Sequence[int]) -> int:
        return sum(k * stride for k, stride in zip(indices, self.strides))

    def decode(self, symbol: int) -> Tuple[int, ...]:
        return tuple((symbol // stride) % size for size, stride in zip(self.sizes, self.strides))

    def locate(self, point: Sequence[Number]) -> Tuple[int, ...]:
        return tuple(coordinate.locate(x) for coordinate, x in zip(self.coordinates, point))

    def symbol_of(self, point: Sequence[Number]) -> int:
        return self.encode(self.locate(point))

    def atom(self, symbol: int) -> Rect:
        return Rect(tuple(c.atoms[k] for c, k in zip(self.coordinates, self.decode(symbol))))

    def drive(self, symbol: int) -> Tuple[Number, ...]:
        """Offsets ``eta_j = sum_i K[i][j] * H(...)`` shared by every point of the atom."""

        cached = self._drives.get(symbol)
        if cached is not None:
            return cached
        indices = self.decode(symbol)
        drive = tuple(
            sum(
                (weight * self.coordinates[i].bit(indices[i], j) for i, weight in self.weights[j]),
                Fraction(0),
            )
            for j in range(self.dimension)
        )
        self._drives[symbol] = drive
        return drive


def _coordinate_partition(cuts: Tuple[Cut, ...], exact: bool) -> CoordinatePartition:
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    values = sorted({zero, one, *(threshold for _, threshold, _ in cuts)})
    pieces: List[FlaggedInterval] = []
    for lo, hi in zip(values, values[1:]):
        pieces.append(FlaggedInterval.singleton(lo))
        pieces.append(FlaggedInterval(lo, hi, False, False))
    pieces.append(FlaggedInterval.singleton(values[-1]))

    atoms: List[FlaggedInterval] = []
    signatures: List[Tuple[int, ...]] = []
    for piece in pieces:
        point = piece.lo if piece.is_singleton else (piece.lo + piece.hi) / 2
        bits = tuple(heaviside(sign, point, threshold) for _, threshold, sign in cuts)
        # Each H is monotone, so equal signatures are always adjacent.
        if signatures and signatures[-1] == bits:
            previous = atoms[-1]
            atoms[-1] = FlaggedInterval(previous.lo, piece.hi, previous.lo_closed, piece.hi_closed)
        else:
            atoms.append(piece)
            signatures.append(bits)
    return CoordinatePartition(tuple(atoms), tuple(signatures), cuts)


def build_base_partition(spec: NetworkSpec, *, extra_cuts: Optional[ExtraCuts] = None) -> BasePartition:
    """Threshold-induced partition of the cube.

    ``extra_cuts`` maps a coordinate to additional ``(threshold, sign)`` pairs that
    refine it without feeding any unit of ``spec``.
    """

    exact = spec.is_exact
    coordinates = []
    for i in range(spec.dimension):
        cuts: List[Cut] = [(j, spec.T[i][j], spec.s[i][j]) for j in spec.out_neighbors(i)]
        for threshold, sign in (extra_cuts or {}).get(i, ()):
            value = parse_rational(threshold) if exact else to_float(threshold)
            cuts.append((None, value, int(sign)))
        coordinates.append(_coordinate_partition(tuple(cuts), exact))
    weights = tuple(tuple((i, spec.K[i][j]) for i in spec.in_neighbors(j)) for j in range(spec.dimension))
    partition = BasePartition(tuple(coordinates), weights)
    logger.debug("Base partition built with sizes %s (#P=%d)", partition.sizes, partition.size)
    return partition


def _lattice_int(value: Number, scale: int) -> int:
    scaled = Fraction(value) * scale
    if scaled.denominator != 1:
        raise PartitionInvariantError(f"{value} is not on the lattice with denominator {scale}")
    return scaled.numerator


class LatticeArithmetic:
    """Integer endpoints over the denominator ``scale``; one step multiplies it by ``q``."""

    exact = True

    def __init__(self, a: Number, denominator: int) -> None:
        rate = Fraction(a)
        self.p, self.q = rate.numerator, rate.denominator
        self.denominator = denominator
        self._atoms: Dict[Tuple[int, int], Tuple[FlaggedInterval, ...]] = {}

    def initial_scale(self) -> int:
        return self.denominator

    def next_scale(self, scale: int) -> int:
        return self.q * scale

    def alignment(self, scale: int) -> int:
        return math.lcm(scale, self.denominator) // scale

    def value(self, value: Number, scale: int) -> int:
        return _lattice_int(value, scale)

    def atoms(self, i: int, atoms: Sequence[FlaggedInterval], scale: int) -> Tuple[FlaggedInterval, ...]:
        key = (i, scale)
        cached = self._atoms.get(key)
        if cached is None:
            if len(self._atoms) > 64:
                self._atoms.clear()
            cached = tuple(
                FlaggedInterval(
                    _lattice_int(atom.lo, scale),
                    _lattice_int(atom.hi, scale),
                    atom.lo_closed,
                    atom.hi_closed,
                )
                for atom in atoms
            )
            self._atoms[key] = cached
        return cached

    def image(self, side: FlaggedInterval, shift: Number, scale: int) -> FlaggedInterval:
        offset = _lattice_int(shift * (self.q - self.p), scale)
        if self.p == 0 or side.is_singleton:
            return FlaggedInterval.singleton(self.p * side.lo + offset)
        return FlaggedInterval(self.p * side.lo + offset, self.p * side.hi + offset, side.lo_closed, side.hi_closed)

    def near_cut(self, side: FlaggedInterval, i: int) -> bool:
        return False

    def export(self, value: int, scale: int) -> Fraction:
        return Fraction(value, scale)


class FloatArithmetic:
    """Binary64 endpoints with boundary-proximity and collapse bookkeeping."""

    exact = False

    def __init__(self, a: Number, partition: BasePartition, epsilon: float) -> None:
        self.a = to_float(a)
        self.epsilon = epsilon
        self.cut_values = [sorted(to_float(v) for v in coordinate.cut_values) for coordinate in partition.coordinates]
        self.collapses = 0

    def initial_scale(self) -> int:
        return 1

    def next_scale(self, scale: int) -> int:
        return 1

    def alignment(self, scale: int) -> int:
        return 1

    def value(self, value: Number, scale: int) -> float:
        return to_float(value)

    def atoms(self, i: int, atoms: Sequence[FlaggedInterval], scale: int) -> Tuple[FlaggedInterval, ...]:
        return tuple(atoms)

    def image(self, side: FlaggedInterval, shift: Number, scale: int) -> FlaggedInterval:
        offset = (1.0 - self.a) * to_float(shift)
        lo = self.a * side.lo + offset
        if self.a == 0.0 or side.is_singleton:
            return FlaggedInterval.singleton(lo)
        hi = self.a * side.hi + offset
        if not lo < hi:
            self.collapses += 1
            return FlaggedInterval.singleton(lo)
        return FlaggedInterval(lo, hi, side.lo_closed, side.hi_closed)

    def near_cut(self, side: FlaggedInterval, i: int) -> bool:
        cuts = self.cut_values[i]
        for value in (side.lo, side.hi):
            k = bisect.bisect_left(cuts, value)
            for candidate in cuts[max(k - 1, 0) : k + 1]:
                if value != candidate and abs(value - candidate) <= self.epsilon:
                    return True
        return False

    def export(self, value: float, scale: int) -> float:
        return value


@dataclass(slots=True)
class AtomNode:
    """One atom of Q^t: its current image, last base symbol, itinerary word and parent index."""

    rect: Rect
    symbol: int
    word: Optional[int]
    parent: int = -1


@dataclass(slots=True)
class Generation:
    """The atom collection Q^t together with the statistics of the step that produced it."""

    t: int
    nodes: List[AtomNode]
    scale: int
    exact: bool
    radix: int
    branching_atoms: int = 0
    max_branch: int = 0
    seconds: float = 0.0

    def __len__(self) -> int:
        return len(self.nodes)

    def export(self, side: FlaggedInterval) -> FlaggedInterval:
        if not self.exact:
            return side
        return FlaggedInterval(
            Fraction(side.lo, self.scale),
            Fraction(side.hi, self.scale),
            side.lo_closed,
            side.hi_closed,
        )

    def lattice_side(self, side: FlaggedInterval) -> Optional[FlaggedInterval]:
        if not self.exact:
            return side
        lo, hi = Fraction(side.lo) * self.scale, Fraction(side.hi) * self.scale
        if lo.denominator != 1 or hi.denominator != 1:
            return None
        return FlaggedInterval(lo.numerator, hi.numerator, side.lo_closed, side.hi_closed)

    def rect(self, index: int) -> Rect:
        return Rect(tuple(self.export(side) for side in self.nodes[index].rect.sides))

    def rects(self) -> List[Rect]:
        return [self.rect(index) for index in range(len(self.nodes))]

    def itinerary(self, index: int) -> Tuple[int, ...]:
        word = self.nodes[index].word
        if word is None:
            raise ValueError("Itineraries are not tracked in injective-fast mode")
        digits = []
        for _ in range(self.t):
            word, digit = divmod(word, self.radix)
            digits.append(digit)
        return tuple(reversed(digits))


@dataclass(frozen=True, slots=True)
class Specification:
    """Projections of one atom on the coordinates ``U`` at time ``t``."""

    coordinates: Tuple[int, ...]
    sides: Tuple[FlaggedInterval, ...]
    t: int

    @classmethod
    def of_atom(cls, generation: Generation, index: int, coordinates: Sequence[int]) -> "Specification":
        rect = generation.rect(index)
        return cls(tuple(coordinates), tuple(rect.sides[i] for i in coordinates), generation.t)


@dataclass(slots=True)
class TraceRow:
    t: int
    C: int
    branching_atoms: int
    max_branch: int
    seconds: float


@dataclass(slots=True)
class ComplexityTrace:
    rows: List[TraceRow]
    partition: BasePartition
    mode: EngineMode
    exact: bool
    injectivity: Optional[InjectivityReport]
    final: Generation
    violations: List[InvariantViolation] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    truncated: bool = False
    truncation_reason: Optional[str] = None
    generations: List[Generation] = field(default_factory=list)

    @property
    def counts(self) -> List[int]:
        return [row.C for row in self.rows]

    @property
    def t_reached(self) -> int:
        return self.rows[-1].t

    @property
    def injective(self) -> bool:
        return self.injectivity is not None and self.injectivity.injective_at_a

    @property
    def certified(self) -> bool:
        return not self.warnings

    def value_at(self, t: int) -> int:
        if not 1 <= t <= self.t_reached:
            raise IndexError(f"t={t} outside the computed range 1..{self.t_reached}")
        return self.rows[t - 1].C


def _projection(node: AtomNode, coordinates: Sequence[int]) -> Tuple[FlaggedInterval, ...]:
    return tuple(node.rect.sides[i] for i in coordinates)


class PartitionEngine:
    """Forward engine for ``Q^{t+1} = F_t(Q^t) v P``.

    ``itinerary-exact`` mode counts distinct realizable itineraries and is correct
    for any contraction rate. ``injective-fast`` mode drops the itinerary words and
    counts distinct image rects, which equals the complexity only when the network
    is coordinatewise injective.
    """

    def __init__(
        self,
        spec: NetworkSpec,
        *,
        offsets: Optional[OffsetSequence] = None,
        mode: Optional[EngineMode] = None,
        extra_cuts: Optional[ExtraCuts] = None,
        config: Optional[RegNetConfig] = None,
    ) -> None:
        cfg = config or get_default_config()
        self.config = cfg
        self.mode: EngineMode = mode or cfg.engine.mode
        if self.mode not in ("itinerary-exact", "injective-fast"):
            raise ValueError(f"Unknown engine mode {self.mode!r}")
        self.exact = cfg.numeric.mode == "rational"
        self.source_spec = spec
        self.spec = spec if self.exact else spec.to_float()
        if offsets is not None and not self.exact:
            offsets = OffsetSequence(tuple(tuple(to_float(v) for v in vector) for vector in offsets.vectors), offsets.rule)
        self.offsets = offsets
        self.partition = build_base_partition(self.spec, extra_cuts=extra_cuts)
        if self.exact:
            values = [
                *itertools.chain.from_iterable(spec.K),
                *itertools.chain.from_iterable(spec.T),
                *itertools.chain.from_iterable(c.cut_values for c in self.partition.coordinates),
            ]
            if offsets is not None:
                values.extend(itertools.chain.from_iterable(offsets.vectors))
            denominator = math.lcm(*(Fraction(v).denominator for v in values)) if values else 1
            self.arithmetic = LatticeArithmetic(spec.a, denominator)
        else:
            self.arithmetic = FloatArithmetic(self.spec.a, self.partition, cfg.numeric.epsilon)

        self.injectivity: Optional[InjectivityReport] = None
        self.branch_offsets: Optional[Tuple[Tuple[Number, ...], ...]] = None
        try:
            self.injectivity = injectivity_analysis(spec, max_indegree=cfg.engine.max_indegree)
            self.branch_offsets = branch_systems(self.spec, max_indegree=cfg.engine.max_indegree).offsets
        except InfeasibleEnumerationError as exc:
            if self.mode == "injective-fast":
                raise InjectivityError(None, str(exc)) from exc
            logger.warning("Skipping injectivity checks: %s", exc)
        if self.mode == "injective-fast" and not self.injective:
            raise InjectivityError(self.injectivity)

        self.violations: List[InvariantViolation] = []
        self.near_boundary = 0
        self.truncation_reason: Optional[str] = None
        self._rng = np.random.default_rng(cfg.seed)

    @property
    def injective(self) -> bool:
        return self.injectivity is not None and self.injectivity.injective_at_a

    @property
    def warnings(self) -> List[str]:
        messages = []
        if self.near_boundary:
            messages.append(
                f"{self.near_boundary} image endpoints fell within epsilon={self.config.numeric.epsilon} "
                "of a threshold; boundary classification is not certified"
            )
        collapses = getattr(self.arithmetic, "collapses", 0)
        if collapses:
            messages.append(f"{collapses} float images collapsed to a point and were kept as closed singletons")
        return messages

    def _shift(self, t: int) -> Optional[Tuple[Number, ...]]:
        return self.offsets.at(t) if self.offsets is not None else None

    def initial(self) -> Generation:
        scale = self.arithmetic.initial_scale()
        atoms = [
            self.arithmetic.atoms(i, coordinate.atoms, scale)
            for i, coordinate in enumerate(self.partition.coordinates)
        ]
        fast = self.mode == "injective-fast"
        nodes = []
        for symbol in range(self.partition.size):
            indices = self.partition.decode(symbol)
            rect = Rect(tuple(atoms[i][k] for i, k in enumerate(indices)))
            nodes.append(AtomNode(rect, symbol, None if fast else symbol))
        return Generation(1, nodes, scale, self.exact, self.partition.size)

    def _align(self, generation: Generation) -> Generation:
        factor = self.arithmetic.alignment(generation.scale)
        if factor == 1:
            return generation
        nodes = [
            AtomNode(
                Rect(tuple(FlaggedInterval(s.lo * factor, s.hi * factor, s.lo_closed, s.hi_closed) for s in node.rect.sides)),
                node.symbol,
                node.word,
                node.parent,
            )
            for node in generation.nodes
        ]
        return Generation(generation.t, nodes, generation.scale * factor, generation.exact, generation.radix)

    def verify(self, generation: Generation) -> None:
        """Raise :class:`PartitionInvariantError` unless every atom lies in its labelled base atom."""

        scale = generation.scale
        atoms = [
            self.arithmetic.atoms(i, coordinate.atoms, scale)
            for i, coordinate in enumerate(self.partition.coordinates)
        ]
        for index, node in enumerate(generation.nodes):
            for i, k in enumerate(self.partition.decode(node.symbol)):
                if not node.rect.sides[i].is_subset(atoms[i][k]):
                    raise PartitionInvariantError(
                        f"Atom {index} at t={generation.t} straddles base atoms on unit {i + 1}"
                    )

    def step(self, generation: Generation) -> Generation:
        started = time.perf_counter()
        generation = self._align(generation)
        scale = generation.scale
        next_scale = self.arithmetic.next_scale(scale)
        shift = self._shift(generation.t)
        cut_atoms = [
            self.arithmetic.atoms(i, coordinate.atoms, next_scale)
            for i, coordinate in enumerate(self.partition.coordinates)
        ]
        strides = self.partition.strides
        radix = self.partition.size
        fast = self.mode == "injective-fast"
        cap = self.config.engine.max_atoms
        shifts: Dict[int, Tuple[Number, ...]] = {}
        children: List[AtomNode] = []
        seen: Dict[Rect, int] = {}
        branching = max_branch = 0

        for index, node in enumerate(generation.nodes):
            node_shift = shifts.get(node.symbol)
            if node_shift is None:
                drive = self.partition.drive(node.symbol)
                node_shift = drive if shift is None else tuple(e + v for e, v in zip(drive, shift))
                shifts[node.symbol] = node_shift
            pieces = []
            for i, side in enumerate(node.rect.sides):
                image = self.arithmetic.image(side, node_shift[i], scale)
                if self.arithmetic.near_cut(image, i):
                    self.near_boundary += 1
                overlaps = []
                for k, atom in enumerate(cut_atoms[i]):
                    if atom.lo > image.hi:
                        break
                    part = interval_intersect(image, atom)
                    if part is not None:
                        overlaps.append((k, part))
                pieces.append(overlaps)
            count = math.prod(len(overlaps) for overlaps in pieces)
            if count > 1:
                branching += 1
            max_branch = max(max_branch, count)
            for combo in itertools.product(*pieces):
                symbol = sum(k * stride for (k, _), stride in zip(combo, strides))
                rect = Rect(tuple(part for _, part in combo))
                if fast:
                    if rect in seen:
                        continue
                    seen[rect] = len(children)
                    word = None
                else:
                    word = node.word * radix + symbol
                children.append(AtomNode(rect, symbol, word, index))
            if len(children) > cap:
                raise _AtomCapExceeded(f"atom cap of {cap} exceeded at t={generation.t + 1}")

        return Generation(
            generation.t + 1,
            children,
            next_scale,
            self.exact,
            radix,
            branching_atoms=branching,
            max_branch=max_branch,
            seconds=time.perf_counter() - started,
        )

    def generations(self, t_max: int) -> Iterator[Generation]:
        """Yield Q^1 .. Q^t_max, stopping early (with ``truncation_reason`` set) at a cap."""

        if t_max < 1:
            raise ValueError(f"t_max must be at least 1, got {t_max}")
        limit = self.config.engine.max_seconds
        deadline = time.monotonic() + limit if limit is not None else None
        current = self.initial()
        yield current
        while current.t < t_max:
            if deadline is not None and time.monotonic() > deadline:
                self.truncation_reason = f"time limit of {limit}s reached after t={current.t}"
                break
            try:
                following = self.step(current)
            except _AtomCapExceeded as exc:
                self.truncation_reason = str(exc)
                break
            if self.config.engine.check_invariants:
                self.check_step(current, following)
            yield following
            current = following
        if self.truncation_reason:
            logger.warning("Trace truncated: %s", self.truncation_reason)

    def _record(self, t: int, check: str, detail: str) -> None:
        logger.warning("Invariant %s violated at t=%d: %s", check, t, detail)
        self.violations.append(InvariantViolation(t, check, detail))

    def branch_images(self, side: FlaggedInterval, i: int, t: int, scale: int) -> List[FlaggedInterval]:
        """Images of ``side`` under every affine branch of coordinate ``i`` at step ``t``."""

        if self.branch_offsets is None:
            return []
        shift = self._shift(t)
        extra = shift[i] if shift is not None else 0
        return [self.arithmetic.image(side, eta + extra, scale) for eta in self.branch_offsets[i]]

    def cut_hits(self, generation: Generation) -> List[Dict[Number, List[FlaggedInterval]]]:
        """Per coordinate, map each cut value to the projections whose branch images contain it."""

        hits: List[Dict[Number, List[FlaggedInterval]]] = []
        next_scale = self.arithmetic.next_scale(generation.scale)
        for i, coordinate in enumerate(self.partition.coordinates):
            values = [self.arithmetic.value(v, next_scale) for v in coordinate.cut_values]
            owners: Dict[Number, List[FlaggedInterval]] = defaultdict(list)
            for side in {node.rect.sides[i] for node in generation.nodes}:
                images = self.branch_images(side, i, generation.t, generation.scale)
                for value in values:
                    if any(image.contains(value) for image in images):
                        owners[value].append(side)
            hits.append(owners)
        return hits

    def sample_coordinates(self) -> List[Tuple[int, ...]]:
        d = self.partition.dimension
        samples = []
        for _ in range(self.config.engine.predecessor_samples):
            mask = self._rng.random(d) < 0.5
            if not mask.any():
                mask[self._rng.integers(d)] = True
            samples.append(tuple(int(i) for i in np.flatnonzero(mask)))
        return samples

    def check_step(self, parents: Generation, children: Generation) -> None:
        t = children.t
        if len(children) < len(parents):
            self._record(t, "monotone", f"C({t})={len(children)} < C({parents.t})={len(parents)}")
        if children.max_branch > self.partition.size:
            self._record(t, "branching", f"an atom has {children.max_branch} successors > #P={self.partition.size}")
        if not self.injective:
            return
        for i, detail in check_disjoint_projections(children):
            self._record(t, "disjoint", f"unit {i + 1}: {detail}")
        hits = self.cut_hits(parents)
        next_scale = self.arithmetic.next_scale(parents.scale)
        for i, owners in enumerate(hits):
            for value, sides in owners.items():
                if len(sides) > 1:
                    cut = self.arithmetic.export(value, next_scale)
                    self._record(parents.t, "determine", f"unit {i + 1}: {len(sides)} projections reach the cut at {cut}")
        for coordinates in self.sample_coordinates():
            for detail in check_predecessor(parents, children, coordinates):
                self._record(t, "predecessor", detail)
            for detail in check_degeneracy_recursion(self, parents, children, coordinates, hits=hits):
                self._record(t, "recursion", detail)


def check_disjoint_projections(generation: Generation) -> List[Tuple[int, str]]:
    """Pairs of distinct overlapping projections, per coordinate."""

    failures = []
    dimension = len(generation.nodes[0].rect.sides) if generation.nodes else 0
    for i in range(dimension):
        sides = sorted({node.rect.sides[i] for node in generation.nodes}, key=lambda s: (s.lo, not s.lo_closed))
        reach: Optional[FlaggedInterval] = None
        for side in sides:
            if reach is not None:
                overlaps = side.lo < reach.hi or (side.lo == reach.hi and side.lo_closed and reach.hi_closed)
                if overlaps:
                    failures.append((i, f"{generation.export(reach)} meets {generation.export(side)}"))
            if reach is None or side.hi > reach.hi or (side.hi == reach.hi and side.hi_closed):
                reach = side
    return failures


def check_predecessor(parents: Generation, children: Generation, coordinates: Sequence[int]) -> List[str]:
    """Child U-projections that do not determine the parent U-projection uniquely."""

    seen: Dict[Tuple[FlaggedInterval, ...], Tuple[FlaggedInterval, ...]] = {}
    failures = []
    for child in children.nodes:
        key = _projection(child, coordinates)
        parent_key = _projection(parents.nodes[child.parent], coordinates)
        previous = seen.setdefault(key, parent_key)
        if previous != parent_key:
            failures.append(f"U={tuple(i + 1 for i in coordinates)}: one specification has two predecessors")
    return failures


def check_degeneracy_recursion(
    engine: PartitionEngine,
    parents: Generation,
    children: Generation,
    coordinates: Sequence[int],
    *,
    hits: Optional[List[Dict[Number, List[FlaggedInterval]]]] = None,
) -> List[str]:
    """Check ``N(S) <= N(P(S)) + c * sum_{i not in U} sum_j N(P(S) x J_ij)`` for every S."""

    hits = hits if hits is not None else engine.cut_hits(parents)
    multiplicity = [Counter(side for sides in owners.values() for side in sides) for owners in hits]
    outside = [i for i in range(engine.partition.dimension) if i not in coordinates]
    parent_counts: Counter = Counter()
    extra: Counter = Counter()
    for node in parents.nodes:
        key = _projection(node, coordinates)
        parent_counts[key] += 1
        extra[key] += sum(multiplicity[i].get(node.rect.sides[i], 0) for i in outside)
    child_counts: Counter = Counter()
    predecessor: Dict[Tuple[FlaggedInterval, ...], Tuple[FlaggedInterval, ...]] = {}
    for node in children.nodes:
        key = _projection(node, coordinates)
        child_counts[key] += 1
        predecessor.setdefault(key, _projection(parents.nodes[node.parent], coordinates))
    c = engine.partition.c
    failures = []
    for key, count in child_counts.items():
        parent_key = predecessor[key]
        bound = parent_counts[parent_key] + c * extra[parent_key]
        if count > bound:
            failures.append(f"U={tuple(i + 1 for i in coordinates)}: N(S)={count} > {bound}")
    return failures


def degeneracy(generation: Generation, specification: Specification) -> int:
    """N(S): number of atoms of ``generation`` whose U-projections equal the specification."""

    targets = [generation.lattice_side(side) for side in specification.sides]
    if any(target is None for target in targets):
        return 0
    return sum(
        1
        for node in generation.nodes
        if all(node.rect.sides[i] == side for i, side in zip(specification.coordinates, targets))
    )


def max_degeneracy(generation: Generation, coordinates: Sequence[int]) -> int:
    """n(U, t): the largest degeneracy over the (U, t)-specifications present."""

    if not coordinates:
        return len(generation)
    counts = Counter(_projection(node, coordinates) for node in generation.nodes)
    return max(counts.values(), default=0)


def driving_multiplicity(generation: Generation, i: int, j: int) -> int:
    """Largest number of distinct j-projections sharing one i-projection."""

    groups: Dict[FlaggedInterval, set] = defaultdict(set)
    for node in generation.nodes:
        groups[node.rect.sides[i]].add(node.rect.sides[j])
    return max((len(values) for values in groups.values()), default=0)


def iterate_generations(
    spec: NetworkSpec,
    t_max: int,
    *,
    offsets: Optional[OffsetSequence] = None,
    mode: Optional[EngineMode] = None,
    extra_cuts: Optional[ExtraCuts] = None,
    config: Optional[RegNetConfig] = None,
) -> Iterator[Generation]:
    if offsets is None:
        require_valid(spec)
    engine = PartitionEngine(spec, offsets=offsets, mode=mode, extra_cuts=extra_cuts, config=config)
    yield from engine.generations(t_max)


def step(
    generation: Generation,
    spec: NetworkSpec,
    offset: Optional[Sequence[Number]] = None,
    *,
    config: Optional[RegNetConfig] = None,
) -> Generation:
    """One propagation step ``Q^{t+1} = F_t(Q^t) v P`` of an existing generation."""

    offsets = OffsetSequence.constant(offset) if offset is not None else None
    engine = PartitionEngine(spec, offsets=offsets, config=config)
    engine.verify(generation)
    return engine.step(generation)


def _run_trace(
    spec: NetworkSpec,
    t_max: int,
    *,
    offsets: Optional[OffsetSequence],
    mode: Optional[EngineMode],
    extra_cuts: Optional[ExtraCuts],
    config: Optional[RegNetConfig],
) -> ComplexityTrace:
    cfg = config or get_default_config()
    engine = PartitionEngine(spec, offsets=offsets, mode=mode, extra_cuts=extra_cuts, config=cfg)
    rows: List[TraceRow] = []
    kept: List[Generation] = []
    last: Optional[Generation] = None
    for generation in engine.generations(t_max):
        rows.append(
            TraceRow(generation.t, len(generation), generation.branching_atoms, generation.max_branch, generation.seconds)
        )
        logger.debug(
            "t=%d C=%d branching=%d max_branch=%d (%.3fs)",
            generation.t,
            len(generation),
            generation.branching_atoms,
            generation.max_branch,
            generation.seconds,
        )
        if cfg.engine.keep_generations:
            kept.append(generation)
        last = generation
    assert last is not None
    trace = ComplexityTrace(
        rows=rows,
        partition=engine.partition,
        mode=engine.mode,
        exact=engine.exact,
        injectivity=engine.injectivity,
        final=last,
        violations=list(engine.violations),
        warnings=engine.warnings,
        truncated=engine.truncation_reason is not None,
        truncation_reason=engine.truncation_reason,
        generations=kept,
    )
    logger.info(
        "Complexity trace finished at t=%d with C=%d (%s, %s arithmetic, %d invariant violations)",
        trace.t_reached,
        rows[-1].C,
        engine.mode,
        "rational" if engine.exact else "float",
        len(trace.violations),
    )
    for message in trace.warnings:
        logger.warning(message)
    return trace


def complexity_trace(
    spec: NetworkSpec,
    t_max: int,
    mode: Optional[EngineMode] = None,
    *,
    extra_cuts: Optional[ExtraCuts] = None,
    config: Optional[RegNetConfig] = None,
) -> ComplexityTrace:
    """C(1) .. C(t_max) of an autonomous network."""

    require_valid(spec)
    return _run_trace(spec, t_max, offsets=None, mode=mode, extra_cuts=extra_cuts, config=config)


def sequence_trace(
    spec: NetworkSpec,
    offsets: OffsetSequence,
    t_max: int,
    mode: Optional[EngineMode] = None,
    *,
    extra_cuts: Optional[ExtraCuts] = None,
    config: Optional[RegNetConfig] = None,
) -> ComplexityTrace:
    """Complexity of the sequence ``F_1, F_2, ...`` driven by per-step offsets.

    The offsets shift every branch of a coordinate by the same amount, so
    coordinatewise injectivity of each ``F_t`` is the one of the undriven map.
    """

    require_valid(spec, skip=("normalization",))
    violations = validate_offsets(spec, offsets)
    if violations:
        raise InvalidNetworkError(violations)
    horizon = offsets.horizon
    if horizon is not None and t_max > horizon + 1:
        logger.warning("Finite offset sequence defines %d maps; stopping at t=%d", horizon, horizon + 1)
        t_max = horizon + 1
    return _run_trace(spec, t_max, offsets=offsets, mode=mode, extra_cuts=extra_cuts, config=config)


def _representative(atom: FlaggedInterval) -> Number:
    return atom.lo if atom.is_singleton else (atom.lo + atom.hi) / 2


def grid_oracle_complexity(spec: NetworkSpec, t: int, resolution: int) -> int:
    """Distinct length-``t`` itineraries over a rational grid of initial conditions.

    The grid holds ``resolution`` evenly spaced values per axis plus one point inside
    every base atom; the count is a lower bound on C(t).
    """

    require_valid(spec)
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    partition = build_base_partition(spec)
    axes = []
    for coordinate in partition.coordinates:
        values = {Fraction(k, resolution - 1) for k in range(resolution)}
        values.update(_representative(atom) for atom in coordinate.atoms)
        axes.append(sorted(values))
    itineraries = set()
    for point in itertools.product(*axes):
        x: Tuple[Number, ...] = point
        word = []
        for position in range(t):
            word.append(partition.symbol_of(x))
            if position + 1 < t:
                x = evaluate_map(x, spec)
        itineraries.add(tuple(word))
    return len(itineraries)
