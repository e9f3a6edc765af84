"""Orbits, stabilization of the complexity and exact periodic attractors."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .config import RegNetConfig, get_default_config
from .model import NetworkSpec, Point, evaluate_map, heaviside_term, require_valid
from .numerics import Number, Rect, parse_rational, to_float
from .partition import BasePartition, ComplexityTrace, Generation, PartitionEngine, build_base_partition

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class Orbit:
    """Exact iterates ``x^0 .. x^{t_max-1}`` with their base-atom symbols.

    ``cycle`` is ``(transient, period)``. It is exact when a point recurs exactly and
    heuristic when only the quantized state recurs.
    """

    initial: Point
    points: List[Point]
    itinerary: List[int]
    cycle: Optional[Tuple[int, int]] = None
    exact_cycle: bool = False
    boundary_hits: List[int] = field(default_factory=list)


def _on_threshold(point: Sequence[Number], spec: NetworkSpec) -> bool:
    return any(point[i] == spec.T[i][j] for i, j in spec.arrows)


def simulate_orbit(
    spec: NetworkSpec,
    x0: Sequence[object],
    t_max: int,
    *,
    partition: Optional[BasePartition] = None,
    config: Optional[RegNetConfig] = None,
) -> Orbit:
    cfg = config or get_default_config()
    require_valid(spec)
    if t_max < 1:
        raise ValueError(f"t_max must be at least 1, got {t_max}")
    partition = partition or build_base_partition(spec)
    start = tuple(parse_rational(v) for v in x0) if spec.is_exact else tuple(to_float(v) for v in x0)
    quantum = cfg.attractor.orbit_quantum
    orbit = Orbit(initial=start, points=[], itinerary=[])
    exact_seen: Dict[Point, int] = {}
    quantized_seen: Dict[tuple, int] = {}
    x: Point = start
    for t in range(t_max):
        symbol = partition.symbol_of(x)
        orbit.points.append(x)
        orbit.itinerary.append(symbol)
        if _on_threshold(x, spec):
            orbit.boundary_hits.append(t)
            logger.debug("Orbit sits on a threshold at t=%d", t)
        if not orbit.exact_cycle:
            first = exact_seen.setdefault(x, t)
            if first != t:
                orbit.cycle = (first, t - first)
                orbit.exact_cycle = True
            elif orbit.cycle is None:
                key = (symbol, tuple(math.floor(v / quantum) for v in x))
                first = quantized_seen.setdefault(key, t)
                if first != t:
                    orbit.cycle = (first, t - first)
        if t + 1 < t_max:
            x = evaluate_map(x, spec)
    return orbit


def detect_stabilization(trace: Union[ComplexityTrace, Sequence[int]]) -> Optional[int]:
    """Smallest ``tau`` with ``C(tau + 1) = C(tau)`` inside the computed horizon."""

    counts = trace.counts if isinstance(trace, ComplexityTrace) else list(trace)
    for tau, (current, following) in enumerate(zip(counts, counts[1:]), start=1):
        if current == following:
            return tau
    return None


@dataclass(slots=True)
class PeriodicOrbit:
    """Periodic orbit read off one cycle of the atom successor map.

    Over the cycle each coordinate follows ``x -> slope * x + intercept``; the
    orbit starts at its fixed point ``intercept / (1 - slope)``.
    """

    period: int
    atoms: Tuple[int, ...]
    symbols: Tuple[int, ...]
    slope: Number
    intercepts: Point
    points: List[Point]
    distance: Optional[Number]
    degenerate: bool
    reason: str = ""

    @property
    def minimal_period(self) -> int:
        for k in range(1, self.period + 1):
            if self.period % k == 0 and all(self.points[i] == self.points[i % k] for i in range(self.period)):
                return k
        return self.period


def distance_to_discontinuity(items: Sequence[Union[Point, Rect]], spec: NetworkSpec) -> Optional[Number]:
    """Smallest coordinate distance from the points or rects to an active threshold."""

    best: Optional[Number] = None
    for item in items:
        for i, j in spec.arrows:
            threshold = spec.T[i][j]
            if isinstance(item, Rect):
                gap = item.sides[i].distance_to(threshold)
            else:
                gap = abs(item[i] - threshold)
            if best is None or gap < best:
                best = gap
    return best


@dataclass(slots=True)
class SuccessorMap:
    successor: List[int]
    cycles: List[List[int]]
    transients: List[int]


def successor_map(parents: Generation, children: Generation) -> SuccessorMap:
    """Atom-level map ``P^tau -> P^tau`` at a stabilization time, with its cycle decomposition."""

    if len(children) != len(parents):
        raise ValueError(f"C({children.t})={len(children)} differs from C({parents.t})={len(parents)}")
    offspring = [0] * len(parents)
    for child in children.nodes:
        offspring[child.parent] += 1
    if any(count != 1 for count in offspring):
        raise ValueError("The successor map is not a function: some atom does not have exactly one successor")
    if any(node.word is None for node in parents.nodes):
        raise ValueError("Successor maps need itinerary words (itinerary-exact mode)")
    index = {node.word: k for k, node in enumerate(parents.nodes)}
    tail = parents.radix**parents.t
    successor = [0] * len(parents)
    for child in children.nodes:
        shifted = child.word % tail
        if shifted not in index:
            raise ValueError(f"Shifted itinerary of atom {child.parent} is not an atom at t={parents.t}")
        successor[child.parent] = index[shifted]

    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(successor)))
    graph.add_edges_from(enumerate(successor))
    cycles = []
    for cycle in nx.simple_cycles(graph):
        start = min(cycle)
        ordered = [start]
        while successor[ordered[-1]] != start:
            ordered.append(successor[ordered[-1]])
        cycles.append(ordered)
    cycles.sort(key=lambda cycle: cycle[0])
    on_cycle = [k for cycle in cycles for k in cycle]
    depth = nx.multi_source_dijkstra_path_length(graph.reverse(copy=False), on_cycle)
    transients = [int(depth[k]) for k in range(len(successor))]
    return SuccessorMap(successor, cycles, transients)


def extract_periodic_orbits(
    spec: NetworkSpec,
    parents: Generation,
    children: Generation,
    *,
    partition: Optional[BasePartition] = None,
    successors: Optional[SuccessorMap] = None,
) -> List[PeriodicOrbit]:
    """Exact periodic orbits, one per cycle of the successor map at stabilization."""

    partition = partition or build_base_partition(spec)
    successors = successors or successor_map(parents, children)
    head = partition.size ** (parents.t - 1)
    a = spec.a
    orbits = []
    for cycle in successors.cycles:
        symbols = tuple(parents.nodes[k].word // head for k in cycle)
        period = len(cycle)
        intercepts = [Fraction(0) if spec.is_exact else 0.0] * spec.dimension
        for symbol in symbols:
            drive = partition.drive(symbol)
            intercepts = [a * b + (1 - a) * eta for b, eta in zip(intercepts, drive)]
        slope = a**period
        x = tuple(b / (1 - slope) for b in intercepts)
        points = [x]
        reasons = []
        for k, symbol in enumerate(symbols):
            if not partition.atom(symbol).contains(points[-1]):
                reasons.append(f"point {k} leaves its atom")
            following = evaluate_map(points[-1], spec)
            if k + 1 < period:
                points.append(following)
            elif following != points[0]:
                reasons.append("orbit does not close")
        distance = distance_to_discontinuity(points, spec)
        if distance is not None and distance == 0:
            reasons.append("orbit meets the discontinuity set")
        orbit = PeriodicOrbit(
            period=period,
            atoms=tuple(cycle),
            symbols=symbols,
            slope=slope,
            intercepts=tuple(intercepts),
            points=points,
            distance=distance,
            degenerate=bool(reasons),
            reason="; ".join(reasons),
        )
        if orbit.degenerate:
            logger.warning("Degenerate (ghost) periodic orbit of period %d: %s", period, orbit.reason)
        orbits.append(orbit)
    return orbits


@dataclass(slots=True)
class AttractorReport:
    horizon: int
    counts: List[int]
    tau: Optional[int]
    successor: List[int] = field(default_factory=list)
    cycles: List[List[int]] = field(default_factory=list)
    transients: List[int] = field(default_factory=list)
    orbits: List[PeriodicOrbit] = field(default_factory=list)
    distance: Optional[Number] = None
    truncated: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def multiperiodic(self) -> bool:
        return self.tau is not None and bool(self.orbits) and not any(orbit.degenerate for orbit in self.orbits)


def analyze_attractor(
    spec: NetworkSpec,
    t_max: int,
    *,
    config: Optional[RegNetConfig] = None,
) -> AttractorReport:
    """Run the engine until ``C(tau + 1) = C(tau)`` and extract the finite attractor."""

    cfg = config or get_default_config()
    require_valid(spec)
    engine = PartitionEngine(spec, mode="itinerary-exact", config=cfg)
    counts: List[int] = []
    previous: Optional[Generation] = None
    stabilized: Optional[Tuple[Generation, Generation]] = None
    for generation in engine.generations(t_max + 1):
        counts.append(len(generation))
        if previous is not None and len(previous) == len(generation):
            stabilized = (previous, generation)
            break
        previous = generation
    report = AttractorReport(horizon=len(counts), counts=counts, tau=None, truncated=engine.truncation_reason is not None)
    if stabilized is None:
        report.notes.append(f"no stabilization C(t+1)=C(t) within t <= {len(counts)}")
        logger.info("No stabilization within the horizon of %d steps", len(counts))
        return report
    parents, children = stabilized
    successors = successor_map(parents, children)
    report.tau = parents.t
    report.successor = successors.successor
    report.cycles = successors.cycles
    report.transients = successors.transients
    report.orbits = extract_periodic_orbits(spec, parents, children, partition=engine.partition, successors=successors)
    distances = [orbit.distance for orbit in report.orbits if orbit.distance is not None]
    report.distance = min(distances) if distances else None
    c_tau = len(parents)
    longest = max(successors.transients) + max(len(cycle) for cycle in successors.cycles)
    if len(report.cycles) > c_tau or longest > c_tau * c_tau:
        report.notes.append("cycle structure exceeds the pigeonhole bound")
    report.notes.append(f"limit set approximated at the horizon t={report.horizon}")
    logger.info(
        "Stabilization at tau=%d with C=%d: %d cycle(s), periods %s",
        report.tau,
        c_tau,
        len(report.cycles),
        [orbit.period for orbit in report.orbits],
    )
    return report


@dataclass(frozen=True, slots=True)
class RotationEstimate:
    frequency: Fraction
    t_max: int
    resolution: Fraction
    exact: Optional[Fraction] = None


def rotation_number(
    spec: NetworkSpec,
    t_max: int,
    *,
    x0: object = 0,
    config: Optional[RegNetConfig] = None,
) -> RotationEstimate:
    """Frequency of the H = 1 branch along the orbit of a self-inhibitor."""

    cfg = config or get_default_config()
    if spec.dimension != 1 or spec.arrows != ((0, 0),) or spec.s[0][0] != -1:
        raise ValueError("rotation_number needs a self-inhibitor: one unit with a single negative self-arrow")
    orbit = simulate_orbit(spec, (x0,), t_max, config=cfg)
    visits = sum(heaviside_term(x[0], 0, 0, spec) for x in orbit.points)
    exact: Optional[Fraction] = None
    report = analyze_attractor(spec, cfg.attractor.rotation_horizon, config=cfg)
    genuine = [orbit for orbit in report.orbits if not orbit.degenerate]
    if len(genuine) == 1:
        cycle = genuine[0]
        exact = Fraction(sum(heaviside_term(x[0], 0, 0, spec) for x in cycle.points), cycle.period)
    return RotationEstimate(Fraction(visits, t_max), t_max, Fraction(1, t_max), exact)
