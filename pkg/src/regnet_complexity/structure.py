"""Underlying digraph analysis, redundant/essential certification and complexity bounds."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import pandas as pd
import statsmodels.api as sm  # type: ignore

from .config import RegNetConfig, get_default_config
from .model import (
    InfeasibleEnumerationError,
    InjectivityReport,
    NetworkSpec,
    NonDegeneracyReport,
    OffsetSequence,
    injectivity_analysis,
    non_degenerate,
    require_valid,
    restrict,
)
from .partition import (
    BasePartition,
    ComplexityTrace,
    build_base_partition,
    complexity_trace,
    driving_multiplicity,
    iterate_generations,
    max_degeneracy,
    sequence_trace,
)

logger = logging.getLogger(__name__)

Arrow = Tuple[int, int]


@dataclass(slots=True)
class UnderlyingNetwork:
    """Vertices ``0..d-1`` and the arrows ``(i, j)`` with ``K[i][j] > 0``."""

    graph: nx.DiGraph
    names: Tuple[str, ...]

    @property
    def dimension(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(self.graph.nodes))

    @property
    def arrows(self) -> Tuple[Arrow, ...]:
        return tuple(sorted(self.graph.edges))

    def in_neighbors(self, j: int) -> Tuple[int, ...]:
        return tuple(sorted(self.graph.predecessors(j)))

    def out_neighbors(self, i: int) -> Tuple[int, ...]:
        return tuple(sorted(self.graph.successors(i)))

    def label(self, vertices: Iterable[int]) -> List[str]:
        return [self.names[v] for v in sorted(vertices)]


def underlying(spec: NetworkSpec) -> UnderlyingNetwork:
    require_valid(spec, skip=("normalization",))
    graph = nx.DiGraph()
    for i, name in enumerate(spec.names):
        graph.add_node(i, name=name)
    for i, j in spec.arrows:
        graph.add_edge(i, j, weight=spec.K[i][j], sign=spec.s[i][j], threshold=spec.T[i][j])
    return UnderlyingNetwork(graph, spec.names)


@dataclass(frozen=True, slots=True)
class HeadIndependence:
    holds: bool
    condition: Optional[int] = None
    arrows: Tuple[Arrow, ...] = ()

    def __bool__(self) -> bool:
        return self.holds


def is_head_independent(net: UnderlyingNetwork, vertices: Iterable[int]) -> HeadIndependence:
    """Arrows tailed in the set point outside it (condition 1) at pairwise distinct heads (condition 2)."""

    members = set(vertices)
    unknown = members - set(net.vertices)
    if unknown:
        raise ValueError(f"Vertices {sorted(unknown)} are not in the network")
    tailed = [(i, j) for i, j in net.arrows if i in members]
    for arrow in tailed:
        if arrow[1] in members:
            return HeadIndependence(False, 1, (arrow,))
    heads: Dict[int, Arrow] = {}
    for arrow in tailed:
        previous = heads.setdefault(arrow[1], arrow)
        if previous != arrow:
            return HeadIndependence(False, 2, (previous, arrow))
    return HeadIndependence(True)


@dataclass(frozen=True, slots=True)
class HeadIndependentSearch:
    sets: Tuple[FrozenSet[int], ...]
    certified: bool


def _can_join(net: UnderlyingNetwork, v: int, members: FrozenSet[int], heads: FrozenSet[int]) -> bool:
    outgoing = set(net.out_neighbors(v))
    if v in outgoing or outgoing & members or outgoing & heads:
        return False
    return not set(net.in_neighbors(v)) & members


def _heads(net: UnderlyingNetwork, members: Iterable[int]) -> FrozenSet[int]:
    return frozenset(j for i in members for j in net.out_neighbors(i))


def maximal_head_independent_sets(
    net: UnderlyingNetwork,
    *,
    config: Optional[RegNetConfig] = None,
) -> HeadIndependentSearch:
    """Maximal head-independent sets, exhaustive up to ``exhaustive_limit`` vertices.

    ``certified`` is true when the enumeration finished without a cap; above the
    limit a single greedy maximal set is returned uncertified.
    """

    cfg = config or get_default_config()
    vertices = net.vertices
    if len(vertices) > cfg.structure.exhaustive_limit:
        members: FrozenSet[int] = frozenset()
        for v in vertices:
            if _can_join(net, v, members, _heads(net, members)):
                members = members | {v}
        logger.info("Greedy head-independent set used for a %d-vertex network", len(vertices))
        return HeadIndependentSearch((members,), certified=False)

    cap = cfg.structure.max_independent_sets
    found: List[FrozenSet[int]] = []
    capped = False

    def is_maximal(members: FrozenSet[int]) -> bool:
        heads = _heads(net, members)
        return not any(_can_join(net, v, members, heads) for v in vertices if v not in members)

    def search(position: int, members: FrozenSet[int]) -> None:
        nonlocal capped
        if capped:
            return
        if position == len(vertices):
            if members and is_maximal(members):
                if len(found) >= cap:
                    capped = True
                    return
                found.append(members)
            return
        v = vertices[position]
        if _can_join(net, v, members, _heads(net, members)):
            search(position + 1, members | {v})
        search(position + 1, members)

    search(0, frozenset())
    found.sort(key=lambda members: (-len(members), sorted(members)))
    return HeadIndependentSearch(tuple(found), certified=not capped)


@dataclass(frozen=True, slots=True)
class TwoLoop:
    """Mutually connected pair whose ``isolated`` end only talks to ``driver``."""

    driver: int
    isolated: int

    @property
    def pair(self) -> FrozenSet[int]:
        return frozenset((self.driver, self.isolated))


def find_two_loops(net: UnderlyingNetwork) -> List[TwoLoop]:
    loops = []
    for j in net.vertices:
        incoming, outgoing = net.in_neighbors(j), net.out_neighbors(j)
        if len(incoming) == 1 and incoming == outgoing and incoming[0] != j:
            loops.append(TwoLoop(driver=incoming[0], isolated=j))
    return loops


def two_loops_disjoint(net: UnderlyingNetwork, first: TwoLoop, second: TwoLoop) -> bool:
    """Two 2-loops are disjoint when their non-isolated ends have disjoint heads."""

    return not set(net.out_neighbors(first.driver)) & set(net.out_neighbors(second.driver))


@dataclass(frozen=True, slots=True)
class BaseBundleSplit:
    base: Tuple[int, ...]
    bundle: Tuple[int, ...]


def is_valid_split(net: UnderlyingNetwork, split: BaseBundleSplit) -> bool:
    base, bundle = set(split.base), set(split.bundle)
    if not base or base & bundle or base | bundle != set(net.vertices):
        return False
    return not any(i in bundle and j in base for i, j in net.arrows)


def base_bundle_decompositions(net: UnderlyingNetwork) -> Iterator[BaseBundleSplit]:
    """Lazily yield every nontrivial split whose base is closed under predecessors.

    Bases are unions of strongly connected components that contain all their
    ancestors in the condensation.
    """

    condensed = nx.condensation(net.graph)
    order = list(nx.lexicographical_topological_sort(condensed, key=lambda n: min(condensed.nodes[n]["members"])))
    members = {n: frozenset(condensed.nodes[n]["members"]) for n in order}
    everything = frozenset(net.vertices)

    def extend(position: int, chosen: FrozenSet[int]) -> Iterator[FrozenSet[int]]:
        if position == len(order):
            yield chosen
            return
        node = order[position]
        if all(parent in chosen for parent in condensed.predecessors(node)):
            yield from extend(position + 1, chosen | {node})
        yield from extend(position + 1, chosen)

    for chosen in extend(0, frozenset()):
        base = frozenset().union(*(members[n] for n in chosen)) if chosen else frozenset()
        if base and base != everything:
            yield BaseBundleSplit(tuple(sorted(base)), tuple(sorted(everything - base)))


@dataclass(frozen=True, slots=True)
class DegreeReduction:
    """Redundant drivers ``U``, essential complement ``W`` and the degree ``q = #W``."""

    eligible: bool
    reason: str
    redundant: Tuple[int, ...]
    essential: Tuple[int, ...]
    q: int
    loops: Tuple[TwoLoop, ...]
    drivees: Tuple[Tuple[int, Tuple[int, ...]], ...]


def certify_degree_reduction(
    spec: NetworkSpec,
    net: Optional[UnderlyingNetwork] = None,
    *,
    config: Optional[RegNetConfig] = None,
) -> Optional[DegreeReduction]:
    """Largest head-independent set of 2-loop drivers that contains none of their isolated ends.

    Returns ``None`` when no such set exists. Ties between sets of the same size
    are broken by the lexicographically smallest vertex list.
    """

    cfg = config or get_default_config()
    net = net or underlying(spec)
    loops = find_two_loops(net)
    if not loops:
        return None
    isolated_of: Dict[int, List[int]] = {}
    for loop in loops:
        isolated_of.setdefault(loop.driver, []).append(loop.isolated)
    drivers = sorted(isolated_of)

    def admissible(chosen: Tuple[int, ...]) -> bool:
        ends = {j for i in chosen for j in isolated_of[i]}
        return not ends & set(chosen) and bool(is_head_independent(net, chosen))

    best: Optional[Tuple[int, ...]] = None
    if len(drivers) <= cfg.structure.exhaustive_limit:
        for size in range(len(drivers), 0, -1):
            best = next((chosen for chosen in itertools.combinations(drivers, size) if admissible(chosen)), None)
            if best is not None:
                break
    else:
        chosen: Tuple[int, ...] = ()
        for i in drivers:
            if admissible(chosen + (i,)):
                chosen += (i,)
        best = chosen or None
    if best is None:
        return None

    reasons = []
    try:
        injective = injectivity_analysis(spec, max_indegree=cfg.engine.max_indegree).injective_at_a
        distinct = non_degenerate(spec, max_indegree=cfg.engine.max_indegree).non_degenerate
    except InfeasibleEnumerationError as exc:
        injective = distinct = False
        reasons.append(str(exc))
    if not injective:
        reasons.append(f"not coordinatewise injective at a={spec.a}")
    if not distinct:
        reasons.append("interaction matrix is degenerate")
    redundant = tuple(best)
    essential = tuple(v for v in net.vertices if v not in redundant)
    chosen_loops = tuple(TwoLoop(i, min(isolated_of[i])) for i in redundant)
    groups: Dict[int, List[int]] = {j: [] for j in essential}
    for loop in chosen_loops:
        groups[loop.isolated].append(loop.driver)
    reduction = DegreeReduction(
        eligible=not reasons,
        reason="; ".join(reasons) or "drivers of disjoint 2-loops forming a head-independent set",
        redundant=redundant,
        essential=essential,
        q=len(essential),
        loops=chosen_loops,
        drivees=tuple((j, tuple(groups[j])) for j in essential),
    )
    logger.info(
        "Degree reduction: U=%s W=%s q=%d (%s)",
        net.label(redundant),
        net.label(essential),
        reduction.q,
        "eligible" if reduction.eligible else reduction.reason,
    )
    return reduction


def circuit_sign(spec: NetworkSpec) -> Optional[int]:
    """Product of the signs along the circuit ``0 -> 1 -> ... -> d-1 -> 0``; None for other networks."""

    d = spec.dimension
    expected = {(i, (i + 1) % d) for i in range(d)}
    if set(spec.arrows) != expected:
        return None
    return math.prod(spec.s[i][j] for i, j in expected)


@dataclass(frozen=True, slots=True)
class BoundPolynomial:
    provenance: str
    formula: str
    evaluator: Callable[[int], int] = field(repr=False)
    constants: Mapping[str, object] = field(default_factory=dict)
    applicable: bool = True
    note: str = ""

    def __call__(self, t: int) -> int:
        return self.evaluator(t)


def _safe_injective(spec: NetworkSpec) -> bool:
    try:
        return injectivity_analysis(spec).injective_at_a
    except InfeasibleEnumerationError:
        return False


def bound_general(spec: NetworkSpec, *, partition: Optional[BasePartition] = None) -> BoundPolynomial:
    partition = partition or build_base_partition(spec)
    c, d = partition.c, spec.dimension
    return BoundPolynomial(
        provenance="general",
        formula=f"1 + {c}*(1 + {c}^{d} * t^{d})",
        evaluator=lambda t: 1 + c * (1 + c**d * t**d),
        constants={"c": c, "d": d},
        applicable=_safe_injective(spec),
    )


def bound_degree(
    spec: NetworkSpec,
    reduction: DegreeReduction,
    *,
    partition: Optional[BasePartition] = None,
) -> BoundPolynomial:
    """``1 + c1 * (1 + c2 * t^q)`` from a certified degree reduction."""

    partition = partition or build_base_partition(spec)
    sizes = partition.sizes
    c1 = partition.c
    big_m = partition.size
    n_values = {}
    for j, group in reduction.drivees:
        m_j = (sizes[j] - 1) + sum(sizes[j] * (sizes[i] - 1) for i in group)
        n_values[j] = max(m_j, sizes[j])
    q = reduction.q
    c2 = big_m * c1**q * math.prod(n_values.values())
    return BoundPolynomial(
        provenance="bound-degree",
        formula=f"1 + {c1}*(1 + {c2} * t^{q})",
        evaluator=lambda t: 1 + c1 * (1 + c2 * t**q),
        constants={"c1": c1, "c2": c2, "q": q, "M": big_m, "n": {spec.label(j): n for j, n in n_values.items()}},
        applicable=reduction.eligible,
        note=reduction.reason,
    )


def skew_base_trace(
    spec: NetworkSpec,
    split: BaseBundleSplit,
    t_max: int,
    *,
    config: Optional[RegNetConfig] = None,
) -> ComplexityTrace:
    """Trace of the base subnetwork observed through the thresholds it sends to the bundle."""

    net = underlying(spec)
    if not is_valid_split(net, split):
        raise ValueError(f"Invalid base-bundle split {split}")
    local = {v: k for k, v in enumerate(split.base)}
    extra: Dict[int, List[Tuple[object, int]]] = {}
    for i, j in net.arrows:
        if i in local and j not in local:
            extra.setdefault(local[i], []).append((spec.T[i][j], spec.s[i][j]))
    base_spec = restrict(spec, split.base)
    return complexity_trace(base_spec, t_max, extra_cuts=extra, config=config)


def bound_skew(
    spec: NetworkSpec,
    split: BaseBundleSplit,
    base_trace: ComplexityTrace,
    *,
    partition: Optional[BasePartition] = None,
) -> BoundPolynomial:
    """``C_b(t) * (1 + c_d * (1 + c_d^n * t^n))`` over the bundle's ``n`` units."""

    if not is_valid_split(underlying(spec), split):
        raise ValueError(f"Invalid base-bundle split {split}")
    partition = partition or build_base_partition(spec)
    n = len(split.bundle)
    c_d = math.prod(partition.sizes[i] for i in split.bundle) - 1

    def bundle_factor(t: int) -> int:
        return 1 + c_d * (1 + c_d**n * t**n) if n else 1

    return BoundPolynomial(
        provenance="skew-product",
        formula=f"C_b(t) * (1 + {c_d}*(1 + {c_d}^{n} * t^{n}))" if n else "C_b(t)",
        evaluator=lambda t: base_trace.value_at(t) * bundle_factor(t),
        constants={
            "c_d": c_d,
            "n": n,
            "base": [spec.label(v) for v in split.base],
            "bundle": [spec.label(v) for v in split.bundle],
            "base_t_reached": base_trace.t_reached,
        },
        applicable=_safe_injective(spec),
    )


def bound_self_inhibitor() -> BoundPolynomial:
    return BoundPolynomial("self-inhibitor", "t + 2", lambda t: t + 2, {})


def bound_negative_circuit(spec: NetworkSpec) -> BoundPolynomial:
    return BoundPolynomial(
        "negative-2-circuit",
        "2t + 2",
        lambda t: 2 * t + 2,
        {"a": spec.a},
        applicable=spec.a < Fraction(1, 2),
    )


def quadratic_envelope() -> BoundPolynomial:
    return BoundPolynomial(
        "negative-2-circuit",
        "4t^2",
        lambda t: 4 * t * t,
        {},
        note="empirical envelope for large contraction rates",
    )


@dataclass(slots=True)
class BoundCheck:
    bound: BoundPolynomial
    table: pd.DataFrame
    first_violation: Optional[Dict[str, object]] = None

    @property
    def ok(self) -> bool:
        return self.first_violation is None


def verify_bound(trace: ComplexityTrace, bound: BoundPolynomial, *, t_min: int = 1) -> BoundCheck:
    """Compare C(t) with the bound for every computed ``t >= t_min``."""

    records = []
    first: Optional[Dict[str, object]] = None
    for row in trace.rows:
        if row.t < t_min:
            continue
        try:
            value = bound(row.t)
        except IndexError:
            logger.info("Bound %s is not defined beyond t=%d", bound.provenance, row.t - 1)
            break
        ok = row.C <= value
        records.append({"t": row.t, "C": row.C, "bound": value, "ok": ok})
        if not ok and first is None:
            first = {
                "t": row.t,
                "C": row.C,
                "bound": value,
                "provenance": bound.provenance,
                "formula": bound.formula,
            }
            logger.warning("Bound %s violated at t=%d: C=%d > %d", bound.formula, row.t, row.C, value)
    table = pd.DataFrame.from_records(records, columns=["t", "C", "bound", "ok"])
    return BoundCheck(bound, table, first)


@dataclass(frozen=True, slots=True)
class GrowthEstimate:
    slope: float
    intercept: float
    points: int


def growth_rate(trace: Union[ComplexityTrace, Sequence[int]]) -> GrowthEstimate:
    """Least-squares slope of ``log C(t)`` against ``t`` over the last half of the trace."""

    counts = trace.counts if isinstance(trace, ComplexityTrace) else list(trace)
    if len(counts) < 10:
        raise ValueError(f"growth_rate needs at least 10 points, got {len(counts)}")
    start = len(counts) // 2
    t = np.arange(start + 1, len(counts) + 1, dtype=float)
    log_c = np.array([math.log(c) for c in counts[start:]], dtype=float)
    fitted = sm.OLS(log_c, sm.add_constant(t)).fit()
    intercept, slope = (float(v) for v in fitted.params)
    return GrowthEstimate(slope=slope, intercept=intercept, points=len(t))


def measure_essential(
    spec: NetworkSpec,
    vertices: Sequence[int],
    t_max: int,
    *,
    config: Optional[RegNetConfig] = None,
) -> pd.DataFrame:
    """n(W, t) per step compared with #P, measured up to ``t_max`` only."""

    records = []
    size = None
    for generation in iterate_generations(spec, t_max, config=config):
        if size is None:
            size = len(generation)
        n = max_degeneracy(generation, tuple(vertices))
        records.append({"t": generation.t, "n": n, "bound": size, "ok": n <= size})
    return pd.DataFrame.from_records(records, columns=["t", "n", "bound", "ok"])


def measure_driving(
    spec: NetworkSpec,
    driver: int,
    driven: int,
    t_max: int,
    *,
    config: Optional[RegNetConfig] = None,
) -> pd.DataFrame:
    """Largest number of ``driven`` projections sharing a ``driver`` projection, per step."""

    bound = len(build_base_partition(spec).coordinates[driven])
    records = []
    for generation in iterate_generations(spec, t_max, config=config):
        multiplicity = driving_multiplicity(generation, driver, driven)
        records.append({"t": generation.t, "multiplicity": multiplicity, "bound": bound, "ok": multiplicity <= bound})
    return pd.DataFrame.from_records(records, columns=["t", "multiplicity", "bound", "ok"])


@dataclass(slots=True)
class BundleSample:
    table: pd.DataFrame
    samples: int
    bound: BoundPolynomial


def _bundle_contributions(spec: NetworkSpec, split: BaseBundleSplit) -> List[List[Fraction]]:
    base = set(split.base)
    contributions = []
    for j in split.bundle:
        sources = [i for i in spec.in_neighbors(j) if i in base]
        sums = {
            sum((spec.K[i][j] for i, bit in zip(sources, bits) if bit), Fraction(0))
            for bits in itertools.product((0, 1), repeat=len(sources))
        }
        contributions.append(sorted(sums))
    return contributions


def sample_bundle_complexity(
    spec: NetworkSpec,
    split: BaseBundleSplit,
    t_max: int,
    *,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    config: Optional[RegNetConfig] = None,
) -> BundleSample:
    """Empirical sup of the bundle sequence complexity over random admissible offset sequences."""

    cfg = config or get_default_config()
    if not split.bundle:
        raise ValueError("The split has an empty bundle")
    if not is_valid_split(underlying(spec), split):
        raise ValueError(f"Invalid base-bundle split {split}")
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    count = samples if samples is not None else cfg.structure.bundle_samples
    bundle_spec = restrict(spec, split.bundle, mode="sequence")
    contributions = _bundle_contributions(spec, split)
    horizon = max(t_max - 1, 1)
    runs = []
    for _ in range(count):
        vectors = [[column[rng.integers(len(column))] for column in contributions] for _ in range(horizon)]
        offsets = OffsetSequence.from_lists(vectors, "finite")
        runs.append(sequence_trace(bundle_spec, offsets, t_max, config=cfg).counts)
    width = min(len(run) for run in runs)
    matrix = np.array([run[:width] for run in runs], dtype=float)
    partition = build_base_partition(bundle_spec)
    c_d, n = partition.c, len(split.bundle)
    bound = BoundPolynomial(
        "t-sequence",
        f"1 + {c_d}*(1 + {c_d}^{n} * t^{n})",
        lambda t: 1 + c_d * (1 + c_d**n * t**n),
        {"c": c_d, "n": n},
    )
    table = pd.DataFrame(
        {
            "t": np.arange(1, width + 1),
            "max_C": matrix.max(axis=0).astype(int),
            "mean_C": matrix.mean(axis=0),
            "bound": [bound(t) for t in range(1, width + 1)],
        }
    )
    return BundleSample(table, count, bound)


@dataclass(slots=True)
class StructureReport:
    network: UnderlyingNetwork
    injectivity: Optional[InjectivityReport]
    non_degeneracy: Optional[NonDegeneracyReport]
    head_independent: HeadIndependentSearch
    two_loops: List[TwoLoop]
    disjoint_loop_pairs: List[Tuple[TwoLoop, TwoLoop]]
    decompositions: List[BaseBundleSplit]
    reduction: Optional[DegreeReduction]
    essential_certified: List[Tuple[Tuple[int, ...], str]]
    redundant_certified: List[Tuple[Tuple[int, ...], str]]
    circuit_sign: Optional[int]
    bounds: List[BoundPolynomial] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def q(self) -> Optional[int]:
        return self.reduction.q if self.reduction is not None else None


def analyze_structure(spec: NetworkSpec, *, config: Optional[RegNetConfig] = None) -> StructureReport:
    cfg = config or get_default_config()
    net = underlying(spec)
    notes: List[str] = []
    try:
        injectivity: Optional[InjectivityReport] = injectivity_analysis(spec, max_indegree=cfg.engine.max_indegree)
        distinct: Optional[NonDegeneracyReport] = non_degenerate(spec, max_indegree=cfg.engine.max_indegree)
    except InfeasibleEnumerationError as exc:
        injectivity = distinct = None
        notes.append(str(exc))
    injective = injectivity is not None and injectivity.injective_at_a

    search = maximal_head_independent_sets(net, config=cfg)
    essential = []
    for members in search.sets:
        complement = tuple(v for v in net.vertices if v not in members)
        if injective:
            essential.append((complement, f"complement of head-independent set {net.label(members)}"))
    if not injective:
        notes.append("essential sets are not certified without coordinatewise injectivity")

    loops = find_two_loops(net)
    pairs = [(u, v) for u, v in itertools.combinations(loops, 2) if two_loops_disjoint(net, u, v)]
    decompositions = list(itertools.islice(base_bundle_decompositions(net), cfg.structure.max_decompositions))
    reduction = certify_degree_reduction(spec, net, config=cfg)
    redundant = []
    partition = build_base_partition(spec)
    bounds = [bound_general(spec, partition=partition)]
    if reduction is not None:
        if reduction.eligible:
            for loop in reduction.loops:
                redundant.append(((loop.driver,), f"drives the isolated end {spec.label(loop.isolated)} of a 2-loop"))
        bounds.append(bound_degree(spec, reduction, partition=partition))
    notes.append("dynamic validation of driving and essentiality is finite-horizon only")
    return StructureReport(
        network=net,
        injectivity=injectivity,
        non_degeneracy=distinct,
        head_independent=search,
        two_loops=loops,
        disjoint_loop_pairs=pairs,
        decompositions=decompositions,
        reduction=reduction,
        essential_certified=essential,
        redundant_certified=redundant,
        circuit_sign=circuit_sign(spec),
        bounds=bounds,
        notes=notes,
    )
