"""Network specification, validation and exact evaluation of the regulatory map.

The map acts on the unit cube as

    F(x)_j = a * x_j + (1 - a) * (sum_i K[i][j] * H(s[i][j] * (x_i - T[i][j])) + D_j)

with ``H(u) = 0`` for ``u <= 0`` and ``D`` the optional per-step offset of the
non-autonomous mode. Indices are 0-based everywhere in code; messages use 1-based
labels or the unit names.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Literal, Optional, Sequence, Tuple

from .numerics import FlaggedInterval, Number, parse_rational, to_float

logger = logging.getLogger(__name__)

NetworkMode = Literal["autonomous", "sequence"]
OffsetRule = Literal["finite", "periodic", "constant"]
Point = Tuple[Number, ...]
Matrix = Tuple[Tuple[Number, ...], ...]

DEFAULT_MAX_INDEGREE = 20


class InvalidNetworkError(ValueError):
    """Raised by :func:`require_valid` with the full list of violations."""

    def __init__(self, violations: Sequence["Violation"]) -> None:
        self.violations = tuple(violations)
        summary = "; ".join(v.message for v in self.violations[:5])
        super().__init__(f"Invalid network ({len(self.violations)} violation(s)): {summary}")


class InfeasibleEnumerationError(ValueError):
    """Raised when a column indegree makes the 2**indegree enumeration infeasible."""


@dataclass(frozen=True, slots=True)
class Violation:
    rule: str
    entry: Tuple[int, ...]
    message: str


@dataclass(frozen=True, slots=True)
class NetworkSpec:
    """Full parameter set of a discrete time regulatory network.

    ``K[i][j]`` is the action of unit ``i`` on unit ``j``; ``T`` and ``s`` are
    indexed the same way. Thresholds on zero-interaction pairs are ignored.
    """

    dimension: int
    K: Matrix
    T: Matrix
    s: Tuple[Tuple[int, ...], ...]
    a: Number
    mode: NetworkMode = "autonomous"
    names: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        d = self.dimension
        for label, matrix in (("K", self.K), ("T", self.T), ("s", self.s)):
            if len(matrix) != d or any(len(row) != d for row in matrix):
                raise ValueError(f"Matrix {label} must be {d}x{d}")
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i + 1) for i in range(d)))
        elif len(self.names) != d:
            raise ValueError(f"Expected {d} unit names, got {len(self.names)}")

    @classmethod
    def from_matrices(
        cls,
        K: Sequence[Sequence[object]],
        T: Sequence[Sequence[object]],
        s: Sequence[Sequence[object]],
        a: object,
        *,
        mode: NetworkMode = "autonomous",
        names: Optional[Sequence[str]] = None,
    ) -> "NetworkSpec":
        K_exact = tuple(tuple(parse_rational(value) for value in row) for row in K)
        T_exact = tuple(
            tuple(
                parse_rational(value) if j < len(K_exact[i]) and K_exact[i][j] != 0 else Fraction(0)
                for j, value in enumerate(row)
            )
            for i, row in enumerate(T)
        )
        s_int = tuple(tuple(int(value) for value in row) for row in s)
        return cls(
            dimension=len(K_exact),
            K=K_exact,
            T=T_exact,
            s=s_int,
            a=parse_rational(a),
            mode=mode,
            names=tuple(names) if names else (),
        )

    @property
    def arrows(self) -> Tuple[Tuple[int, int], ...]:
        return _wiring(self)[2]

    def in_neighbors(self, j: int) -> Tuple[int, ...]:
        return _wiring(self)[0][j]

    def out_neighbors(self, i: int) -> Tuple[int, ...]:
        return _wiring(self)[1][i]

    def column_sum(self, j: int) -> Number:
        return sum((self.K[i][j] for i in range(self.dimension)), Fraction(0))

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError as exc:
            raise KeyError(f"Unknown unit {name!r}; known units: {', '.join(self.names)}") from exc

    def label(self, i: int) -> str:
        return self.names[i]

    def with_a(self, a: object) -> "NetworkSpec":
        return replace(self, a=parse_rational(a) if not isinstance(a, float) else a)

    def to_float(self) -> "NetworkSpec":
        return NetworkSpec(
            dimension=self.dimension,
            K=tuple(tuple(to_float(v) for v in row) for row in self.K),
            T=tuple(tuple(to_float(v) for v in row) for row in self.T),
            s=self.s,
            a=to_float(self.a),
            mode=self.mode,
            names=self.names,
        )

    @property
    def is_exact(self) -> bool:
        values = [self.a, *itertools.chain.from_iterable(self.K), *itertools.chain.from_iterable(self.T)]
        return all(isinstance(v, (Fraction, int)) for v in values)


@lru_cache(maxsize=512)
def _wiring(spec: NetworkSpec):
    d = spec.dimension
    arrows = tuple((i, j) for i in range(d) for j in range(d) if spec.K[i][j] > 0)
    incoming = tuple(tuple(i for i, jj in arrows if jj == j) for j in range(d))
    outgoing = tuple(tuple(j for ii, j in arrows if ii == i) for i in range(d))
    return incoming, outgoing, arrows


@dataclass(frozen=True, slots=True)
class OffsetSequence:
    """Per-step offset vectors ``D_t`` of the non-autonomous mode (``t >= 1``)."""

    vectors: Tuple[Tuple[Number, ...], ...]
    rule: OffsetRule = "constant"

    def __post_init__(self) -> None:
        if not self.vectors:
            raise ValueError("An offset sequence needs at least one vector")
        if self.rule not in ("finite", "periodic", "constant"):
            raise ValueError(f"Unknown offset rule {self.rule!r}")
        sizes = {len(vector) for vector in self.vectors}
        if len(sizes) != 1:
            raise ValueError("All offset vectors must have the same length")

    @classmethod
    def from_lists(cls, vectors: Sequence[Sequence[object]], rule: OffsetRule = "finite") -> "OffsetSequence":
        return cls(tuple(tuple(parse_rational(v) for v in vector) for vector in vectors), rule)

    @classmethod
    def constant(cls, vector: Sequence[object]) -> "OffsetSequence":
        return cls.from_lists([vector], "constant")

    @property
    def dimension(self) -> int:
        return len(self.vectors[0])

    @property
    def horizon(self) -> Optional[int]:
        """Number of maps the sequence defines, ``None`` when unbounded."""

        return len(self.vectors) if self.rule == "finite" else None

    def at(self, t: int) -> Tuple[Number, ...]:
        if t < 1:
            raise ValueError(f"Offset steps start at t=1, got {t}")
        if self.rule == "constant":
            return self.vectors[0]
        if self.rule == "periodic":
            return self.vectors[(t - 1) % len(self.vectors)]
        if t > len(self.vectors):
            raise IndexError(f"Finite offset sequence has no vector for step {t}")
        return self.vectors[t - 1]


@dataclass(frozen=True, slots=True)
class BranchSystem:
    """Per-coordinate achievable offsets and the affine branches they define."""

    a: Number
    offsets: Tuple[Tuple[Number, ...], ...]

    def branches(self, j: int) -> List[Tuple[Number, Number]]:
        """(slope, intercept) of every branch ``x -> a*x + (1-a)*eta`` of coordinate ``j``."""

        return [(self.a, (1 - self.a) * eta) for eta in self.offsets[j]]


@dataclass(frozen=True, slots=True)
class InjectivityWitness:
    coordinate: int
    low_offset: Number
    high_offset: Number
    overlap: FlaggedInterval


@dataclass(frozen=True, slots=True)
class InjectivityReport:
    delta: Optional[Number]
    a0: Number
    a: Number
    injective_at_a: bool
    witnesses: Tuple[InjectivityWitness, ...] = ()

    @property
    def witness(self) -> Optional[InjectivityWitness]:
        return self.witnesses[0] if self.witnesses else None


@dataclass(frozen=True, slots=True)
class NonDegeneracyReport:
    non_degenerate: bool
    coordinate: Optional[int] = None
    first: Optional[Tuple[int, ...]] = None
    second: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.non_degenerate


def heaviside(sign: int, x: Number, threshold: Number) -> int:
    """H(sign * (x - threshold)) with H(u) = 0 for u <= 0."""

    return 1 if sign * (x - threshold) > 0 else 0


def heaviside_term(x_i: Number, i: int, j: int, spec: NetworkSpec) -> int:
    if spec.K[i][j] == 0:
        raise ValueError(f"No interaction from unit {spec.label(i)} to unit {spec.label(j)}")
    return heaviside(spec.s[i][j], x_i, spec.T[i][j])


def _column_total_ok(total: Number, mode: NetworkMode) -> bool:
    if mode == "sequence":
        return total < 1
    if isinstance(total, float):
        return math.isclose(total, 1.0, abs_tol=1e-12)
    return total == 1


def validate(spec: NetworkSpec) -> List[Violation]:
    """Every broken rule of the network as data; empty when the network is valid."""

    violations: List[Violation] = []
    d = spec.dimension
    if d < 1:
        violations.append(Violation("dimension", (), f"dimension must be positive, got {d}"))
    if spec.mode not in ("autonomous", "sequence"):
        violations.append(Violation("mode", (), f"unknown mode {spec.mode!r}"))
    if not 0 <= spec.a < 1:
        violations.append(Violation("contraction", (), f"a={spec.a} outside [0, 1)"))
    for i in range(d):
        for j in range(d):
            k, threshold, sign = spec.K[i][j], spec.T[i][j], spec.s[i][j]
            where = f"[{i + 1}][{j + 1}]"
            if not 0 <= k <= 1:
                violations.append(Violation("range", (i, j), f"K{where}={k} outside [0, 1]"))
            if k != 0 and not 0 <= threshold <= 1:
                violations.append(Violation("range", (i, j), f"T{where}={threshold} outside [0, 1]"))
            if sign not in (-1, 0, 1):
                violations.append(Violation("sign", (i, j), f"s{where}={sign} not in {{-1, 0, 1}}"))
            elif (sign == 0) != (k == 0):
                violations.append(
                    Violation("compatibility", (i, j), f"s{where}={sign} incompatible with K{where}={k}")
                )
    for j in range(d):
        total = spec.column_sum(j)
        if not _column_total_ok(total, spec.mode):
            expected = "< 1" if spec.mode == "sequence" else "= 1"
            violations.append(
                Violation("normalization", (j,), f"column {j + 1} of K sums to {total}, expected {expected}")
            )
    return violations


@lru_cache(maxsize=512)
def _cached_violations(spec: NetworkSpec) -> Tuple[Violation, ...]:
    return tuple(validate(spec))


def require_valid(spec: NetworkSpec, *, skip: Sequence[str] = ()) -> None:
    violations = [v for v in _cached_violations(spec) if v.rule not in skip]
    if violations:
        raise InvalidNetworkError(violations)


def validate_offsets(spec: NetworkSpec, offsets: OffsetSequence) -> List[Violation]:
    """Check ``0 <= D_tj + sum_i K[i][j] <= 1`` for every listed vector."""

    if offsets.dimension != spec.dimension:
        return [
            Violation(
                "offset",
                (),
                f"offset vectors have length {offsets.dimension}, network has {spec.dimension} units",
            )
        ]
    violations: List[Violation] = []
    for k, vector in enumerate(offsets.vectors):
        for j, value in enumerate(vector):
            total = spec.column_sum(j) + value
            if not 0 <= total <= 1:
                violations.append(
                    Violation("offset", (k, j), f"offset {k + 1} column {j + 1}: D + sum K = {total} outside [0, 1]")
                )
    return violations


def evaluate_map(
    x: Sequence[Number],
    spec: NetworkSpec,
    offset: Optional[Sequence[Number]] = None,
) -> Point:
    """Exact image of ``x`` under the network map (or ``F_t`` when an offset is given)."""

    if offset is None:
        require_valid(spec)
    else:
        require_valid(spec, skip=("normalization",))
        if len(offset) != spec.dimension:
            raise ValueError(f"Offset of length {len(offset)} for a {spec.dimension}-unit network")
    if len(x) != spec.dimension:
        raise ValueError(f"Point of dimension {len(x)} for a {spec.dimension}-unit network")
    if any(not 0 <= value <= 1 for value in x):
        raise ValueError(f"Point {tuple(str(v) for v in x)} outside the unit cube")
    a = spec.a
    image = []
    for j in range(spec.dimension):
        drive = sum(
            (spec.K[i][j] * heaviside(spec.s[i][j], x[i], spec.T[i][j]) for i in spec.in_neighbors(j)),
            Fraction(0),
        )
        if offset is not None:
            drive += offset[j]
        image.append(a * x[j] + (1 - a) * drive)
    return tuple(image)


def _enumerate_column(
    spec: NetworkSpec,
    j: int,
    max_indegree: int,
) -> Iterator[Tuple[Tuple[int, ...], Number]]:
    sources = spec.in_neighbors(j)
    if len(sources) > max_indegree:
        raise InfeasibleEnumerationError(
            f"Unit {spec.label(j)} has indegree {len(sources)} above the cap of {max_indegree}"
        )
    for bits in itertools.product((0, 1), repeat=len(sources)):
        total = sum((spec.K[i][j] for i, bit in zip(sources, bits) if bit), Fraction(0))
        yield bits, total


def _full_epsilon(spec: NetworkSpec, j: int, bits: Tuple[int, ...]) -> Tuple[int, ...]:
    epsilon = [0] * spec.dimension
    for i, bit in zip(spec.in_neighbors(j), bits):
        epsilon[i] = bit
    return tuple(epsilon)


def branch_systems(spec: NetworkSpec, *, max_indegree: int = DEFAULT_MAX_INDEGREE) -> BranchSystem:
    offsets = tuple(
        tuple(sorted({total for _, total in _enumerate_column(spec, j, max_indegree)}))
        for j in range(spec.dimension)
    )
    return BranchSystem(a=spec.a, offsets=offsets)


def injectivity_analysis(spec: NetworkSpec, *, max_indegree: int = DEFAULT_MAX_INDEGREE) -> InjectivityReport:
    """delta, a0 = delta/(1+delta) and the exact branch-disjointness test at ``spec.a``.

    Consecutive branches ``eta < eta'`` of a coordinate have disjoint images of
    ``[0, 1]`` iff ``a + (1-a)*eta < (1-a)*eta'``; non-consecutive pairs follow.
    """

    system = branch_systems(spec, max_indegree=max_indegree)
    a = spec.a
    gaps = [hi - lo for offsets in system.offsets for lo, hi in zip(offsets, offsets[1:])]
    delta = min(gaps) if gaps else None
    if delta is None:
        a0: Number = 1.0 if isinstance(a, float) else Fraction(1)
    else:
        a0 = delta / (1 + delta)
    witnesses: List[InjectivityWitness] = []
    for j, offsets in enumerate(system.offsets):
        for lo, hi in zip(offsets, offsets[1:]):
            if not a + (1 - a) * lo < (1 - a) * hi:
                overlap = FlaggedInterval.closed((1 - a) * hi, a + (1 - a) * lo)
                witnesses.append(InjectivityWitness(j, lo, hi, overlap))
    if witnesses:
        logger.debug("Coordinatewise injectivity fails at a=%s (%d overlapping branch pairs)", a, len(witnesses))
    return InjectivityReport(delta, a0, a, not witnesses, tuple(witnesses))


def non_degenerate(spec: NetworkSpec, *, max_indegree: int = DEFAULT_MAX_INDEGREE) -> NonDegeneracyReport:
    """Whether every column's subset-sum map over its in-neighbors is one-to-one."""

    for j in range(spec.dimension):
        seen: Dict[Number, Tuple[int, ...]] = {}
        for bits, total in _enumerate_column(spec, j, max_indegree):
            if total in seen:
                return NonDegeneracyReport(
                    False,
                    j,
                    _full_epsilon(spec, j, seen[total]),
                    _full_epsilon(spec, j, bits),
                )
            seen[total] = bits
    return NonDegeneracyReport(True)


def restrict(spec: NetworkSpec, vertices: Sequence[int], *, mode: Optional[NetworkMode] = None) -> NetworkSpec:
    """Subnetwork on ``vertices`` (in the given order), dropping every other unit."""

    keep = list(vertices)
    return NetworkSpec(
        dimension=len(keep),
        K=tuple(tuple(spec.K[i][j] for j in keep) for i in keep),
        T=tuple(tuple(spec.T[i][j] for j in keep) for i in keep),
        s=tuple(tuple(spec.s[i][j] for j in keep) for i in keep),
        a=spec.a,
        mode=mode or spec.mode,
        names=tuple(spec.names[i] for i in keep),
    )
