"""Exact rational scalars and flagged interval / rectangle algebra."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

Number = Union[Fraction, float, int]


def parse_rational(value: object) -> Fraction:
    """Parse ``"p/q"``, decimal literals or numbers into an exact ``Fraction``.

    Floats are converted through their shortest decimal text, so ``0.93`` becomes
    ``93/100`` rather than the binary64 value closest to it.
    """

    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError(f"Cannot read a boolean as a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise TypeError(f"Cannot read {value!r} as a rational") from exc
    raise TypeError(f"Cannot read {type(value).__name__} as a rational")


def to_float(x: object) -> float:
    """Binary64 value of a number or of rational text such as ``"1/3"``."""

    if isinstance(x, str):
        return float(parse_rational(x))
    return float(x)


def format_number(x: Number) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


@dataclass(frozen=True, slots=True)
class FlaggedInterval:
    """Interval ``{x : lo <. x <. hi}`` whose end inclusion is given by the flags.

    Empty sets are never represented; :meth:`make` returns ``None`` instead.
    """

    lo: Number
    hi: Number
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"Interval with lo > hi: {self.lo} > {self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError(f"Degenerate interval at {self.lo} must be closed on both ends")

    @classmethod
    def make(
        cls,
        lo: Number,
        hi: Number,
        lo_closed: bool = True,
        hi_closed: bool = True,
    ) -> Optional["FlaggedInterval"]:
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            return None
        return cls(lo, hi, lo_closed, hi_closed)

    @classmethod
    def closed(cls, lo: Number, hi: Number) -> "FlaggedInterval":
        return cls(lo, hi, True, True)

    @classmethod
    def singleton(cls, value: Number) -> "FlaggedInterval":
        return cls(value, value, True, True)

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Number:
        return self.hi - self.lo

    def contains(self, x: Number) -> bool:
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def is_subset(self, other: "FlaggedInterval") -> bool:
        if self.lo < other.lo or (self.lo == other.lo and self.lo_closed and not other.lo_closed):
            return False
        if self.hi > other.hi or (self.hi == other.hi and self.hi_closed and not other.hi_closed):
            return False
        return True

    def distance_to(self, x: Number) -> Number:
        """Distance from ``x`` to the closure of the interval."""

        if x < self.lo:
            return self.lo - x
        if x > self.hi:
            return x - self.hi
        return self.lo - self.lo  # zero in the endpoint type

    def intersect(self, other: "FlaggedInterval") -> Optional["FlaggedInterval"]:
        return interval_intersect(self, other)

    def affine_image(self, a: Number, b: Number) -> "FlaggedInterval":
        return interval_affine_image(self, a, b)

    def sort_key(self) -> Tuple[Number, bool, Number, bool]:
        return (self.lo, not self.lo_closed, self.hi, self.hi_closed)

    def __str__(self) -> str:
        if self.is_singleton:
            return "{" + format_number(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_number(self.lo)}, {format_number(self.hi)}{right}"


def interval_intersect(u: FlaggedInterval, v: FlaggedInterval) -> Optional[FlaggedInterval]:
    """Exact set intersection; ``None`` when the sets do not meet."""

    if u.lo > v.lo:
        lo, lo_closed = u.lo, u.lo_closed
    elif v.lo > u.lo:
        lo, lo_closed = v.lo, v.lo_closed
    else:
        lo, lo_closed = u.lo, u.lo_closed and v.lo_closed
    if u.hi < v.hi:
        hi, hi_closed = u.hi, u.hi_closed
    elif v.hi < u.hi:
        hi, hi_closed = v.hi, v.hi_closed
    else:
        hi, hi_closed = u.hi, u.hi_closed and v.hi_closed
    return FlaggedInterval.make(lo, hi, lo_closed, hi_closed)


def interval_affine_image(u: FlaggedInterval, a: Number, b: Number) -> FlaggedInterval:
    """Image of ``u`` under ``x -> a*x + b`` for a slope in (0, 1)."""

    if not 0 < a < 1:
        raise ValueError(f"Affine slope must lie in (0, 1), got {a}")
    return FlaggedInterval(a * u.lo + b, a * u.hi + b, u.lo_closed, u.hi_closed)


@dataclass(frozen=True, slots=True)
class Rect:
    """Product of flagged intervals, one per network unit."""

    sides: Tuple[FlaggedInterval, ...]

    @classmethod
    def of(cls, sides: Iterable[FlaggedInterval]) -> "Rect":
        return cls(tuple(sides))

    @classmethod
    def unit_cube(cls, dimension: int) -> "Rect":
        return cls(tuple(FlaggedInterval.closed(Fraction(0), Fraction(1)) for _ in range(dimension)))

    @property
    def dimension(self) -> int:
        return len(self.sides)

    def contains(self, point: Sequence[Number]) -> bool:
        if len(point) != self.dimension:
            raise ValueError(f"Point of dimension {len(point)} against a {self.dimension}-rect")
        return all(side.contains(x) for side, x in zip(self.sides, point))

    def intersect(self, other: "Rect") -> Optional["Rect"]:
        return rect_intersect(self, other)

    def sort_key(self) -> tuple:
        return tuple(side.sort_key() for side in self.sides)

    def __str__(self) -> str:
        return " x ".join(str(side) for side in self.sides)


def rect_intersect(r: Rect, s: Rect) -> Optional[Rect]:
    if r.dimension != s.dimension:
        raise ValueError(f"Dimension mismatch: {r.dimension} vs {s.dimension}")
    sides = []
    for u, v in zip(r.sides, s.sides):
        side = interval_intersect(u, v)
        if side is None:
            return None
        sides.append(side)
    return Rect(tuple(sides))
