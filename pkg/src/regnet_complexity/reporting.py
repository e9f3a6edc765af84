"""Tables and structured reports built from the analysis results."""

from __future__ import annotations

import math
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from .attractor import AttractorReport, Orbit, PeriodicOrbit, RotationEstimate
from .model import InjectivityReport, NetworkSpec, NonDegeneracyReport, Violation
from .numerics import FlaggedInterval, format_number
from .partition import ComplexityTrace, Generation
from .structure import BoundCheck, BoundPolynomial, StructureReport


def _text(value: Any) -> Any:
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, FlaggedInterval):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _text(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_text(v) for v in value]
    return format_number(value)


def trace_frame(trace: ComplexityTrace) -> pd.DataFrame:
    """``t,C,branching_atoms,max_branch``; the first row has no producing step and reports zeros."""

    records = [
        {"t": row.t, "C": row.C, "branching_atoms": row.branching_atoms, "max_branch": row.max_branch}
        for row in trace.rows
    ]
    return pd.DataFrame.from_records(records, columns=["t", "C", "branching_atoms", "max_branch"])


def bound_frame(check: BoundCheck) -> pd.DataFrame:
    return check.table[["t", "C", "bound", "ok"]]


def emit_loglog(trace: ComplexityTrace, bound: BoundPolynomial) -> pd.DataFrame:
    """Plot-ready ``log10_t,log10_C,log10_bound`` columns."""

    if not trace.rows:
        raise ValueError("Empty trace")
    records = []
    for row in trace.rows:
        value = bound(row.t)
        records.append(
            {
                "log10_t": math.log10(row.t),
                "log10_C": math.log10(row.C),
                "log10_bound": math.log10(value) if value > 0 else float("-inf"),
            }
        )
    return pd.DataFrame.from_records(records, columns=["log10_t", "log10_C", "log10_bound"])


def orbit_frame(orbit: Orbit, spec: NetworkSpec) -> pd.DataFrame:
    columns = ["t", *(f"x_{i + 1}" for i in range(spec.dimension)), "atom"]
    records = []
    for t, (point, symbol) in enumerate(zip(orbit.points, orbit.itinerary)):
        record: Dict[str, Any] = {"t": t, "atom": symbol}
        for i, value in enumerate(point):
            record[f"x_{i + 1}"] = format_number(value)
        records.append(record)
    return pd.DataFrame.from_records(records, columns=columns)


def sweep_frame(records: Iterable[Dict[str, Any]]) -> pd.DataFrame:
    columns = ["a", "threshold", "t_reached", "C_final", "tau", "injective", "truncated"]
    frame = pd.DataFrame.from_records(list(records), columns=columns)
    frame["a"] = frame["a"].map(format_number)
    frame["threshold"] = frame["threshold"].map(format_number)
    return frame


def violations_to_dict(violations: Sequence[Violation]) -> Dict[str, Any]:
    return {
        "valid": not violations,
        "violations": [
            {"rule": v.rule, "entry": [k + 1 for k in v.entry], "message": v.message} for v in violations
        ],
    }


def injectivity_to_dict(report: Optional[InjectivityReport]) -> Optional[Dict[str, Any]]:
    if report is None:
        return None
    return {
        "a": _text(report.a),
        "delta": _text(report.delta),
        "a0": _text(report.a0),
        "injective_at_a": report.injective_at_a,
        "witnesses": [
            {
                "unit": w.coordinate + 1,
                "low_offset": _text(w.low_offset),
                "high_offset": _text(w.high_offset),
                "overlap": str(w.overlap),
            }
            for w in report.witnesses
        ],
    }


def non_degeneracy_to_dict(report: Optional[NonDegeneracyReport]) -> Optional[Dict[str, Any]]:
    if report is None:
        return None
    result: Dict[str, Any] = {"non_degenerate": report.non_degenerate}
    if not report.non_degenerate:
        result.update(
            {"unit": (report.coordinate or 0) + 1, "epsilon": list(report.first or ()), "other": list(report.second or ())}
        )
    return result


def bound_to_dict(bound: BoundPolynomial) -> Dict[str, Any]:
    return {
        "provenance": bound.provenance,
        "formula": bound.formula,
        "constants": _text(dict(bound.constants)),
        "applicable": bound.applicable,
        "note": bound.note,
    }


def bound_checks_to_dict(checks: Sequence[Tuple[BoundCheck, str]]) -> Dict[str, Any]:
    """Bound metadata and outcome, keyed to the per-bound table files."""

    return {
        "bounds": [
            {
                **bound_to_dict(check.bound),
                "ok": check.ok,
                "first_violation": _text(check.first_violation),
                "table": table,
            }
            for check, table in checks
        ]
    }


def trace_summary(trace: ComplexityTrace) -> Dict[str, Any]:
    return {
        "t_reached": trace.t_reached,
        "C_final": trace.rows[-1].C,
        "partition_sizes": list(trace.partition.sizes),
        "mode": trace.mode,
        "arithmetic": "rational" if trace.exact else "float",
        "certified": trace.certified,
        "truncated": trace.truncated,
        "truncation_reason": trace.truncation_reason,
        "injectivity": injectivity_to_dict(trace.injectivity),
        "violations": [{"t": v.t, "check": v.check, "detail": v.detail} for v in trace.violations],
        "warnings": list(trace.warnings),
    }


def atom_dump(generation: Generation, spec: NetworkSpec) -> List[Dict[str, Any]]:
    """Itinerary and exact sides of every atom of a generation."""

    atoms = []
    for index, node in enumerate(generation.nodes):
        rect = generation.rect(index)
        entry: Dict[str, Any] = {
            "sides": {spec.label(i): str(side) for i, side in enumerate(rect.sides)},
            "symbol": node.symbol,
        }
        if node.word is not None:
            entry["itinerary"] = list(generation.itinerary(index))
        atoms.append(entry)
    return atoms


def structure_to_dict(report: StructureReport) -> Dict[str, Any]:
    net = report.network
    reduction = report.reduction
    return {
        "vertices": list(net.names),
        "arrows": [[net.names[i], net.names[j]] for i, j in net.arrows],
        "circuit_sign": report.circuit_sign,
        "injectivity": injectivity_to_dict(report.injectivity),
        "non_degeneracy": non_degeneracy_to_dict(report.non_degeneracy),
        "head_independent_sets": {
            "certified": report.head_independent.certified,
            "sets": [net.label(members) for members in report.head_independent.sets],
        },
        "two_loops": [
            {"pair": net.label(loop.pair), "isolated_end": net.names[loop.isolated], "driver": net.names[loop.driver]}
            for loop in report.two_loops
        ],
        "disjoint_two_loops": [[net.names[u.driver], net.names[v.driver]] for u, v in report.disjoint_loop_pairs],
        "base_bundle": [{"base": net.label(s.base), "bundle": net.label(s.bundle)} for s in report.decompositions],
        "essential_certified": [{"set": net.label(v), "reason": reason} for v, reason in report.essential_certified],
        "redundant_certified": [{"set": net.label(v), "reason": reason} for v, reason in report.redundant_certified],
        "degree_reduction": None
        if reduction is None
        else {
            "eligible": reduction.eligible,
            "reason": reduction.reason,
            "redundant": net.label(reduction.redundant),
            "essential": net.label(reduction.essential),
            "q": reduction.q,
        },
        "bounds": [bound_to_dict(bound) for bound in report.bounds],
        "notes": list(report.notes),
    }


def _periodic_to_dict(orbit: PeriodicOrbit, spec: NetworkSpec) -> Dict[str, Any]:
    return {
        "period": orbit.period,
        "minimal_period": orbit.minimal_period,
        "points": [[format_number(v) for v in point] for point in orbit.points],
        "symbols": list(orbit.symbols),
        "slope": format_number(orbit.slope),
        "intercepts": [format_number(v) for v in orbit.intercepts],
        "distance_to_discontinuity": _text(orbit.distance),
        "degenerate": orbit.degenerate,
        "reason": orbit.reason,
    }


def attractor_to_dict(report: AttractorReport, spec: NetworkSpec) -> Dict[str, Any]:
    return {
        "horizon": report.horizon,
        "counts": report.counts,
        "tau": report.tau,
        "successor": report.successor,
        "cycles": report.cycles,
        "transients": report.transients,
        "orbits": [_periodic_to_dict(orbit, spec) for orbit in report.orbits],
        "distance_to_discontinuity": _text(report.distance),
        "multiperiodic": report.multiperiodic,
        "truncated": report.truncated,
        "notes": list(report.notes),
    }


def rotation_to_dict(estimate: RotationEstimate) -> Dict[str, Any]:
    return {
        "frequency": format_number(estimate.frequency),
        "t_max": estimate.t_max,
        "resolution": format_number(estimate.resolution),
        "exact": _text(estimate.exact),
    }
