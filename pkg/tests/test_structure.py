import json
import math
from fractions import Fraction

import pytest

from regnet_complexity import presets
from regnet_complexity.model import NetworkSpec
from regnet_complexity.partition import ComplexityTrace, TraceRow, complexity_trace
from regnet_complexity.structure import (
    BaseBundleSplit,
    analyze_structure,
    base_bundle_decompositions,
    bound_degree,
    bound_negative_circuit,
    bound_self_inhibitor,
    bound_skew,
    bound_general,
    certify_degree_reduction,
    circuit_sign,
    find_two_loops,
    growth_rate,
    is_head_independent,
    is_valid_split,
    maximal_head_independent_sets,
    measure_driving,
    measure_essential,
    quadratic_envelope,
    sample_bundle_complexity,
    skew_base_trace,
    two_loops_disjoint,
    underlying,
    verify_bound,
)


def test_head_independence_conditions(p53_network):
    net = underlying(p53_network)
    assert is_head_independent(net, [0])
    inner = is_head_independent(net, [0, 1])
    assert not inner and inner.condition == 1
    assert is_head_independent(net, [0, 3]).condition == 1
    with pytest.raises(ValueError):
        is_head_independent(net, [9])


def test_shared_head_breaks_condition_two():
    half = Fraction(1, 2)
    spec = NetworkSpec.from_matrices(
        [[0, 0, half], [0, 0, half], [1, 1, 0]],
        [[0, 0, half], [0, 0, half], [half, half, 0]],
        [[0, 0, 1], [0, 0, 1], [1, -1, 0]],
        Fraction(1, 4),
    )
    shared = is_head_independent(underlying(spec), [0, 1])
    assert not shared and shared.condition == 2
    assert shared.arrows == ((0, 2), (1, 2))


def test_even_vertices_of_a_circuit_are_head_independent():
    net = underlying(presets.circuit(6))
    search = maximal_head_independent_sets(net)
    assert search.certified
    assert frozenset({0, 2, 4}) in search.sets
    assert all(is_head_independent(net, members) for members in search.sets)


def test_greedy_search_above_the_limit(config):
    config.structure.exhaustive_limit = 2
    search = maximal_head_independent_sets(underlying(presets.circuit(4)), config=config)
    assert not search.certified
    assert len(search.sets) == 1


def test_two_loops_of_the_three_loop_network():
    net = underlying(presets.three_loops())
    loops = find_two_loops(net)
    assert len(loops) == 6
    pairs = {loop.pair for loop in loops}
    assert pairs == {frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5})}
    by_driver = {loop.driver: loop for loop in loops}
    assert two_loops_disjoint(net, by_driver[0], by_driver[2])


def test_p53_has_a_single_two_loop_and_split(p53_network):
    net = underlying(p53_network)
    loops = find_two_loops(net)
    assert [(loop.driver, loop.isolated) for loop in loops] == [(0, 1)]
    splits = list(base_bundle_decompositions(net))
    assert splits == [BaseBundleSplit((0, 1), (2, 3))]
    assert is_valid_split(net, splits[0])
    assert not is_valid_split(net, BaseBundleSplit((2, 3), (0, 1)))


def test_strongly_connected_network_has_no_split(negative_circuit):
    assert list(base_bundle_decompositions(underlying(negative_circuit))) == []


def test_degree_reduction_of_a_two_circuit(negative_circuit):
    reduction = certify_degree_reduction(negative_circuit)
    assert reduction.eligible
    assert reduction.redundant == (0,) and reduction.essential == (1,)
    assert reduction.q == 1
    bound = bound_degree(negative_circuit, reduction)
    assert bound.constants["c1"] == 3 and bound.constants["c2"] == 36
    assert [bound(t) for t in (1, 2, 10)] == [112, 220, 1084]


def test_degree_reduction_of_the_three_loop_network():
    spec = presets.three_loops()
    reduction = certify_degree_reduction(spec)
    assert reduction.eligible
    assert reduction.redundant == (0, 2, 4)
    assert reduction.q == 3


def test_degree_reduction_of_p53_is_not_eligible(p53_network):
    reduction = certify_degree_reduction(p53_network)
    assert reduction.redundant == (0,)
    assert reduction.q == 3
    assert not reduction.eligible
    assert "degenerate" in reduction.reason


def test_no_reduction_without_two_loops():
    assert certify_degree_reduction(presets.repressilator()) is None


def test_circuit_sign(negative_circuit, toggle_switch, p53_network):
    assert circuit_sign(negative_circuit) == -1
    assert circuit_sign(toggle_switch) == 1
    assert circuit_sign(presets.repressilator()) == -1
    assert circuit_sign(p53_network) is None


def test_general_bounds(self_inhibitor, negative_circuit, slow_negative_circuit):
    single = bound_general(self_inhibitor)
    assert [single(t) for t in (1, 5)] == [3, 7]
    double = bound_general(negative_circuit)
    assert double(2) == 1 + 3 * (1 + 9 * 4)
    assert double.applicable
    assert not bound_general(slow_negative_circuit).applicable


def test_named_bounds(negative_circuit, slow_negative_circuit):
    assert bound_self_inhibitor()(7) == 9
    assert bound_negative_circuit(negative_circuit).applicable
    assert not bound_negative_circuit(slow_negative_circuit).applicable
    assert quadratic_envelope()(3) == 36


def test_verify_bound_on_small_contraction_rates():
    for a in (Fraction(1, 10), Fraction(1, 4), Fraction(2, 5)):
        spec = presets.negative_2_circuit(a)
        trace = complexity_trace(spec, 40)
        check = verify_bound(trace, bound_negative_circuit(spec))
        assert check.ok
        assert list(check.table.columns) == ["t", "C", "bound", "ok"]
        assert len(check.table) == 40


def test_verify_bound_reports_the_first_violation(slow_negative_circuit):
    trace = complexity_trace(slow_negative_circuit, 12)
    check = verify_bound(trace, bound_self_inhibitor())
    assert not check.ok
    assert check.first_violation["t"] == int(check.table.loc[~check.table["ok"], "t"].iloc[0])


def test_degree_bound_dominates_the_three_loop_network():
    spec = presets.three_loops()
    reduction = certify_degree_reduction(spec)
    trace = complexity_trace(spec, 6)
    assert verify_bound(trace, bound_degree(spec, reduction)).ok


def test_skew_bound_for_p53(p53_network):
    split = BaseBundleSplit((0, 1), (2, 3))
    base = skew_base_trace(p53_network, split, 12)
    assert base.partition.sizes == (3, 2)
    bound = bound_skew(p53_network, split, base)
    trace = complexity_trace(p53_network, 12)
    check = verify_bound(trace, bound)
    assert check.ok
    assert bound.constants["bundle"] == ["b", "c"]
    with pytest.raises(ValueError):
        skew_base_trace(p53_network, BaseBundleSplit((2, 3), (0, 1)), 5)


def test_bound_stops_where_the_base_trace_ends(p53_network):
    split = BaseBundleSplit((0, 1), (2, 3))
    base = skew_base_trace(p53_network, split, 4)
    trace = complexity_trace(p53_network, 8)
    check = verify_bound(trace, bound_skew(p53_network, split, base))
    assert check.table["t"].tolist() == [1, 2, 3, 4]


def test_growth_rate_of_exponential_counts():
    estimate = growth_rate([2**t for t in range(1, 21)])
    assert estimate.slope == pytest.approx(math.log(2))
    assert estimate.points == 10
    with pytest.raises(ValueError):
        growth_rate([1, 2, 3])


def test_growth_rate_accepts_traces():
    rows = [TraceRow(t, 4 * t * t, 0, 0, 0.0) for t in range(1, 13)]
    trace = ComplexityTrace(rows, None, "itinerary-exact", True, None, None)
    assert growth_rate(trace).slope > 0


def test_dynamic_measurements(negative_circuit):
    essential = measure_essential(negative_circuit, (1,), 8)
    assert essential["ok"].all()
    assert list(essential.columns) == ["t", "n", "bound", "ok"]
    driving = measure_driving(negative_circuit, 0, 1, 8)
    assert driving["ok"].all()
    assert (driving["bound"] == 2).all()


def test_bundle_sampling_is_seeded(p53_network):
    split = BaseBundleSplit((0, 1), (2, 3))
    first = sample_bundle_complexity(p53_network, split, 8, samples=3, seed=7)
    second = sample_bundle_complexity(p53_network, split, 8, samples=3, seed=7)
    assert first.table.equals(second.table)
    assert list(first.table.columns) == ["t", "max_C", "mean_C", "bound"]
    assert (first.table["max_C"] <= first.table["bound"]).all()
    with pytest.raises(ValueError):
        sample_bundle_complexity(p53_network, BaseBundleSplit((0, 1, 2, 3), ()), 4)


def test_structure_report_for_p53(p53_network):
    report = analyze_structure(p53_network)
    assert report.injectivity.a0 == Fraction(1, 3)
    assert report.injectivity.delta == Fraction(1, 2)
    assert not report.non_degeneracy
    assert report.q == 3
    assert report.decompositions == [BaseBundleSplit((0, 1), (2, 3))]
    assert report.redundant_certified == []
    assert report.bounds[0].provenance == "general"


def test_structure_report_for_the_two_circuit(negative_circuit):
    report = analyze_structure(negative_circuit)
    assert report.circuit_sign == -1
    assert report.redundant_certified[0][0] == (0,)
    assert [bound.provenance for bound in report.bounds] == ["general", "bound-degree"]
    assert report.essential_certified


def test_structure_report_without_injectivity(slow_negative_circuit):
    report = analyze_structure(slow_negative_circuit)
    assert report.essential_certified == []
    assert any("not certified" in note for note in report.notes)
    json.dumps([bound.formula for bound in report.bounds])
