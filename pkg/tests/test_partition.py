from fractions import Fraction

import pytest

from regnet_complexity import presets
from regnet_complexity.model import InvalidNetworkError, NetworkSpec, OffsetSequence
from regnet_complexity.numerics import FlaggedInterval
from regnet_complexity.partition import (
    InjectivityError,
    PartitionEngine,
    PartitionInvariantError,
    Specification,
    build_base_partition,
    check_disjoint_projections,
    complexity_trace,
    degeneracy,
    driving_multiplicity,
    grid_oracle_complexity,
    iterate_generations,
    max_degeneracy,
    sequence_trace,
    step,
)

HALF = Fraction(1, 2)


def test_coordinate_partition_of_the_self_inhibitor(self_inhibitor):
    partition = build_base_partition(self_inhibitor)
    atoms = partition.coordinates[0].atoms
    assert atoms == (
        FlaggedInterval(Fraction(0), HALF, True, False),
        FlaggedInterval(HALF, Fraction(1), True, True),
    )
    assert partition.size == 2 and partition.c == 1
    assert partition.drive(0) == (1,)
    assert partition.drive(1) == (0,)


def test_opposite_signs_at_one_threshold_isolate_it(self_inhibitor):
    partition = build_base_partition(self_inhibitor, extra_cuts={0: [(HALF, 1)]})
    atoms = partition.coordinates[0].atoms
    assert len(atoms) == 3
    assert atoms[1] == FlaggedInterval.singleton(HALF)
    assert atoms[2] == FlaggedInterval(HALF, Fraction(1), False, True)


def test_boundary_threshold_yields_singleton_atom():
    spec = presets.self_inhibitor(Fraction(1, 4), Fraction(1))
    atoms = build_base_partition(spec).coordinates[0].atoms
    assert atoms == (FlaggedInterval(Fraction(0), Fraction(1), True, False), FlaggedInterval.singleton(Fraction(1)))


def test_mixed_radix_symbols(toggle_switch):
    partition = build_base_partition(toggle_switch)
    assert partition.sizes == (2, 2)
    assert [partition.decode(symbol) for symbol in range(4)] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert partition.symbol_of((Fraction(3, 4), Fraction(1, 4))) == 2
    assert partition.drive(partition.encode((0, 0))) == (1, 1)
    assert partition.drive(partition.encode((1, 1))) == (0, 0)


def test_self_inhibitor_trace_is_constant(self_inhibitor):
    trace = complexity_trace(self_inhibitor, 12)
    assert trace.counts == [2] * 12
    assert trace.violations == []
    assert trace.rows[0].branching_atoms == 0 and trace.rows[0].max_branch == 0
    assert trace.value_at(12) == 2
    with pytest.raises(IndexError):
        trace.value_at(13)


def test_rotating_inhibitor_counts(rotating_inhibitor):
    trace = complexity_trace(rotating_inhibitor, 6)
    assert trace.counts == [2, 3, 3, 3, 3, 3]
    assert trace.rows[1].branching_atoms == 1
    assert trace.rows[1].max_branch == 2


def test_itineraries_are_tracked(self_inhibitor):
    generations = list(iterate_generations(self_inhibitor, 3))
    final = generations[-1]
    assert sorted(final.itinerary(k) for k in range(len(final))) == [(0, 1, 0), (1, 0, 1)]
    assert final.rect(0).sides[0].lo == Fraction(3, 16)


def test_lattice_images_export_exact_rationals(self_inhibitor):
    first, second = iterate_generations(self_inhibitor, 2)
    sides = sorted((rect.sides[0] for rect in second.rects()), key=FlaggedInterval.sort_key)
    assert sides == [
        FlaggedInterval.closed(Fraction(1, 8), Fraction(1, 4)),
        FlaggedInterval(Fraction(3, 4), Fraction(7, 8), True, False),
    ]
    assert first.scale == 2 and second.scale == 8


def test_modes_agree_on_injective_networks(negative_circuit, rotating_inhibitor, p53_network):
    for spec, horizon in ((negative_circuit, 10), (rotating_inhibitor, 15), (p53_network, 8)):
        exact = complexity_trace(spec, horizon, "itinerary-exact")
        fast = complexity_trace(spec, horizon, "injective-fast")
        assert exact.counts == fast.counts
        assert exact.violations == [] and fast.violations == []


def test_injective_fast_is_refused_without_injectivity(slow_negative_circuit):
    with pytest.raises(InjectivityError) as info:
        complexity_trace(slow_negative_circuit, 5, "injective-fast")
    assert info.value.report.witness.coordinate == 0


def test_unknown_mode_is_rejected(self_inhibitor):
    with pytest.raises(ValueError):
        PartitionEngine(self_inhibitor, mode="fastest")


def test_counts_are_nondecreasing_for_slow_contraction(slow_negative_circuit):
    trace = complexity_trace(slow_negative_circuit, 20)
    assert all(b >= a for a, b in zip(trace.counts, trace.counts[1:]))
    assert trace.rows[-1].max_branch <= trace.partition.size
    assert not trace.injective


def test_atom_cap_truncates(slow_negative_circuit, config):
    config.engine.max_atoms = 50
    trace = complexity_trace(slow_negative_circuit, 100, config=config)
    assert trace.truncated
    assert "atom cap" in trace.truncation_reason
    assert trace.t_reached < 100
    assert trace.counts[-1] <= 50


def test_float_mode_matches_rational_on_dyadic_parameters(self_inhibitor, negative_circuit, config):
    config.numeric.mode = "float"
    for spec in (self_inhibitor, negative_circuit):
        floats = complexity_trace(spec, 10, config=config)
        exact = complexity_trace(spec, 10)
        assert floats.counts == exact.counts
        assert not floats.exact


@pytest.mark.parametrize("horizon", [1, 4, 12])
def test_grid_oracle_matches_the_engine_for_the_self_inhibitor(rotating_inhibitor, horizon):
    trace = complexity_trace(rotating_inhibitor, horizon)
    assert grid_oracle_complexity(rotating_inhibitor, horizon, 21) == trace.counts[-1]


@pytest.mark.parametrize("horizon", [1, 3, 8])
def test_grid_oracle_matches_the_engine_for_the_negative_circuit(negative_circuit, horizon):
    trace = complexity_trace(negative_circuit, horizon)
    assert grid_oracle_complexity(negative_circuit, horizon, 9) == trace.counts[-1]


def test_grid_oracle_arguments(self_inhibitor):
    with pytest.raises(ValueError):
        grid_oracle_complexity(self_inhibitor, 0, 5)
    with pytest.raises(ValueError):
        grid_oracle_complexity(self_inhibitor, 2, 1)


def test_single_step_matches_iteration(negative_circuit):
    generations = list(iterate_generations(negative_circuit, 3))
    following = step(generations[1], negative_circuit)
    assert len(following) == len(generations[2])


def test_verify_detects_mislabelled_atoms(self_inhibitor):
    engine = PartitionEngine(self_inhibitor)
    generation = engine.initial()
    generation.nodes[0].symbol = 1
    with pytest.raises(PartitionInvariantError):
        engine.verify(generation)


def test_projections_of_injective_generations_are_disjoint(p53_network):
    for generation in iterate_generations(p53_network, 6):
        assert check_disjoint_projections(generation) == []


def test_degeneracy_counts(negative_circuit):
    *_, generation = iterate_generations(negative_circuit, 4)
    assert max_degeneracy(generation, ()) == len(generation)
    assert max_degeneracy(generation, (0, 1)) == 1
    specification = Specification.of_atom(generation, 0, (0,))
    assert degeneracy(generation, specification) >= 1
    assert driving_multiplicity(generation, 0, 1) <= len(build_base_partition(negative_circuit).coordinates[1])


def test_sequence_trace_respects_the_linear_bound():
    spec = NetworkSpec.from_matrices([[HALF]], [[HALF]], [[-1]], Fraction(1, 4), mode="sequence")
    offsets = OffsetSequence.from_lists([[Fraction(k % 3, 4)] for k in range(12)], "periodic")
    trace = sequence_trace(spec, offsets, 20)
    assert trace.t_reached == 20
    assert all(row.C <= row.t + 2 for row in trace.rows)


def test_finite_offsets_stop_the_trace():
    spec = NetworkSpec.from_matrices([[HALF]], [[HALF]], [[-1]], Fraction(1, 4), mode="sequence")
    offsets = OffsetSequence.from_lists([[0], [Fraction(1, 4)], [0]], "finite")
    assert sequence_trace(spec, offsets, 10).t_reached == 4


def test_sequence_trace_rejects_bad_offsets():
    spec = NetworkSpec.from_matrices([[HALF]], [[HALF]], [[-1]], Fraction(1, 4), mode="sequence")
    with pytest.raises(InvalidNetworkError):
        sequence_trace(spec, OffsetSequence.constant([Fraction(3, 4)]), 5)


def test_invalid_network_is_rejected():
    spec = NetworkSpec.from_matrices([[HALF]], [[HALF]], [[-1]], Fraction(1, 4))
    with pytest.raises(InvalidNetworkError):
        complexity_trace(spec, 3)


@pytest.mark.parametrize("preset", ["self_inhibitor", "rotating_inhibitor", "negative_circuit", "toggle_switch", "p53_network"])
def test_zero_offsets_reproduce_the_autonomous_trace(preset, request):
    spec = request.getfixturevalue(preset)
    offsets = OffsetSequence.constant([0] * spec.dimension)
    assert sequence_trace(spec, offsets, 8).counts == complexity_trace(spec, 8).counts
