import logging

import numpy as np
import pytest
from hypothesis import given, settings

from models.errors import InvalidArgumentError, NoWedgesError, NotAnEdgeError
from models.estimate import Estimate, EstimatorConfig, SamplingMethod, relative_error_pct
from models.graph import Side, VertexRef
from services.exact_service import exact_count
from services.graph_service import random_bipartite
from services.local_service import count_per_edge
from services.oracle_service import classify_pairs
from services.rng_service import StreamTag, derived_generator
from services.sampling_service import (
    build_wedge_index,
    combine,
    esamp_value,
    fast_ebfc_estimate,
    fast_ebfc_trial_values,
    fast_esamp_iteration,
    full_pass_mean,
    plan_fast_edge_repeats,
    plan_iterations,
    run_estimator,
    vsamp_value,
    wsamp_value,
)
from strategies import bipartite_graphs, random_graph

L = Side.LEFT
R = Side.RIGHT


def rng(index: int = 0) -> np.random.Generator:
    return derived_generator(11, StreamTag.ITERATION, index)


# ============ PER-SAMPLE VALUES ============

def test_vertex_values_two_by_two(k22):
    assert [vsamp_value(k22, i) for i in range(4)] == [1.0] * 4


def test_vertex_values_three_by_three(k33):
    assert {vsamp_value(k33, i) for i in range(6)} == {9.0}


def test_vertex_values_three_by_two(k32):
    assert [vsamp_value(k32, i) for i in range(5)] == [2.5, 2.5, 2.5, 3.75, 3.75]
    assert full_pass_mean(k32, SamplingMethod.VERTEX) == 3.0


def test_edge_values(k22, k32, star15):
    assert {esamp_value(k22, k) for k in range(4)} == {1.0}
    assert {esamp_value(k32, k) for k in range(6)} == {3.0}
    assert {esamp_value(star15, k) for k in range(5)} == {0.0}


def test_wedge_index_totals(k22, k32, single_edge):
    assert build_wedge_index(k22).total_wedges == 4
    assert build_wedge_index(k32).total_wedges == 9
    assert build_wedge_index(single_edge).total_wedges == 0


def test_wedge_index_hits_each_wedge_once(k32):
    index = build_wedge_index(k32)
    assert index.prefix.tolist() == [1, 2, 3, 6, 9]
    centers = index.locate(np.arange(1, 10))
    assert np.bincount(centers, minlength=5).tolist() == [1, 1, 1, 3, 3]


def test_wedge_index_refuses_sampling_without_wedges(single_edge):
    with pytest.raises(NoWedgesError):
        build_wedge_index(single_edge).sample_centers(rng(), 1)


def test_wedge_values_three_by_two(k32):
    assert wsamp_value(k32, 9, 0, 0, 1) == 4.5
    assert wsamp_value(k32, 9, 3, 0, 2) == 2.25
    assert full_pass_mean(k32, SamplingMethod.WEDGE) == 3.0


def test_wedge_values_single_butterfly_and_three_by_three(k22, k33):
    assert wsamp_value(k22, 4, 0, 0, 1) == 1.0
    assert {wsamp_value(k33, 18, c, i, j) for c in range(6) for i in range(3) for j in range(i + 1, 3)} == {9.0}


def test_fast_trials_single_butterfly(k22):
    values = fast_ebfc_trial_values(k22, 0, 0, np.array([0]), np.array([0]))
    assert values.tolist() == [1.0]


def test_fast_trials_three_by_three_always_close(k33):
    w, x = np.meshgrid(np.arange(2), np.arange(2), indexing='ij')
    values = fast_ebfc_trial_values(k33, 1, 2, w.ravel(), x.ravel())
    assert values.tolist() == [4.0] * 4


def test_fast_estimate_pendant_edge_skips_sampling(star13):
    generator = rng()
    assert fast_ebfc_estimate(star13, VertexRef(L, 0), VertexRef(R, 0), generator, 50) == 0.0
    assert generator.random() == rng().random()


def test_fast_estimate_rejects_non_edge(c6):
    with pytest.raises(NotAnEdgeError):
        fast_ebfc_estimate(c6, VertexRef(L, 0), VertexRef(R, 1), rng(), 10)


def test_fast_estimate_rejects_zero_repeats(k22):
    with pytest.raises(InvalidArgumentError):
        fast_ebfc_estimate(k22, VertexRef(L, 0), VertexRef(R, 0), rng(), 0)


def test_fast_edge_iteration_exact_cases(k22, k33, c6):
    assert fast_esamp_iteration(k22, rng(), 1) == 1.0
    assert {fast_esamp_iteration(k33, rng(i), 3) for i in range(10)} == {9.0}
    assert {fast_esamp_iteration(c6, rng(i), 20) for i in range(10)} == {0.0}


def test_fast_estimate_converges_on_edge():
    graph = random_graph(12, 12, 0.6, 4)
    left, right = graph.edge_at(0)
    truth = count_per_edge(graph, left, right)
    estimate = fast_ebfc_estimate(graph, left, right, rng(), 200_000)
    assert estimate == pytest.approx(truth, rel=0.05, abs=0.5)


# ============ FULL PASSES ============

@settings(max_examples=40, deadline=None)
@given(graph=bipartite_graphs(max_side=10))
def test_full_passes_equal_exact_count(graph):
    truth = exact_count(graph)
    assert full_pass_mean(graph, SamplingMethod.VERTEX) == pytest.approx(truth, rel=1e-9, abs=1e-9)
    assert full_pass_mean(graph, SamplingMethod.EDGE) == pytest.approx(truth, rel=1e-9, abs=1e-9)
    if build_wedge_index(graph).total_wedges:
        assert full_pass_mean(graph, SamplingMethod.WEDGE) == pytest.approx(truth, rel=1e-9, abs=1e-9)


def test_full_pass_not_defined_for_fast_edge(k22):
    with pytest.raises(InvalidArgumentError):
        full_pass_mean(k22, SamplingMethod.FAST_EDGE)


# ============ COMBINER ============

def test_combine_median_of_group_means():
    value, means = combine(np.array([2.25, 4.5, 2.25]), 3)
    assert value == 2.25
    assert means == [2.25, 4.5, 2.25]


def test_combine_single_group_is_mean():
    value, means = combine(np.array([1.0, 2.0, 6.0]), 1)
    assert value == 3.0
    assert means == []


def test_combine_with_too_few_values_warns(caplog):
    with caplog.at_level(logging.WARNING, logger='services.sampling_service'):
        value, means = combine(np.array([1.0, 5.0]), 3)
    assert value == 3.0
    assert means == []
    assert any('median of means' in record.getMessage() for record in caplog.records)


def test_vertex_run_on_single_butterfly(k22):
    estimate = run_estimator(k22, EstimatorConfig(SamplingMethod.VERTEX, iterations=10, seed=7))
    assert estimate.value == 1.0
    assert estimate.iterations_done == 10


def test_wedge_run_with_three_groups(k32):
    cfg = EstimatorConfig(SamplingMethod.WEDGE, iterations=1, groups=3, group_size=1, seed=5)
    estimate = run_estimator(k32, cfg)
    assert estimate.iterations_done == 3
    assert set(estimate.per_group_means) <= {2.25, 4.5}
    assert estimate.value == float(np.median(estimate.per_group_means))


def test_run_is_deterministic():
    graph = random_graph(15, 15, 0.4, 2)
    cfg = EstimatorConfig(SamplingMethod.EDGE, iterations=150, seed=99, clock_check_interval=16)
    assert run_estimator(graph, cfg).value == run_estimator(graph, cfg).value


@pytest.mark.parametrize('method', list(SamplingMethod))
def test_threads_do_not_change_result(method):
    graph = random_graph(20, 20, 0.3, 3)
    results = []
    for threads in (1, 4):
        cfg = EstimatorConfig(method, iterations=40, groups=5, seed=17, threads=threads,
                              fast_edge_repeats=25, clock_check_interval=16)
        estimate = run_estimator(graph, cfg)
        results.append((estimate.value, estimate.per_group_means, estimate.iterations_done))
    assert results[0] == results[1]
    assert results[0][2] == 200


def test_time_budget_stops_on_block_boundary(k22):
    cfg = EstimatorConfig(SamplingMethod.EDGE, time_budget=0.05, seed=1, clock_check_interval=16)
    estimate = run_estimator(k22, cfg)
    assert estimate.value == 1.0
    assert estimate.iterations_done >= 16
    assert estimate.iterations_done % 16 == 0
    assert estimate.elapsed >= 0.05


def test_trace_checkpoints(k32):
    cfg = EstimatorConfig(SamplingMethod.VERTEX, iterations=100, seed=3, trace=True, clock_check_interval=8)
    estimate = run_estimator(k32, cfg).with_exact(3)
    assert [point.iterations for point in estimate.trace] == [1, 2, 4, 8, 16, 32, 64, 100]
    elapsed = [point.elapsed_seconds for point in estimate.trace]
    assert elapsed == sorted(elapsed)
    assert estimate.trace[-1].estimate == pytest.approx(estimate.value)
    assert all(point.relative_error_pct == relative_error_pct(point.estimate, 3) for point in estimate.trace)


def test_no_trace_unless_requested(k22):
    assert run_estimator(k22, EstimatorConfig(SamplingMethod.EDGE, iterations=5)).trace == []


def test_wedge_run_without_wedges(single_edge):
    with pytest.raises(NoWedgesError):
        run_estimator(single_edge, EstimatorConfig(SamplingMethod.WEDGE, iterations=5))


@pytest.mark.parametrize('kwargs', [
    dict(iterations=5, time_budget=1.0),
    dict(),
    dict(iterations=0),
    dict(time_budget=0.0),
    dict(iterations=5, groups=2),
    dict(iterations=5, fast_edge_repeats=0),
    dict(iterations=5, seed=-1),
    dict(iterations=5, seed=2 ** 64),
    dict(iterations=5, threads=0),
])
def test_config_validation(kwargs):
    with pytest.raises(InvalidArgumentError):
        EstimatorConfig(SamplingMethod.EDGE, **kwargs)


def test_config_totals():
    cfg = EstimatorConfig('fast_edge', iterations=10, groups=3)
    assert cfg.method is SamplingMethod.FAST_EDGE
    assert cfg.total_iterations == 30
    assert EstimatorConfig(SamplingMethod.EDGE, iterations=10, groups=3, group_size=4).total_iterations == 12
    assert EstimatorConfig(SamplingMethod.EDGE, time_budget=1.0).total_iterations is None
    assert cfg.to_params() == {'groups': '3', 'iterations': '10', 'fastEdgeRepeats': '1000'}


def test_negative_estimate_rejected():
    with pytest.raises(InvalidArgumentError):
        Estimate(value=-1.0, iterations_done=1, elapsed=0.0, seed=0)


# ============ PLANNING ============

def test_plan_iterations(k32):
    plan = plan_iterations(k32, SamplingMethod.EDGE, epsilon=0.5, delta=0.01, pilot_bfly=3, pair_count=3)
    assert plan.groups == 37
    assert plan.group_size == 128
    assert plan.to_dict() == {'groups': 37, 'groupSize': 128, 'total': 37 * 128}


def test_plan_groups_are_odd(k32):
    plan = plan_iterations(k32, SamplingMethod.WEDGE, epsilon=1.0, delta=float(np.exp(-1)), pilot_bfly=3)
    assert plan.groups == 9
    assert plan.group_size == 24


def test_plan_accepts_members_and_names(k32):
    by_member = plan_iterations(k32, SamplingMethod.VERTEX, epsilon=0.5, delta=0.1, pilot_bfly=3)
    by_name = plan_iterations(k32, 'vertex', epsilon=0.5, delta=0.1, pilot_bfly=3)
    assert by_member == by_name
    assert SamplingMethod.parse(SamplingMethod.FAST_EDGE) is SamplingMethod.FAST_EDGE
    assert SamplingMethod.parse('Fast_Edge') is SamplingMethod.FAST_EDGE


def test_plan_needs_pilot(k32):
    with pytest.raises(InvalidArgumentError):
        plan_iterations(k32, SamplingMethod.VERTEX, epsilon=0.1, delta=0.1, pilot_bfly=0)


def test_plan_fast_edge_repeats():
    assert plan_fast_edge_repeats(3, 3, 0.5, 4) == 288


# ============ CONCENTRATION ============

CONCENTRATION_SEEDS = range(1, 9)


@pytest.fixture(scope='module')
def concentration_graph():
    graph = random_bipartite(200, 200, 0.1, seed=1)
    return graph, exact_count(graph)


@pytest.mark.slow
@pytest.mark.parametrize('method', [SamplingMethod.EDGE, SamplingMethod.WEDGE, SamplingMethod.FAST_EDGE])
def test_estimators_concentrate(concentration_graph, method):
    graph, truth = concentration_graph
    errors = []
    for seed in CONCENTRATION_SEEDS:
        cfg = EstimatorConfig(method, iterations=100_000, seed=seed, fast_edge_repeats=1000)
        errors.append(relative_error_pct(run_estimator(graph, cfg).value, truth))
    assert sum(error <= 5.0 for error in errors) >= 7, errors


PLANNED_PAIRS = {
    SamplingMethod.VERTEX: lambda counts: counts.p_V,
    SamplingMethod.EDGE: lambda counts: counts.p_E,
    SamplingMethod.WEDGE: lambda counts: counts.p_1w,
}


@pytest.mark.parametrize('method', list(PLANNED_PAIRS))
def test_planned_group_size_concentrates(method):
    graph = random_graph(8, 8, 0.5, 3)
    truth = exact_count(graph)
    assert truth > 0
    epsilon = 0.5
    pairs = PLANNED_PAIRS[method](classify_pairs(graph))
    alpha = plan_iterations(graph, method, epsilon=epsilon, delta=0.5, pilot_bfly=truth,
                            pair_count=pairs).group_size
    misses = 0
    for seed in range(32):
        value = run_estimator(graph, EstimatorConfig(method, iterations=alpha, seed=seed)).value
        misses += abs(value - truth) > epsilon * truth
    assert misses <= 4, (alpha, misses)
