"""Command handlers - each returns the records the front end prints."""

import logging
import sys
import time
from statistics import median
from typing import Any, Dict, List, Optional

from models.errors import InvalidArgumentError
from models.estimate import Estimate, EstimatorConfig, SamplingMethod, relative_error_pct
from models.graph import BipartiteGraph, Side, VertexRef
from models.run_report import RunReport
from models.sparsify_config import SparsifyConfig, SparsifyMethod
from services import graph_service, import_service, oracle_service
from services.config_service import get_toolkit_config
from services.exact_service import choose_side, exact_count, exact_count_detailed
from services.local_service import count_per_edge, count_per_vertex
from services.rng_service import trial_seed
from services.sampling_service import run_estimator
from services.sparsify_service import sparsify_run

logger = logging.getLogger(__name__)

Record = Dict[str, Any]

SPARSIFY_METHODS = {'espar': SparsifyMethod.EDGE, 'clrspar': SparsifyMethod.COLOR}


def _load(args) -> BipartiteGraph:
    return import_service.load_edge_list_file(args.path)


def _seed(args) -> int:
    return args.seed if args.seed is not None else get_toolkit_config().sampling.default_seed


def _threads(args) -> int:
    return args.threads if args.threads is not None else get_toolkit_config().sampling.threads


def _reference_count(args, graph: BipartiteGraph) -> Optional[int]:
    """Exact count for error reporting: supplied with --exact, or computed with --exact-for-error."""
    if args.exact is not None:
        return args.exact
    if args.exact_for_error:
        return exact_count(graph)
    return None


def _timing(args) -> bool:
    return not args.no_timing and get_toolkit_config().timing_enabled


def cmd_stats(args) -> List[Record]:
    graph = _load(args)
    return [{'command': 'stats', **graph_service.stats(graph).to_dict()}]


def cmd_exact(args) -> List[Record]:
    graph = _load(args)
    requested = (args.side or 'auto').lower()
    start = time.perf_counter()
    if requested == 'auto':
        result = exact_count_detailed(graph)
    else:
        result = exact_count_detailed(graph, Side.parse(requested))
    elapsed = time.perf_counter() - start
    choice = choose_side(graph)
    report = RunReport(
        command='exact', method='exact', estimate=result.count, exact=result.count,
        elapsed_seconds=elapsed, params={'side': requested},
        details={'side': result.side.value, 'costLeft': choice.cost_left, 'costRight': choice.cost_right,
                 'counterUpdates': result.counter_updates, 'triplesVisited': result.triples_visited},
    )
    return [report.to_dict(_timing(args))]


def _estimator_config(args, method: SamplingMethod, seed: int) -> EstimatorConfig:
    settings = get_toolkit_config().sampling
    return EstimatorConfig(
        method=method,
        iterations=args.iterations,
        time_budget=args.time_budget,
        seed=seed,
        fast_edge_repeats=args.fast_repeats if args.fast_repeats is not None else settings.fast_edge_repeats,
        groups=args.groups,
        group_size=args.group_size,
        trace=args.trace or bool(getattr(args, 'target_error', None)),
        threads=_threads(args),
        clock_check_interval=settings.clock_check_interval,
    )


def _sample_report(estimate: Estimate, cfg: EstimatorConfig, exact: Optional[int], with_trace: bool) -> RunReport:
    estimate.with_exact(exact)
    details = {'perGroupMeans': estimate.per_group_means} if estimate.per_group_means else {}
    return RunReport(
        command='sample', method=cfg.method.value, estimate=estimate.value, exact=exact,
        iterations=estimate.iterations_done, elapsed_seconds=estimate.elapsed, seed=estimate.seed,
        params=cfg.to_params(), trace=estimate.trace if with_trace else None, details=details,
    )


def cmd_sample(args) -> List[Record]:
    graph = _load(args)
    cfg = _estimator_config(args, SamplingMethod.parse(args.method), _seed(args))
    exact = _reference_count(args, graph)
    estimate = run_estimator(graph, cfg)
    return [_sample_report(estimate, cfg, exact, args.trace).to_dict(_timing(args))]


def _sparsify_config(args, method: SparsifyMethod, seed: int, trials: Optional[int] = None) -> SparsifyConfig:
    return SparsifyConfig(method=method, p=args.p, colors=args.colors, seed=seed,
                          trials=trials or args.trials, threads=_threads(args))


def _sparsify_report(estimate: Estimate, cfg: SparsifyConfig, exact: Optional[int]) -> RunReport:
    return RunReport(
        command='sparsify', method=cfg.method.value, estimate=estimate.value, exact=exact,
        iterations=estimate.iterations_done, elapsed_seconds=estimate.elapsed, seed=estimate.seed,
        params=cfg.to_params(), details={'trialValues': estimate.trial_values},
    )


def cmd_sparsify(args) -> List[Record]:
    graph = _load(args)
    cfg = _sparsify_config(args, SparsifyMethod.parse(args.method), _seed(args))
    exact = _reference_count(args, graph)
    estimate = sparsify_run(graph, cfg, pilot_bfly=args.pilot)
    return [_sparsify_report(estimate, cfg, exact).to_dict(_timing(args))]


def cmd_generate(args) -> List[Record]:
    if args.kind == 'biclique':
        graph = graph_service.complete_biclique(args.a, args.b)
        params = {'a': str(args.a), 'b': str(args.b)}
    else:
        if args.p is None:
            raise InvalidArgumentError("random generation needs an edge probability p")
        graph = graph_service.random_bipartite(args.a, args.b, args.p, _seed(args))
        params = {'a': str(args.a), 'b': str(args.b), 'p': repr(float(args.p)), 'seed': str(_seed(args))}

    if not args.out:
        sys.stdout.write(import_service.serialize_edge_list(graph))
        return []
    import_service.write_edge_list(graph, args.out)
    return [{'command': 'generate', 'kind': args.kind, 'path': args.out, 'params': params,
             'n': graph.vertex_count, 'm': graph.edge_count}]


def cmd_local(args) -> List[Record]:
    graph = _load(args)
    if (args.vertex is None) == (args.edge is None):
        raise InvalidArgumentError("Give exactly one of --vertex side:index and --edge LEFT RIGHT")
    if args.vertex is not None:
        vertex = VertexRef.parse(args.vertex)
        count = count_per_vertex(graph, vertex)
        report = RunReport(command='local', method='vertex', estimate=count, exact=count,
                           params={'vertex': str(vertex)})
    else:
        left = VertexRef(Side.LEFT, args.edge[0])
        right = VertexRef(Side.RIGHT, args.edge[1])
        count = count_per_edge(graph, left, right)
        report = RunReport(command='local', method='edge', estimate=count, exact=count,
                           params={'edge': f"{left} {right}"})
    return [report.to_dict(_timing(args))]


def cmd_pairs(args) -> List[Record]:
    graph = _load(args)
    counts = oracle_service.classify_pairs(graph, args.max_side, args.max_butterflies)
    butterflies = oracle_service.brute_force_count(graph, args.max_side)
    p = args.p if args.p is not None else get_toolkit_config().sparsify.report_probability
    bounds = oracle_service.variance_bounds(graph, counts, butterflies, p)
    return [{
        'command': 'pairs',
        'butterflies': butterflies,
        **counts.to_dict(),
        'bounds': bounds.to_dict(),
        'observation': {
            'limits': oracle_service.observation_limits(graph, butterflies),
            'holds': oracle_service.satisfies_observation(graph, butterflies, counts),
        },
    }]


def _first_time_below(estimate: Estimate, target: float):
    for point in estimate.trace:
        if point.relative_error_pct is not None and point.relative_error_pct <= target:
            return point.iterations, point.elapsed_seconds
    return None, None


def cmd_compare(args) -> List[Record]:
    """Each method over `trials` derived seeds: median error, median time, time to the target error."""
    graph = _load(args)
    exact = _reference_count(args, graph)
    if exact is None:
        exact = exact_count(graph)
    seed = _seed(args)
    include_timing = _timing(args)

    records = []
    for name in args.methods:
        errors, elapsed, estimates = [], [], []
        reach_iterations, reach_seconds = [], []
        for trial in range(args.trials):
            run_seed = trial_seed(seed, trial)
            if name in SPARSIFY_METHODS:
                cfg = _sparsify_config(args, SPARSIFY_METHODS[name], run_seed, trials=1)
                estimate = sparsify_run(graph, cfg)
                params = cfg.to_params()
            else:
                cfg = _estimator_config(args, SamplingMethod.parse(name), run_seed)
                estimate = run_estimator(graph, cfg).with_exact(exact)
                params = cfg.to_params()
                if args.target_error is not None:
                    iterations, seconds = _first_time_below(estimate, args.target_error)
                    if iterations is not None:
                        reach_iterations.append(iterations)
                        reach_seconds.append(seconds)
            estimates.append(estimate.value)
            errors.append(relative_error_pct(estimate.value, exact))
            elapsed.append(estimate.elapsed)

        details: Dict[str, Any] = {
            'trials': args.trials,
            'medianRelativeErrorPct': median(errors) if None not in errors else None,
        }
        if args.target_error is not None and name not in SPARSIFY_METHODS:
            details['targetErrorPct'] = args.target_error
            details['trialsReachingTarget'] = len(reach_iterations)
            details['medianIterationsToTarget'] = median(reach_iterations) if reach_iterations else None
            if include_timing:
                details['medianSecondsToTarget'] = median(reach_seconds) if reach_seconds else None
        report = RunReport(
            command='compare', method=name, estimate=median(estimates), exact=exact,
            iterations=args.trials, elapsed_seconds=median(elapsed), seed=seed,
            params=params, details=details,
        )
        records.append(report.to_dict(include_timing))
    return records


COMMANDS = {
    'stats': cmd_stats,
    'exact': cmd_exact,
    'sample': cmd_sample,
    'sparsify': cmd_sparsify,
    'generate': cmd_generate,
    'local': cmd_local,
    'pairs': cmd_pairs,
    'compare': cmd_compare,
}
