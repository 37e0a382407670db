"""Butterfly Toolkit - Service Layer"""

from .config_service import ToolkitConfigService, get_toolkit_config
from .import_service import load_edge_list, load_edge_list_file, serialize_edge_list, write_edge_list
from .graph_service import complete_biclique, random_bipartite, stats
from .exact_service import choose_side, exact_count, exact_count_side, exact_count_detailed
from .local_service import count_per_vertex, count_per_edge
from .sampling_service import run_estimator, build_wedge_index, plan_iterations
from .sparsify_service import edge_sparsify_estimate, color_sparsify_estimate, sparsify_run, suggest_p
from .oracle_service import enumerate_butterflies, brute_force_count, classify_pairs, variance_bounds, sample_space

__all__ = [
    'ToolkitConfigService',
    'get_toolkit_config',
    'load_edge_list',
    'load_edge_list_file',
    'serialize_edge_list',
    'write_edge_list',
    'complete_biclique',
    'random_bipartite',
    'stats',
    'choose_side',
    'exact_count',
    'exact_count_side',
    'exact_count_detailed',
    'count_per_vertex',
    'count_per_edge',
    'run_estimator',
    'build_wedge_index',
    'plan_iterations',
    'edge_sparsify_estimate',
    'color_sparsify_estimate',
    'sparsify_run',
    'suggest_p',
    'enumerate_butterflies',
    'brute_force_count',
    'classify_pairs',
    'variance_bounds',
    'sample_space'
]
