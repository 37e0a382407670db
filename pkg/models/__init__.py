"""Butterfly Toolkit - Data Models"""

from .errors import (
    ButterflyToolkitError,
    InvalidArgumentError,
    InvalidVertexError,
    NotAnEdgeError,
    GraphParseError,
    EmptyGraphError,
    NoWedgesError,
    CountOverflowError,
    OracleGuardError,
    PairClassificationError
)
from .graph import Side, VertexRef, BipartiteGraph, GraphStats
from .exact_result import SideChoice, ExactCountResult
from .butterfly import Butterfly, LocalCount, PairTypeCounts
from .estimate import SamplingMethod, EstimatorConfig, Estimate, TracePoint, IterationPlan
from .wedge_index import WedgeIndex
from .sparsify_config import SparsifyMethod, SparsifyConfig
from .variance import VarianceBounds, SampleSpace, SampleSpaceKind
from .run_report import RunReport

__all__ = [
    # Errors
    'ButterflyToolkitError',
    'InvalidArgumentError',
    'InvalidVertexError',
    'NotAnEdgeError',
    'GraphParseError',
    'EmptyGraphError',
    'NoWedgesError',
    'CountOverflowError',
    'OracleGuardError',
    'PairClassificationError',
    # Graph
    'Side',
    'VertexRef',
    'BipartiteGraph',
    'GraphStats',
    'SideChoice',
    'ExactCountResult',
    'Butterfly',
    'LocalCount',
    'PairTypeCounts',
    # Estimators
    'SamplingMethod',
    'EstimatorConfig',
    'Estimate',
    'TracePoint',
    'IterationPlan',
    'WedgeIndex',
    'SparsifyMethod',
    'SparsifyConfig',
    'VarianceBounds',
    'SampleSpace',
    'SampleSpaceKind',
    'RunReport'
]
