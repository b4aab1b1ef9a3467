"""k-path rooted subgraph counting, edge-dropping augmentation and benchmark tooling."""

from .augment import EdgeAugPlan, drop_probabilities, edge_importance, make_positive_pair, sample_view
from .counting import (
    SubstructureKind,
    count_all,
    differential_report,
    mp_count,
    mp_cycles_at,
    mp_path_vector,
    mp_paths_from,
    oracle_count,
    oracle_cycles_at,
    oracle_paths_from,
)
from .dataset import DatasetRecord, read_dataset, write_dataset
from .graph import Graph, GraphError, build_graph, gen_random_graph, neighbors_within
from .tuples import KTuple, RootedSubgraph, encode_graph, enumerate_k_tuples, extract_rooted_subgraph, readout

__version__ = "0.1.0"

__all__ = [
    "DatasetRecord",
    "EdgeAugPlan",
    "Graph",
    "GraphError",
    "KTuple",
    "RootedSubgraph",
    "SubstructureKind",
    "build_graph",
    "count_all",
    "differential_report",
    "drop_probabilities",
    "edge_importance",
    "encode_graph",
    "enumerate_k_tuples",
    "extract_rooted_subgraph",
    "gen_random_graph",
    "make_positive_pair",
    "mp_count",
    "mp_cycles_at",
    "mp_path_vector",
    "mp_paths_from",
    "neighbors_within",
    "oracle_count",
    "oracle_cycles_at",
    "oracle_paths_from",
    "read_dataset",
    "readout",
    "sample_view",
    "write_dataset",
]
