"""Bipartite stochastic block models.

Generative sampling (uncorrected and degree-corrected), maximum-likelihood
partition inference via a Kernighan-Lin-style search, baseline methods
(unipartite block model, one-mode projections, greedy modularity), and a
benchmark harness for planted-partition experiments.
"""

from .engine import HAVE_COMPILED, default_engine_name
from .errors import BisbmError, GraphFormatError, GraphValidationError, PartitionError
from .generate import (
    BlockAffinity,
    PlantedInstance,
    interpolate_noise,
    make_clump_ring,
    make_easy_case,
    make_hard_case,
    make_heterogeneous_case,
    sample_network,
)
from .graph import (
    BipartiteGraph,
    BlockStats,
    Partition,
    UnipartiteGraph,
    block_stats,
    edge_list_text,
    parse_edge_list,
    parse_partition,
    parse_types,
    parse_unipartite_edge_list,
    partition_text,
    types_by_convention,
    types_text,
)
from .metrics import ContingencyTable, nmi, pure_type_fraction
from .modularity import greedy_modularity, modularity
from .objective import (
    BISBM,
    BISBM_DC,
    SBM,
    SBM_DC,
    ModelSpec,
    SearchState,
    adjusted_score,
    delta_log_likelihood,
    estimate_parameters,
    log_likelihood,
)
from .search import FitResult, is_local_optimum, kl_fit, search_from_partition

__version__ = "0.1.0"

__all__ = [
    "BISBM",
    "BISBM_DC",
    "SBM",
    "SBM_DC",
    "BipartiteGraph",
    "BisbmError",
    "BlockAffinity",
    "BlockStats",
    "ContingencyTable",
    "FitResult",
    "GraphFormatError",
    "GraphValidationError",
    "HAVE_COMPILED",
    "ModelSpec",
    "Partition",
    "PartitionError",
    "PlantedInstance",
    "SearchState",
    "UnipartiteGraph",
    "adjusted_score",
    "block_stats",
    "default_engine_name",
    "delta_log_likelihood",
    "edge_list_text",
    "estimate_parameters",
    "greedy_modularity",
    "interpolate_noise",
    "is_local_optimum",
    "kl_fit",
    "log_likelihood",
    "make_clump_ring",
    "make_easy_case",
    "make_hard_case",
    "make_heterogeneous_case",
    "modularity",
    "nmi",
    "parse_edge_list",
    "parse_partition",
    "parse_types",
    "parse_unipartite_edge_list",
    "partition_text",
    "pure_type_fraction",
    "sample_network",
    "search_from_partition",
    "types_by_convention",
    "types_text",
]
