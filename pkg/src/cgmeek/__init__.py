"""Chain graph separation, independence maps, and monotone graph transformations."""

from .errors import (
    CGError,
    CorruptTraceError,
    DomainError,
    InputError,
    InternalInvariantError,
    ResourceError,
)
from .graph import (
    Chain,
    HybridGraph,
    boundary,
    components,
    consistent_chain,
    descendants,
    is_block,
    is_chain_graph,
    is_consistent,
    maximal_components,
    neighbors,
    parents,
    terminal_components,
)
from .kernel import BACKEND
from .meek import Trace, TraceReport, construct_beta, method_b3, method_g2h, verify_trace
from .mimap import mi_map, oracle_from_graph, oracle_from_model
from .separation import (
    IndependenceModel,
    Route,
    Triple,
    check_graphoid,
    check_pairwise_block_recursive,
    enumerate_model,
    is_active_route,
    is_imap,
    is_independent,
    separated,
    separated_bruteforce,
    separated_moral,
)
from .transform import (
    ElementaryOp,
    fbmerge,
    fbsplit,
    is_feasible_merge,
    is_feasible_split,
    merge,
    split,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CGError",
    "Chain",
    "CorruptTraceError",
    "DomainError",
    "ElementaryOp",
    "HybridGraph",
    "IndependenceModel",
    "InputError",
    "InternalInvariantError",
    "ResourceError",
    "Route",
    "Trace",
    "TraceReport",
    "Triple",
    "boundary",
    "check_graphoid",
    "check_pairwise_block_recursive",
    "components",
    "consistent_chain",
    "construct_beta",
    "descendants",
    "enumerate_model",
    "fbmerge",
    "fbsplit",
    "is_active_route",
    "is_block",
    "is_chain_graph",
    "is_consistent",
    "is_feasible_merge",
    "is_feasible_split",
    "is_imap",
    "is_independent",
    "maximal_components",
    "merge",
    "method_b3",
    "method_g2h",
    "mi_map",
    "neighbors",
    "oracle_from_graph",
    "oracle_from_model",
    "parents",
    "separated",
    "separated_bruteforce",
    "separated_moral",
    "split",
    "terminal_components",
    "verify_trace",
]
