"""Minimal independence map of a graphoid relative to a chain.

For every node ``x`` in block ``k`` the boundary is the smallest set ``B``
of earlier-or-same-block nodes such that ``x`` is independent of the rest of
that prefix given ``B``.  Boundary members in the same block become
undirected neighbours, members of earlier blocks become parents.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor

from .errors import DomainError, InputError, InternalInvariantError
from .graph import Chain, HybridGraph, fmt_set, is_consistent, require_chain_graph
from .separation import IndependenceModel, IndependenceOracle, is_independent, separated

log = logging.getLogger(__name__)


class GraphOracle(IndependenceOracle):
    """Separation statements of a chain graph."""

    def __init__(self, G: HybridGraph):
        require_chain_graph(G)
        self.graph = G
        self.universe = G.nodes

    def query(self, X, Y, Z=()) -> bool:
        X, Y = frozenset(X), frozenset(Y)
        if not X or not Y:
            return True
        return separated(self.graph, X, Y, Z)


class ModelOracle(IndependenceOracle):
    """Statements of an explicit model; general triples via pairwise lookup."""

    def __init__(self, M: IndependenceModel, universe=None):
        self.model = M
        self.universe = frozenset(universe) if universe is not None else M.universe

    def query(self, X, Y, Z=()) -> bool:
        return is_independent(self.model, X, Y, Z)


def oracle_from_graph(G: HybridGraph) -> GraphOracle:
    return GraphOracle(G)


def oracle_from_model(M: IndependenceModel, universe=None) -> ModelOracle:
    return ModelOracle(M, universe)


def smallest_boundaries(oracle: IndependenceOracle, x, prefix: frozenset) -> list[frozenset]:
    """All minimum-cardinality ``B`` with ``x _|_ prefix - B | B``.

    ``prefix`` excludes ``x``.  When ``prefix - B`` is empty the statement
    holds by convention, so the search always terminates.
    """
    pool = sorted(prefix)
    for size in range(len(pool) + 1):
        found = []
        for combo in itertools.combinations(pool, size):
            B = frozenset(combo)
            rest = prefix - B
            if not rest or oracle.query({x}, rest, B):
                found.append(B)
        if found:
            return found
    raise InternalInvariantError("boundary search exhausted without the trivial solution")


def boundary_assignment(oracle: IndependenceOracle, alpha: Chain, order=None, workers: int = 1) -> dict:
    """Map each node to its unique smallest boundary.

    ``order`` only changes the sequence in which nodes are searched; with
    ``workers > 1`` the searches run on a thread pool.
    """
    nodes = list(order) if order is not None else sorted(alpha.nodes)

    def search(x):
        prefix = alpha.prefix(alpha.index(x)) - {x}
        found = smallest_boundaries(oracle, x, prefix)
        if len(found) > 1:
            raise DomainError(
                f"oracle is not a graphoid: node {x} has {len(found)} smallest boundaries "
                + ", ".join(fmt_set(b) for b in found)
            )
        return x, found[0]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return dict(pool.map(search, nodes))
    return dict(search(x) for x in nodes)


def mi_map(oracle: IndependenceOracle, alpha: Chain, order=None, workers: int = 1) -> HybridGraph:
    """The unique minimal independence map of ``oracle`` consistent with ``alpha``."""
    universe = frozenset(oracle.universe)
    if universe != alpha.nodes:
        raise InputError(
            f"oracle universe {fmt_set(universe)} differs from chain nodes {fmt_set(alpha.nodes)}"
        )
    if len(universe) > 12:
        log.warning("boundary search is exponential; %d nodes may be slow", len(universe))
    bd = boundary_assignment(oracle, alpha, order=order, workers=workers)

    directed = set()
    undirected = set()
    for x, B in bd.items():
        kx = alpha.index(x)
        for y in B:
            if alpha.index(y) == kx:
                if x not in bd[y]:
                    raise DomainError(
                        f"oracle is not a graphoid: {y} is in the boundary of {x} but not vice versa"
                    )
                undirected.add(frozenset((x, y)))
            else:
                directed.add((y, x))
    G = HybridGraph(universe, directed, undirected)
    if not is_consistent(G, alpha):
        raise InternalInvariantError(f"minimal map {G!r} is not consistent with {alpha!r}")
    return G
