"""Seeded random chain graphs and independence-map pairs for testing.

Chains are drawn uniformly from the ordered set partitions of the node set.
Every edge the chain allows is then included independently with a fixed
probability: undirected inside a block, directed left to right across blocks.
"""

from __future__ import annotations

import itertools
import random
import string
from functools import lru_cache
from math import comb

from .graph import Chain, HybridGraph
from .mimap import mi_map, oracle_from_graph

EDGE_PROBABILITY = 0.4


def node_labels(n: int) -> list[str]:
    if n <= 26:
        return list(string.ascii_uppercase[:n])
    width = len(str(n - 1))
    return [f"V{i:0{width}d}" for i in range(n)]


@lru_cache(maxsize=None)
def ordered_partitions(n: int) -> int:
    """Number of ordered set partitions of ``n`` items (Fubini number)."""
    if n == 0:
        return 1
    return sum(comb(n, k) * ordered_partitions(n - k) for k in range(1, n + 1))


def random_chain(rng: random.Random, nodes) -> Chain:
    remaining = sorted(nodes)
    blocks = []
    while remaining:
        n = len(remaining)
        r = rng.randrange(ordered_partitions(n))
        for k in range(1, n + 1):
            w = comb(n, k) * ordered_partitions(n - k)
            if r < w:
                break
            r -= w
        first = rng.sample(remaining, k)
        blocks.append(sorted(first))
        remaining = [v for v in remaining if v not in first]
    return Chain(blocks)


def legal_edges(alpha: Chain):
    """All edges a graph consistent with ``alpha`` may have, in label order."""
    nodes = sorted(alpha.nodes)
    for a, b in itertools.combinations(nodes, 2):
        ia, ib = alpha.index(a), alpha.index(b)
        if ia == ib:
            yield "--", a, b
        elif ia < ib:
            yield "->", a, b
        else:
            yield "->", b, a


def random_cg_with_chain(rng: random.Random, alpha: Chain, p: float = EDGE_PROBABILITY) -> HybridGraph:
    directed, undirected = [], []
    for sym, a, b in legal_edges(alpha):
        if rng.random() < p:
            (undirected if sym == "--" else directed).append((a, b))
    return HybridGraph(alpha.nodes, directed, undirected)


def random_cg(rng: random.Random, n: int, p: float = EDGE_PROBABILITY) -> HybridGraph:
    alpha = random_chain(rng, node_labels(n))
    return random_cg_with_chain(rng, alpha, p)


def random_imap_pair(rng: random.Random, n: int, p: float = EDGE_PROBABILITY) -> tuple[HybridGraph, HybridGraph]:
    """``(G, H)`` with ``I(H)`` contained in ``I(G)`` by construction.

    ``H`` is the minimal map of ``I(G)`` for a fresh chain plus a random set
    of extra edges that chain allows.
    """
    G = random_cg(rng, n, p)
    alpha = random_chain(rng, G.nodes)
    H = mi_map(oracle_from_graph(G), alpha)
    directed, undirected = set(H.directed), set(H.undirected)
    for sym, a, b in legal_edges(alpha):
        if H.adjacent(a, b) or rng.random() >= p:
            continue
        if sym == "--":
            undirected.add(frozenset((a, b)))
        else:
            directed.add((a, b))
    return G, HybridGraph(H.nodes, directed, undirected)


def corpus(count: int, max_n: int = 5, seed: int = 0, p: float = EDGE_PROBABILITY) -> list[HybridGraph]:
    """``count`` graphs with sizes cycling through ``1..max_n``, graph ``i`` seeded by ``seed + i``."""
    return [random_cg(random.Random(seed + i), 1 + i % max_n, p) for i in range(count)]


def imap_corpus(count: int, max_n: int = 5, seed: int = 0, p: float = EDGE_PROBABILITY):
    return [random_imap_pair(random.Random(seed + i), 1 + i % max_n, p) for i in range(count)]
