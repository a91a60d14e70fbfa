"""Separation in chain graphs and the independence models it induces.

Three decision procedures are provided for ``X _|_ Y | Z``:

* :func:`separated` -- reachability over (node, entry, z-seen) states, run by
  the compiled kernel when available.  This is the production path.
* :func:`separated_bruteforce` -- explicit search over routes, judging each
  candidate with :func:`is_active_route`.
* :func:`separated_moral` -- moralisation of the smallest anterior set
  followed by undirected vertex separation.

The latter two exist to cross-check the first.
"""

from __future__ import annotations

import itertools
from collections import deque
from functools import lru_cache
from typing import Iterable, NamedTuple

from . import kernel
from .errors import DomainError, InputError, ResourceError
from .graph import (
    Chain,
    HybridGraph,
    Node,
    as_node_set,
    components,
    fmt_set,
    is_chain_graph,
    is_consistent,
    require_chain_graph,
)

DEFAULT_MAX_NODES = 10


class Route:
    """A sequence of nodes, consecutive ones adjacent.  Repeats are allowed."""

    __slots__ = ("nodes",)

    def __init__(self, nodes: Iterable[Node]):
        self.nodes = tuple(nodes)
        if not self.nodes:
            raise InputError("a route needs at least one node")

    def __len__(self):
        """Number of edges traversed."""
        return len(self.nodes) - 1

    def __eq__(self, other):
        return isinstance(other, Route) and self.nodes == other.nodes

    def __hash__(self):
        return hash(self.nodes)

    def __repr__(self):
        return f"Route({', '.join(self.nodes)})"

    def steps(self, G: HybridGraph) -> list[str]:
        """Edge symbol for each step as seen in traversal order: ``-``, ``->`` or ``<-``."""
        out = []
        for a, b in zip(self.nodes, self.nodes[1:]):
            if G.has_undirected(a, b):
                out.append("-")
            elif G.has_directed(a, b):
                out.append("->")
            elif G.has_directed(b, a):
                out.append("<-")
            else:
                raise InputError(f"route step {a},{b} is not an edge of the graph")
        return out


def sections(G: HybridGraph, route: Route) -> list[tuple[int, int, bool]]:
    """Maximal undirected subroutes as ``(first, last, is_collider)`` positions."""
    steps = route.steps(G)
    bounds = []
    start = 0
    for i, s in enumerate(steps):
        if s != "-":
            bounds.append((start, i))
            start = i + 1
    bounds.append((start, len(route.nodes) - 1))
    out = []
    for first, last in bounds:
        into_left = first > 0 and steps[first - 1] == "->"
        into_right = last < len(steps) and steps[last] == "<-"
        out.append((first, last, into_left and into_right))
    return out


def is_active_route(G: HybridGraph, route: Route, Z: Iterable[Node]) -> bool:
    Z = as_node_set(G, Z)
    as_node_set(G, route.nodes)
    for first, last, collider in sections(G, route):
        hit = any(v in Z for v in route.nodes[first : last + 1])
        if hit != collider:
            return False
    return True


def _check_triple(G: HybridGraph, X, Y, Z) -> tuple[frozenset, frozenset, frozenset]:
    X = as_node_set(G, X)
    Y = as_node_set(G, Y)
    Z = as_node_set(G, Z)
    if not X or not Y:
        raise InputError("X and Y must be nonempty")
    if X & Y or X & Z or Y & Z:
        raise InputError(f"sets must be disjoint: X={fmt_set(X)} Y={fmt_set(Y)} Z={fmt_set(Z)}")
    return X, Y, Z


@lru_cache(maxsize=4096)
def _masks(G: HybridGraph):
    order = G.sorted_nodes
    pos = {v: i for i, v in enumerate(order)}
    und = [0] * len(order)
    ch = [0] * len(order)
    pa = [0] * len(order)
    for v, i in pos.items():
        for w in G.ne(v):
            und[i] |= 1 << pos[w]
        for w in G.ch(v):
            ch[i] |= 1 << pos[w]
        for w in G.pa(v):
            pa[i] |= 1 << pos[w]
    return order, pos, und, ch, pa


def _to_mask(pos, S) -> int:
    m = 0
    for v in S:
        m |= 1 << pos[v]
    return m


def separated(G: HybridGraph, X, Y, Z=()) -> bool:
    """Decide ``X _|_ Y | Z`` in the chain graph ``G``."""
    X, Y, Z = _check_triple(G, X, Y, Z)
    require_chain_graph(G)
    _, pos, und, ch, pa = _masks(G)
    return kernel.reach_separated(und, ch, pa, _to_mask(pos, X), _to_mask(pos, Y), _to_mask(pos, Z))


def _prefix_state(G: HybridGraph, nodes: tuple, Z: frozenset):
    """Summarise a route prefix for the search in :func:`find_active_route`.

    Returns ``None`` when a closed section already violates activity;
    otherwise ``(last node, open section entered by arrowhead, open section
    meets Z)``.  Two prefixes with the same summary admit exactly the same
    active completions.
    """
    route = Route(nodes)
    secs = sections(G, route)
    steps = route.steps(G)
    for first, last, collider in secs[:-1]:
        if any(v in Z for v in nodes[first : last + 1]) != collider:
            return None
    first, last, _ = secs[-1]
    entered_head = first > 0 and steps[first - 1] == "->"
    hit = any(v in Z for v in nodes[first : last + 1])
    return nodes[-1], entered_head, hit


def find_active_route(G: HybridGraph, X, Y, Z=(), max_len: int | None = None) -> Route | None:
    """Breadth-first search over routes from ``X`` for a ``Z``-active route into ``Y``.

    Prefixes are pruned once a closed section is invalid, and a prefix whose
    summary was already reached by a shorter one is not extended.  Every
    candidate ending in ``Y`` is judged by :func:`is_active_route`.
    """
    X, Y, Z = _check_triple(G, X, Y, Z)
    if max_len is None:
        max_len = 4 * len(G)
    seen = set()
    queue = deque()
    for x in sorted(X):
        state = _prefix_state(G, (x,), Z)
        if state is not None and state not in seen:
            seen.add(state)
            queue.append((x,))
    while queue:
        nodes = queue.popleft()
        if nodes[-1] in Y:
            route = Route(nodes)
            if is_active_route(G, route, Z):
                return route
        if len(nodes) - 1 >= max_len:
            continue
        v = nodes[-1]
        for w in sorted(G.ne(v) | G.ch(v) | G.pa(v)):
            ext = nodes + (w,)
            state = _prefix_state(G, ext, Z)
            if state is None or state in seen:
                continue
            seen.add(state)
            queue.append(ext)
    return None


def separated_bruteforce(G: HybridGraph, X, Y, Z=(), max_len: int | None = None) -> bool:
    X, Y, Z = _check_triple(G, X, Y, Z)
    require_chain_graph(G)
    if max_len is None:
        max_len = 4 * len(G)
    if max_len < 4 * len(G):
        raise InputError(f"max_len must be at least 4*|V| = {4 * len(G)}")
    return find_active_route(G, X, Y, Z, max_len) is None


def all_routes(G: HybridGraph, x: Node, max_len: int):
    """Every route starting at ``x`` with at most ``max_len`` edges (no pruning)."""
    stack = [(x,)]
    while stack:
        nodes = stack.pop()
        yield Route(nodes)
        if len(nodes) - 1 < max_len:
            v = nodes[-1]
            for w in sorted(G.ne(v) | G.ch(v) | G.pa(v), reverse=True):
                stack.append(nodes + (w,))


def anterior_set(G: HybridGraph, S: Iterable[Node]) -> frozenset:
    """Smallest superset of ``S`` closed under parents and neighbours."""
    seen = set(S)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in G.pa(v) | G.ne(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def moral_graph(G: HybridGraph) -> dict[Node, set]:
    """Undirected adjacency: skeleton plus edges joining parents of each component."""
    adj = {v: set() for v in G.nodes}
    for a, b in G.directed:
        adj[a].add(b)
        adj[b].add(a)
    for e in G.undirected:
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    for comp in components(G):
        pa = set()
        for v in comp:
            pa |= G.pa(v)
        for a, b in itertools.combinations(sorted(pa), 2):
            adj[a].add(b)
            adj[b].add(a)
    return adj


def separated_moral(G: HybridGraph, X, Y, Z=()) -> bool:
    X, Y, Z = _check_triple(G, X, Y, Z)
    require_chain_graph(G)
    adj = moral_graph(G.induced(anterior_set(G, X | Y | Z)))
    seen = set(X)
    stack = list(X)
    while stack:
        v = stack.pop()
        if v in Y:
            return False
        for w in adj[v]:
            if w not in seen and w not in Z:
                seen.add(w)
                stack.append(w)
    return True


class Triple(NamedTuple):
    """Canonical statement ``x _|_ y | z`` with ``x < y``."""

    x: Node
    y: Node
    z: frozenset

    @classmethod
    def make(cls, a: Node, b: Node, z: Iterable[Node] = ()) -> "Triple":
        if a == b:
            raise InputError(f"statement needs two distinct nodes, got {a} twice")
        z = frozenset(z)
        if a in z or b in z:
            raise InputError(f"conditioning set {fmt_set(z)} overlaps {a}, {b}")
        if b < a:
            a, b = b, a
        return cls(a, b, z)

    def sort_key(self):
        return (self.x, self.y, len(self.z), tuple(sorted(self.z)))

    def __str__(self):
        return f"{self.x} ; {self.y} | {' '.join(sorted(self.z))}".rstrip()


class IndependenceModel:
    """A set of canonical singleton-pair statements over a node universe.

    A general statement ``X _|_ Y | Z`` holds iff ``x _|_ y | Z`` is stored for
    every ``x`` in ``X`` and ``y`` in ``Y``.
    """

    def __init__(self, universe: Iterable[Node], triples: Iterable[Triple] = ()):
        self.universe = frozenset(universe)
        ts = frozenset(triples)
        for t in ts:
            if not ({t.x, t.y} | t.z) <= self.universe:
                raise InputError(f"statement {t} mentions nodes outside the universe")
        self.triples = ts

    def __contains__(self, t) -> bool:
        return t in self.triples

    def __len__(self):
        return len(self.triples)

    def __iter__(self):
        return iter(sorted(self.triples, key=Triple.sort_key))

    def __eq__(self, other):
        if not isinstance(other, IndependenceModel):
            return NotImplemented
        return self.universe == other.universe and self.triples == other.triples

    def __hash__(self):
        return hash((self.universe, self.triples))

    def __le__(self, other: "IndependenceModel") -> bool:
        return self.triples <= other.triples

    def __repr__(self):
        return f"IndependenceModel({len(self.triples)} statements over {fmt_set(self.universe)})"


def is_independent(M: IndependenceModel, X, Y, Z=()) -> bool:
    X, Y, Z = frozenset(X), frozenset(Y), frozenset(Z)
    for x in X:
        for y in Y:
            if Triple.make(x, y, Z) not in M.triples:
                return False
    return True


@lru_cache(maxsize=4096)
def _model(G: HybridGraph) -> IndependenceModel:
    order, _, und, ch, pa = _masks(G)
    triples = []
    for i, j, zmask in kernel.separated_pairs(und, ch, pa):
        z = frozenset(order[k] for k in range(len(order)) if zmask >> k & 1)
        triples.append(Triple(order[i], order[j], z))
    return IndependenceModel(G.nodes, triples)


def enumerate_model(G: HybridGraph, max_nodes: int = DEFAULT_MAX_NODES) -> IndependenceModel:
    """All canonical statements ``x _|_ y | Z`` that hold in ``G``."""
    require_chain_graph(G)
    if len(G) > max_nodes:
        raise ResourceError(f"graph has {len(G)} nodes; model enumeration is bounded at {max_nodes}")
    return _model(G)


def is_imap(H: HybridGraph, G: HybridGraph, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    """True iff ``I(H)`` is contained in ``I(G)``."""
    if H.nodes != G.nodes:
        raise InputError("graphs have different node sets")
    return enumerate_model(H, max_nodes) <= enumerate_model(G, max_nodes)


def model_leq(H: HybridGraph, M: IndependenceModel, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    """True iff ``I(H)`` is contained in the explicit model ``M``."""
    if H.nodes != M.universe:
        raise InputError("graph and model have different universes")
    return enumerate_model(H, max_nodes) <= M


class Violation(NamedTuple):
    axiom: str
    X: frozenset
    Y: frozenset
    Z: frozenset
    W: frozenset

    def __str__(self):
        return (
            f"{self.axiom}: X={fmt_set(self.X)} Y={fmt_set(self.Y)} "
            f"Z={fmt_set(self.Z)} W={fmt_set(self.W)}"
        )


def check_graphoid(M: IndependenceModel, max_nodes: int = DEFAULT_MAX_NODES) -> list[Violation]:
    """Exhaustively test the five graphoid axioms; returns every failing instance."""
    if len(M.universe) > max_nodes:
        raise ResourceError(f"universe has {len(M.universe)} nodes; graphoid check is bounded at {max_nodes}")
    memo: dict = {}

    def ind(X, Y, Z):
        key = (X, Y, Z)
        if key not in memo:
            memo[key] = is_independent(M, X, Y, Z)
        return memo[key]

    nodes = sorted(M.universe)
    out = []
    # role 0: unused, 1: X, 2: Y, 3: Z, 4: W
    for roles in itertools.product(range(5), repeat=len(nodes)):
        parts = [frozenset(v for v, r in zip(nodes, roles) if r == k) for k in range(5)]
        _, X, Y, Z, W = parts
        if not X or not Y:
            continue
        if not W:
            if ind(X, Y, Z) and not ind(Y, X, Z):
                out.append(Violation("symmetry", X, Y, Z, W))
            continue
        YW = Y | W
        if ind(X, YW, Z):
            if not ind(X, Y, Z):
                out.append(Violation("decomposition", X, Y, Z, W))
            if not ind(X, Y, Z | W):
                out.append(Violation("weak union", X, Y, Z, W))
        elif ind(X, Y, Z | W):
            if ind(X, W, Z):
                out.append(Violation("contraction", X, Y, Z, W))
            if ind(X, W, Z | Y):
                out.append(Violation("intersection", X, Y, Z, W))
    return out


class IndependenceOracle:
    """Answers ``X _|_ Y | Z`` queries over a fixed universe."""

    universe: frozenset

    def query(self, X, Y, Z=()) -> bool:
        raise NotImplementedError


def check_pairwise_block_recursive(G: HybridGraph, alpha: Chain, oracle: IndependenceOracle) -> bool:
    if not is_consistent(G, alpha):
        raise DomainError(f"graph is not consistent with {alpha!r}")
    for x, y in itertools.combinations(G.sorted_nodes, 2):
        if G.adjacent(x, y):
            continue
        k = max(alpha.index(x), alpha.index(y))
        if not oracle.query({x}, {y}, alpha.prefix(k) - {x, y}):
            return False
    return True


__all__ = [
    "DEFAULT_MAX_NODES",
    "IndependenceModel",
    "IndependenceOracle",
    "Route",
    "Triple",
    "Violation",
    "all_routes",
    "anterior_set",
    "check_graphoid",
    "check_pairwise_block_recursive",
    "enumerate_model",
    "find_active_route",
    "is_active_route",
    "is_chain_graph",
    "is_imap",
    "is_independent",
    "model_leq",
    "moral_graph",
    "sections",
    "separated",
    "separated_bruteforce",
    "separated_moral",
]
