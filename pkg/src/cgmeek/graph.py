"""Hybrid graphs, chains and the structural notions defined on them.

Graphs are immutable: every modification returns a new :class:`HybridGraph`.
Node labels are whitespace-free strings and their lexicographic order is the
tie-breaker everywhere a choice is otherwise arbitrary.
"""

from __future__ import annotations

import heapq
from functools import cached_property
from typing import Iterable, Iterator

from .errors import DomainError, InputError

Node = str
NodeSet = frozenset


def check_label(label) -> Node:
    if not isinstance(label, str) or not label or any(c.isspace() for c in label):
        raise InputError(f"invalid node label {label!r}")
    return label


def set_key(s: Iterable[Node]) -> tuple:
    """Sort key for node sets: by sorted member labels (smallest member first)."""
    return tuple(sorted(s))


def fmt_set(s: Iterable[Node]) -> str:
    return "{" + ",".join(sorted(s)) + "}"


class HybridGraph:
    """A graph with directed and undirected edges and at most one edge per pair.

    ``directed`` holds ``(tail, head)`` pairs and ``undirected`` holds
    two-element frozensets.  Being a chain graph is a checked property
    (:func:`is_chain_graph`), not part of the type.
    """

    def __init__(
        self,
        nodes: Iterable[Node] = (),
        directed: Iterable[tuple[Node, Node]] = (),
        undirected: Iterable[Iterable[Node]] = (),
    ):
        node_set = frozenset(check_label(v) for v in nodes)
        arcs = frozenset((check_label(a), check_label(b)) for a, b in directed)
        lines = set()
        for e in undirected:
            pair = frozenset(e)
            if len(pair) != 2:
                raise InputError(f"undirected edge needs two distinct endpoints: {sorted(pair)}")
            lines.add(frozenset(check_label(v) for v in pair))
        lines = frozenset(lines)

        for a, b in arcs:
            if a == b:
                raise InputError(f"self-loop {a} -> {a}")
            if a not in node_set or b not in node_set:
                raise InputError(f"edge {a} -> {b} has an endpoint outside the node set")
            if (b, a) in arcs:
                raise InputError(f"both {a} -> {b} and {b} -> {a} present")
            if frozenset((a, b)) in lines:
                raise InputError(f"both {a} -> {b} and {a} -- {b} present")
        for e in lines:
            if not e <= node_set:
                a, b = sorted(e)
                raise InputError(f"edge {a} -- {b} has an endpoint outside the node set")

        self._nodes = node_set
        self._directed = arcs
        self._undirected = lines

    @classmethod
    def from_edges(cls, directed=(), undirected=(), nodes=()) -> "HybridGraph":
        """Build a graph whose node set also includes every edge endpoint."""
        directed = list(directed)
        undirected = [tuple(e) for e in undirected]
        all_nodes = set(nodes)
        for a, b in directed:
            all_nodes.update((a, b))
        for e in undirected:
            all_nodes.update(e)
        return cls(all_nodes, directed, undirected)

    @property
    def nodes(self) -> frozenset:
        return self._nodes

    @property
    def directed(self) -> frozenset:
        return self._directed

    @property
    def undirected(self) -> frozenset:
        return self._undirected

    def __len__(self) -> int:
        return len(self._nodes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HybridGraph):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and self._directed == other._directed
            and self._undirected == other._undirected
        )

    def __hash__(self) -> int:
        return hash((self._nodes, self._directed, self._undirected))

    def __repr__(self) -> str:
        parts = [f"{a}->{b}" for a, b in sorted(self._directed)]
        parts += [f"{a}-{b}" for a, b in self.undirected_pairs()]
        isolated = sorted(v for v in self._nodes if not self.is_incident(v))
        parts += isolated
        return f"HybridGraph({', '.join(parts)})"

    @cached_property
    def sorted_nodes(self) -> tuple:
        return tuple(sorted(self._nodes))

    def undirected_pairs(self) -> list[tuple[Node, Node]]:
        return sorted(tuple(sorted(e)) for e in self._undirected)

    @cached_property
    def _pa(self) -> dict:
        pa = {v: set() for v in self._nodes}
        for a, b in self._directed:
            pa[b].add(a)
        return {v: frozenset(s) for v, s in pa.items()}

    @cached_property
    def _ch(self) -> dict:
        ch = {v: set() for v in self._nodes}
        for a, b in self._directed:
            ch[a].add(b)
        return {v: frozenset(s) for v, s in ch.items()}

    @cached_property
    def _ne(self) -> dict:
        ne = {v: set() for v in self._nodes}
        for e in self._undirected:
            a, b = tuple(e)
            ne[a].add(b)
            ne[b].add(a)
        return {v: frozenset(s) for v, s in ne.items()}

    def pa(self, v: Node) -> frozenset:
        return self._pa[v]

    def ch(self, v: Node) -> frozenset:
        return self._ch[v]

    def ne(self, v: Node) -> frozenset:
        return self._ne[v]

    def is_incident(self, v: Node) -> bool:
        return bool(self._pa[v] or self._ch[v] or self._ne[v])

    def has_directed(self, a: Node, b: Node) -> bool:
        return (a, b) in self._directed

    def has_undirected(self, a: Node, b: Node) -> bool:
        return frozenset((a, b)) in self._undirected

    def adjacent(self, a: Node, b: Node) -> bool:
        return (a, b) in self._directed or (b, a) in self._directed or self.has_undirected(a, b)

    def num_edges(self) -> int:
        return len(self._directed) + len(self._undirected)

    def edges(self) -> Iterator[tuple[str, Node, Node]]:
        """Yield ``("--", a, b)`` then ``("->", a, b)`` records in label order."""
        for a, b in self.undirected_pairs():
            yield "--", a, b
        for a, b in sorted(self._directed):
            yield "->", a, b

    def replace(self, directed=None, undirected=None) -> "HybridGraph":
        return HybridGraph(
            self._nodes,
            self._directed if directed is None else directed,
            self._undirected if undirected is None else undirected,
        )

    def add_directed(self, a: Node, b: Node) -> "HybridGraph":
        return self.replace(directed=self._directed | {(a, b)})

    def add_undirected(self, a: Node, b: Node) -> "HybridGraph":
        return self.replace(undirected=self._undirected | {frozenset((a, b))})

    def remove_edge(self, a: Node, b: Node) -> "HybridGraph":
        return HybridGraph(
            self._nodes,
            self._directed - {(a, b), (b, a)},
            self._undirected - {frozenset((a, b))},
        )

    def induced(self, keep: Iterable[Node]) -> "HybridGraph":
        keep = frozenset(keep)
        return HybridGraph(
            keep,
            [(a, b) for a, b in self._directed if a in keep and b in keep],
            [e for e in self._undirected if e <= keep],
        )


class Chain:
    """An ordered partition of a node set into blocks."""

    __slots__ = ("_blocks", "_index")

    def __init__(self, blocks: Iterable[Iterable[Node]]):
        bl = []
        index = {}
        for i, b in enumerate(blocks):
            b = frozenset(check_label(v) for v in b)
            if not b:
                raise InputError(f"chain block {i} is empty")
            for v in b:
                if v in index:
                    raise InputError(f"node {v} appears in more than one chain block")
                index[v] = i
            bl.append(b)
        self._blocks = tuple(bl)
        self._index = index

    @property
    def blocks(self) -> tuple:
        return self._blocks

    @property
    def nodes(self) -> frozenset:
        return frozenset(self._index)

    def __len__(self) -> int:
        return len(self._blocks)

    def __iter__(self):
        return iter(self._blocks)

    def __eq__(self, other) -> bool:
        if isinstance(other, Chain):
            return self._blocks == other._blocks
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._blocks)

    def __repr__(self) -> str:
        return "Chain(" + ", ".join(fmt_set(b) for b in self._blocks) + ")"

    def index(self, v: Node) -> int:
        """Block position of ``v``; smaller means further left."""
        try:
            return self._index[v]
        except KeyError:
            raise InputError(f"node {v} is not in the chain") from None

    def prefix(self, k: int) -> frozenset:
        """Union of blocks ``0..k`` inclusive."""
        return frozenset().union(*self._blocks[: k + 1])

    def require_partition_of(self, nodes: Iterable[Node]) -> None:
        nodes = frozenset(nodes)
        if self.nodes != nodes:
            missing = sorted(nodes - self.nodes)
            extra = sorted(self.nodes - nodes)
            raise InputError(f"chain is not a partition of the graph nodes (missing {missing}, extra {extra})")


def as_node_set(G: HybridGraph, Y: Iterable[Node]) -> frozenset:
    if isinstance(Y, str):
        Y = (Y,)
    Y = frozenset(Y)
    unknown = Y - G.nodes
    if unknown:
        raise InputError(f"unknown node(s) {sorted(unknown)}")
    return Y


def parents(G: HybridGraph, Y: Iterable[Node]) -> frozenset:
    Y = as_node_set(G, Y)
    return frozenset().union(*(G.pa(v) for v in Y))


def children(G: HybridGraph, Y: Iterable[Node]) -> frozenset:
    Y = as_node_set(G, Y)
    return frozenset().union(*(G.ch(v) for v in Y))


def neighbors(G: HybridGraph, Y: Iterable[Node]) -> frozenset:
    Y = as_node_set(G, Y)
    return frozenset().union(*(G.ne(v) for v in Y))


def boundary(G: HybridGraph, x: Node) -> frozenset:
    as_node_set(G, (x,))
    return G.pa(x) | G.ne(x)


def undirected_parts(G: HybridGraph, S: Iterable[Node]) -> list[frozenset]:
    """Connected pieces of ``S`` using only undirected edges with both ends in ``S``.

    Sorted by smallest member.
    """
    S = frozenset(S)
    seen: set = set()
    parts = []
    for v in sorted(S):
        if v in seen:
            continue
        part = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in G.ne(u):
                if w in S and w not in part:
                    part.add(w)
                    stack.append(w)
        seen |= part
        parts.append(frozenset(part))
    return parts


def components(G: HybridGraph) -> list[frozenset]:
    return undirected_parts(G, G.nodes)


def component_of(G: HybridGraph, v: Node) -> frozenset:
    for c in undirected_parts(G, G.nodes):
        if v in c:
            return c
    raise InputError(f"unknown node {v}")


def _quotient(G: HybridGraph):
    comps = components(G)
    where = {v: i for i, c in enumerate(comps) for v in c}
    arcs: set = set()
    for a, b in G.directed:
        arcs.add((where[a], where[b]))
    return comps, arcs


def _topological_components(G: HybridGraph):
    """Kahn's algorithm on the component quotient; ``None`` if it is cyclic."""
    comps, arcs = _quotient(G)
    if any(i == j for i, j in arcs):
        return None
    indeg = [0] * len(comps)
    succ: list[list[int]] = [[] for _ in comps]
    for i, j in arcs:
        indeg[j] += 1
        succ[i].append(j)
    heap = [(min(comps[i]), i) for i in range(len(comps)) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(comps[i])
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (min(comps[j]), j))
    if len(order) != len(comps):
        return None
    return order


def is_chain_graph(G: HybridGraph) -> bool:
    return _topological_components(G) is not None


def require_chain_graph(G: HybridGraph) -> None:
    if not is_chain_graph(G):
        raise DomainError(f"not a chain graph: {G!r}")


def consistent_chain(G: HybridGraph) -> Chain:
    """One block per component, in topological order with label tie-breaks."""
    order = _topological_components(G)
    if order is None:
        raise DomainError(f"not a chain graph: {G!r}")
    return Chain(order)


def is_consistent(G: HybridGraph, alpha: Chain) -> bool:
    alpha.require_partition_of(G.nodes)
    for a, b in G.directed:
        if not alpha.index(a) < alpha.index(b):
            return False
    for e in G.undirected:
        a, b = tuple(e)
        if alpha.index(a) != alpha.index(b):
            return False
    return True


def descendants(G: HybridGraph, Y: Iterable[Node]) -> frozenset:
    Y = as_node_set(G, Y)
    seen = set(Y)
    stack = list(Y)
    while stack:
        v = stack.pop()
        for w in G.ch(v) | G.ne(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def terminal_components(G: HybridGraph) -> list[frozenset]:
    require_chain_graph(G)
    return [c for c in components(G) if descendants(G, c) == c]


def maximal_components(G: HybridGraph, K: Iterable[Iterable[Node]]) -> list[frozenset]:
    K = [frozenset(c) for c in K]
    comps = set(components(G))
    for c in K:
        if c not in comps:
            raise InputError(f"{fmt_set(c)} is not a component of the graph")
    out = []
    for c in K:
        others = frozenset().union(*(d for d in K if d != c))
        if not (c & descendants(G, others)):
            out.append(c)
    return out


def is_block(G: HybridGraph, S: Iterable[Node]) -> bool:
    S = as_node_set(G, S)
    for c in components(G):
        if c & S and not c <= S:
            return False
    return not any(a in S and b in S for a, b in G.directed)
