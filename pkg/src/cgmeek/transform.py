"""Component splits and mergings, and the block-level operators built on them.

Every operator returns a new graph.  :func:`fbsplit` and :func:`fbmerge` also
return the elementary modifications they performed, in order, so that a
caller can record and later replay them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .errors import InputError, InternalInvariantError
from .graph import (
    HybridGraph,
    Node,
    as_node_set,
    components,
    fmt_set,
    is_block,
    is_chain_graph,
    parents,
    neighbors,
    set_key,
    undirected_parts,
)

ADD_UNDIRECTED = "add-undirected"
ADD_DIRECTED = "add-directed"
SPLIT = "split"
MERGE = "merge"
KINDS = (ADD_UNDIRECTED, ADD_DIRECTED, SPLIT, MERGE)


@dataclass(frozen=True)
class ElementaryOp:
    """One modification of a graph.

    ``edge`` is set for additions (``(tail, head)`` for directed ones, sorted
    endpoints for undirected ones).  ``first``/``second`` are the component
    and the part split off from it, or the left and right components merged.
    """

    kind: str
    edge: tuple = ()
    first: frozenset = frozenset()
    second: frozenset = frozenset()

    @classmethod
    def add_undirected(cls, a: Node, b: Node) -> "ElementaryOp":
        return cls(ADD_UNDIRECTED, edge=tuple(sorted((a, b))))

    @classmethod
    def add_directed(cls, a: Node, b: Node) -> "ElementaryOp":
        return cls(ADD_DIRECTED, edge=(a, b))

    @classmethod
    def split(cls, component, part) -> "ElementaryOp":
        return cls(SPLIT, first=frozenset(component), second=frozenset(part))

    @classmethod
    def merge(cls, left, right) -> "ElementaryOp":
        return cls(MERGE, first=frozenset(left), second=frozenset(right))

    def __str__(self):
        if self.kind == ADD_UNDIRECTED:
            return f"add {self.edge[0]} -- {self.edge[1]}"
        if self.kind == ADD_DIRECTED:
            return f"add {self.edge[0]} -> {self.edge[1]}"
        if self.kind == SPLIT:
            return f"split {fmt_set(self.first)} into {fmt_set(self.first - self.second)}, {fmt_set(self.second)}"
        return f"merge {fmt_set(self.first)} and {fmt_set(self.second)}"

    def to_json(self) -> dict:
        if self.kind in (ADD_UNDIRECTED, ADD_DIRECTED):
            return {"kind": self.kind, "edge": list(self.edge)}
        if self.kind == SPLIT:
            return {"kind": SPLIT, "component": sorted(self.first), "part": sorted(self.second)}
        return {"kind": MERGE, "left": sorted(self.first), "right": sorted(self.second)}

    @classmethod
    def from_json(cls, rec: dict) -> "ElementaryOp":
        kind = rec.get("kind")
        try:
            if kind == ADD_UNDIRECTED:
                a, b = rec["edge"]
                return cls.add_undirected(a, b)
            if kind == ADD_DIRECTED:
                a, b = rec["edge"]
                return cls.add_directed(a, b)
            if kind == SPLIT:
                return cls.split(rec["component"], rec["part"])
            if kind == MERGE:
                return cls.merge(rec["left"], rec["right"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed {kind} record: {rec}") from exc
        raise InputError(f"unknown operation kind {kind!r}")

    def apply(self, G: HybridGraph) -> HybridGraph:
        if self.kind in (ADD_UNDIRECTED, ADD_DIRECTED):
            a, b = self.edge
            as_node_set(G, (a, b))
            if G.adjacent(a, b):
                raise InputError(f"cannot {self}: {a} and {b} are already adjacent")
            if self.kind == ADD_UNDIRECTED:
                return G.add_undirected(a, b)
            return G.add_directed(a, b)
        if self.kind == SPLIT:
            return split(G, self.first, self.second)
        if self.kind == MERGE:
            return merge(G, self.first, self.second)
        raise InputError(f"unknown operation kind {self.kind!r}")

    def is_feasible(self, G: HybridGraph) -> bool:
        """Feasibility against the pre-graph; edge additions always qualify."""
        if self.kind == SPLIT:
            return is_feasible_split(G, self.first, self.second)
        if self.kind == MERGE:
            return is_feasible_merge(G, self.first, self.second)
        return True


def _check_split(G: HybridGraph, C, L) -> tuple[frozenset, frozenset]:
    C = as_node_set(G, C)
    L = as_node_set(G, L)
    if C not in components(G):
        raise InputError(f"{fmt_set(C)} is not a component")
    rest = C - L
    if not L or not rest or not L <= C:
        raise InputError(f"cannot split {fmt_set(C)} at {fmt_set(L)}: both parts must be nonempty")
    if len(undirected_parts(G, L)) != 1 or len(undirected_parts(G, rest)) != 1:
        raise InputError(f"cannot split {fmt_set(C)} at {fmt_set(L)}: a part is not connected")
    return C, L


def split(G: HybridGraph, C, L) -> HybridGraph:
    """Orient every undirected edge from ``C - L`` into ``L``."""
    C, L = _check_split(G, C, L)
    rest = C - L
    undirected = set()
    directed = set(G.directed)
    for e in G.undirected:
        a, b = tuple(e)
        if a in L and b in rest:
            a, b = b, a
        if a in rest and b in L:
            directed.add((a, b))
        else:
            undirected.add(e)
    return G.replace(directed=directed, undirected=undirected)


def is_feasible_split(G: HybridGraph, C, L) -> bool:
    C, L = _check_split(G, C, L)
    ne = neighbors(G, L) & (C - L)
    for a, b in itertools.combinations(sorted(ne), 2):
        if not G.has_undirected(a, b):
            return False
    for a in parents(G, L):
        for b in ne:
            if not G.has_directed(a, b):
                return False
    return True


def _check_merge(G: HybridGraph, L, R) -> tuple[frozenset, frozenset]:
    L = as_node_set(G, L)
    R = as_node_set(G, R)
    comps = components(G)
    if L not in comps or R not in comps:
        raise InputError(f"{fmt_set(L)} and {fmt_set(R)} must both be components")
    if not parents(G, R) & L:
        raise InputError(f"cannot merge {fmt_set(L)} and {fmt_set(R)}: no edge from the first into the second")
    return L, R


def merge(G: HybridGraph, L, R) -> HybridGraph:
    """Turn every directed edge from ``L`` into ``R`` into an undirected edge."""
    L, R = _check_merge(G, L, R)
    directed = set()
    undirected = set(G.undirected)
    for a, b in G.directed:
        if a in L and b in R:
            undirected.add(frozenset((a, b)))
        else:
            directed.add((a, b))
    return G.replace(directed=directed, undirected=undirected)


def is_feasible_merge(G: HybridGraph, L, R) -> bool:
    L, R = _check_merge(G, L, R)
    pa = parents(G, R)
    inside = pa & L
    for a, b in itertools.combinations(sorted(inside), 2):
        if not G.has_undirected(a, b):
            return False
    for a in pa - L:
        for b in inside:
            if not G.has_directed(a, b):
                return False
    return True


class _Recorder:
    """Applies operations to a working graph and logs them."""

    def __init__(self, G: HybridGraph):
        self.G = G
        self.ops: list[ElementaryOp] = []

    def add_undirected(self, a, b):
        if self.G.has_undirected(a, b):
            return
        if self.G.adjacent(a, b):
            raise InternalInvariantError(f"cannot add {a} -- {b}: already joined by a directed edge")
        self._do(ElementaryOp.add_undirected(a, b))

    def add_directed(self, a, b):
        if self.G.has_directed(a, b):
            return
        if self.G.adjacent(a, b):
            raise InternalInvariantError(f"cannot add {a} -> {b}: already joined by another edge")
        self._do(ElementaryOp.add_directed(a, b))

    def feasible(self, op: ElementaryOp):
        if not op.is_feasible(self.G):
            raise InternalInvariantError(f"{op} is not feasible in {self.G!r}")
        self._do(op)

    def _do(self, op):
        self.G = op.apply(self.G)
        self.ops.append(op)


def _require_block(G: HybridGraph, S: frozenset, name: str):
    if not is_chain_graph(G):
        raise InputError("graph is not a chain graph")
    if not is_block(G, S):
        raise InputError(f"{name}={fmt_set(S)} is not a block of the graph")


def fbsplit(G: HybridGraph, K: Iterable[Node], L: Iterable[Node]) -> tuple[HybridGraph, list[ElementaryOp]]:
    """Split components of the block ``K`` until ``L`` is a block on its own.

    Edges are added first so that each split is feasible; those additions
    read parents and neighbours from the graph as it stands at that moment.
    """
    K = as_node_set(G, K)
    L = as_node_set(G, L)
    _require_block(G, K, "K")
    if not L <= K:
        raise InputError(f"L={fmt_set(L)} is not a subset of K={fmt_set(K)}")
    rest = K - L
    parts = undirected_parts(G, L)
    rec = _Recorder(G)
    for part in parts:
        ne = neighbors(rec.G, part) & rest
        for a, b in itertools.combinations(sorted(ne), 2):
            rec.add_undirected(a, b)
        for a in sorted(parents(rec.G, part)):
            for b in sorted(ne):
                rec.add_directed(a, b)
    for part in parts:
        comp = next(c for c in components(rec.G) if part <= c)
        if comp - part:
            rec.feasible(ElementaryOp.split(comp, part))
    return rec.G, rec.ops


def fbmerge(G: HybridGraph, L: Iterable[Node], R: Iterable[Node]) -> tuple[HybridGraph, list[ElementaryOp]]:
    """Merge components across the blocks ``L`` and ``R`` until their union is a block.

    Edges are added first so that each merging is feasible.
    """
    L = as_node_set(G, L)
    R = as_node_set(G, R)
    _require_block(G, L, "L")
    _require_block(G, R, "R")
    if L & R:
        raise InputError(f"blocks {fmt_set(L)} and {fmt_set(R)} overlap")
    if parents(G, L) & R:
        raise InputError(f"{fmt_set(R)} has an edge into {fmt_set(L)}; the left block must come first")
    LR = L | R
    right_parts = [c for c in components(G) if c <= R]
    rec = _Recorder(G)
    for part in right_parts:
        pa = parents(rec.G, part)
        inside = pa & L
        for a, b in itertools.combinations(sorted(inside), 2):
            rec.add_undirected(a, b)
        for a in sorted(pa - L):
            for b in sorted(inside):
                rec.add_directed(a, b)
    for part in right_parts:
        pa = parents(rec.G, part)
        cands = [c for c in components(rec.G) if c <= LR and c & pa]
        if not cands:
            continue
        if len(cands) > 1:
            raise InternalInvariantError(
                f"fbmerge: {len(cands)} candidate components to merge into {fmt_set(part)}: "
                + ", ".join(fmt_set(c) for c in sorted(cands, key=set_key))
            )
        rec.feasible(ElementaryOp.merge(cands[0], part))
    return rec.G, rec.ops


def replay(G: HybridGraph, ops: Iterable[ElementaryOp]) -> HybridGraph:
    for op in ops:
        G = op.apply(G)
    return G
