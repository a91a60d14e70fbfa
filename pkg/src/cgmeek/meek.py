"""Transforming one chain graph into another through monotone steps.

:func:`method_b3` turns a chain graph ``G`` into the minimal independence map
of ``I(G)`` consistent with a given chain, using only edge additions and
feasible splits and mergings.  :func:`method_g2h` uses it to walk from ``G``
to any ``H`` with ``I(H)`` contained in ``I(G)``, keeping that containment
after every step.  :func:`verify_trace` replays a recorded walk and checks
those guarantees step by step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from .errors import CGError, CorruptTraceError, DomainError, InputError, InternalInvariantError
from .graph import (
    Chain,
    HybridGraph,
    components,
    consistent_chain,
    descendants,
    is_chain_graph,
    maximal_components,
    parents,
    require_chain_graph,
    set_key,
    terminal_components,
)
from .separation import DEFAULT_MAX_NODES, enumerate_model, is_imap
from .transform import MERGE, SPLIT, ElementaryOp, fbmerge, fbsplit

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceStep:
    op: ElementaryOp
    graph: HybridGraph
    via: str = ""


@dataclass
class Trace:
    """A starting graph and the operations applied to it, with snapshots."""

    initial: HybridGraph
    steps: list[TraceStep] = field(default_factory=list)
    chain: Chain | None = None

    @property
    def final(self) -> HybridGraph:
        return self.steps[-1].graph if self.steps else self.initial

    @property
    def ops(self) -> list[ElementaryOp]:
        return [s.op for s in self.steps]

    def graphs(self) -> list[HybridGraph]:
        return [self.initial] + [s.graph for s in self.steps]

    def extend(self, ops: Iterable[ElementaryOp], via: str = "") -> None:
        """Replay ``ops`` from the current final graph and append the snapshots."""
        g = self.final
        for op in ops:
            try:
                g = op.apply(g)
            except CGError as exc:
                raise CorruptTraceError(f"step {len(self.steps) + 1} ({op}) does not apply: {exc}") from exc
            self.steps.append(TraceStep(op, g, via))

    @classmethod
    def replay(cls, initial: HybridGraph, ops: Iterable[ElementaryOp], chain: Chain | None = None) -> "Trace":
        t = cls(initial, chain=chain)
        t.extend(ops)
        return t


def _lo(alpha: Chain, S) -> int:
    return min(alpha.index(v) for v in S)


def _hi(alpha: Chain, S) -> int:
    return max(alpha.index(v) for v in S)


def construct_beta(G: HybridGraph, alpha: Chain) -> Chain:
    """A chain of ``G``'s components, consistent with ``G`` and ordered close to ``alpha``."""
    require_chain_graph(G)
    alpha.require_partition_of(G.nodes)
    beta: list[frozenset] = []
    H = G
    while len(H):
        terms = terminal_components(H)
        best = max(_lo(alpha, c) for c in terms)
        C = min((c for c in terms if _lo(alpha, c) == best), key=set_key)
        beta.insert(0, C)
        i = 0
        # parents are read from the original graph, not the shrinking copy
        while i + 1 < len(beta):
            R = beta[i + 1]
            if parents(G, R) & C or not _lo(alpha, C) > _hi(alpha, R):
                break
            beta[i], beta[i + 1] = R, C
            i += 1
        H = H.induced(H.nodes - C)
    return Chain(beta)


def method_b3(G: HybridGraph, alpha: Chain) -> tuple[HybridGraph, Trace]:
    require_chain_graph(G)
    alpha.require_partition_of(G.nodes)
    beta = list(construct_beta(G, alpha).blocks)
    target = list(alpha.blocks)
    trace = Trace(G, chain=alpha)
    budget = 4 * len(alpha) * max(len(G), 1)
    rounds = 0

    for C in reversed(alpha.blocks):
        c_index = alpha.index(next(iter(C)))
        while True:
            rounds += 1
            if rounds > budget:
                raise InternalInvariantError(f"method_b3 exceeded its iteration budget of {budget}")
            k = next(i for i, K in enumerate(beta) if K & C)
            K = beta[k]
            L = K & C
            if K - L:
                _, ops = fbsplit(trace.final, K, L)
                trace.extend(ops, via="fbsplit")
                beta[k : k + 1] = [K - L, L]
                k += 1
            if k + 1 < len(beta) and _lo(alpha, beta[k + 1]) <= c_index:
                R = beta[k + 1]
                _, ops = fbmerge(trace.final, L, R)
                trace.extend(ops, via="fbmerge")
                beta[k : k + 2] = [L | R]
                continue
            break
        if beta == target:
            break
    else:
        if beta != target:
            raise InternalInvariantError("method_b3 considered every block but the chains still differ")
    log.debug("method_b3: %d operations in %d rounds", len(trace.steps), rounds)
    return trace.final, trace


def method_g2h(G: HybridGraph, H: HybridGraph, max_nodes: int = DEFAULT_MAX_NODES) -> Trace:
    if G.nodes != H.nodes:
        raise InputError("graphs have different node sets")
    require_chain_graph(G)
    require_chain_graph(H)
    if not is_imap(H, G, max_nodes):
        raise DomainError("H is not an independence map of I(G)")
    alpha = consistent_chain(H)
    g_alpha, trace = method_b3(G, alpha)
    extra = set(g_alpha.directed) - H.directed
    extra |= {tuple(sorted(e)) for e in g_alpha.undirected - H.undirected}
    if extra:
        raise InternalInvariantError(f"minimal map has edges missing from H: {sorted(extra)}")
    adds = [ElementaryOp.add_undirected(a, b) for a, b in H.undirected_pairs() if not g_alpha.has_undirected(a, b)]
    adds += [ElementaryOp.add_directed(a, b) for a, b in sorted(H.directed) if not g_alpha.has_directed(a, b)]
    trace.extend(adds, via="add")
    if trace.final != H:
        raise InternalInvariantError("method_g2h did not arrive at H")
    return trace


@dataclass(frozen=True)
class TraceReport:
    """``step`` is 0 for the initial graph, ``k`` for the graph after the k-th op."""

    valid: bool
    step: int | None = None
    message: str = "valid"

    def __str__(self):
        if self.valid:
            return "valid"
        where = "initial graph" if self.step == 0 else f"step {self.step}"
        return f"{self.message} at {where}"


def verify_trace(trace: Trace, H: HybridGraph, max_nodes: int = DEFAULT_MAX_NODES) -> TraceReport:
    """Replay ``trace`` and check every snapshot against ``H``.

    Each snapshot must be a chain graph with ``I(H)`` contained in its model,
    splits and mergings must be feasible, models must shrink monotonically,
    and the walk must end at ``H``.  A snapshot that does not match its
    replayed operation raises :class:`CorruptTraceError`.
    """
    prev = trace.initial
    if not is_chain_graph(prev):
        return TraceReport(False, 0, "not a CG")
    if not is_imap(H, prev, max_nodes):
        return TraceReport(False, 0, "H is not an independence map")
    for k, step in enumerate(trace.steps, start=1):
        try:
            replayed = step.op.apply(prev)
        except CGError as exc:
            raise CorruptTraceError(f"step {k} ({step.op}) does not apply: {exc}") from exc
        if replayed != step.graph:
            raise CorruptTraceError(f"step {k} ({step.op}) does not reproduce its recorded graph")
        g = step.graph
        if not is_chain_graph(g):
            return TraceReport(False, k, "not a CG")
        if step.op.kind in (SPLIT, MERGE) and not step.op.is_feasible(prev):
            return TraceReport(False, k, f"infeasible {step.op.kind}")
        if not is_imap(H, g, max_nodes):
            return TraceReport(False, k, "H is not an independence map")
        if not enumerate_model(g, max_nodes) <= enumerate_model(prev, max_nodes):
            return TraceReport(False, k, "independence model grew")
        prev = g
    if prev != H:
        return TraceReport(False, len(trace.steps), "final graph differs from H")
    return TraceReport(True)


def unique_maximal_violations(G: HybridGraph, H: HybridGraph) -> list[tuple[frozenset, list[frozenset]]]:
    """Components ``C`` of ``G`` for which the components of ``H`` meeting
    ``descendants(G, C)`` do not have exactly one maximal member."""
    out = []
    h_comps = components(H)
    for C in components(G):
        D = descendants(G, C)
        K = [c for c in h_comps if c & D]
        top = maximal_components(H, K)
        if len(top) != 1:
            out.append((C, top))
    return out


def descendant_preservation_violations(G: HybridGraph, H: HybridGraph, alpha: Chain) -> list[str]:
    """Nodes ``x`` with no ``G``-descendant left of ``x`` in ``alpha`` whose
    ``G``-descendants are not all ``H``-descendants."""
    out = []
    for x in G.sorted_nodes:
        D = descendants(G, {x})
        if any(alpha.index(d) < alpha.index(x) for d in D):
            continue
        if not D <= descendants(H, {x}):
            out.append(x)
    return out


__all__ = [
    "Trace",
    "TraceReport",
    "TraceStep",
    "construct_beta",
    "descendant_preservation_violations",
    "method_b3",
    "method_g2h",
    "unique_maximal_violations",
    "verify_trace",
]
