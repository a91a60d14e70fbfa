"""Text formats for graphs, chains and models, and the JSON-lines trace format.

Graph files hold one item per line: ``node A``, ``A -> B`` or ``A -- B``;
``#`` starts a comment.  Chain files hold one block per line, leftmost
first.  Model files hold one statement per line as ``x ; y | z1 z2``.
"""

from __future__ import annotations

import hashlib
import json
from typing import Iterable

from .errors import CorruptTraceError, InputError
from .graph import Chain, HybridGraph, check_label
from .meek import Trace
from .separation import IndependenceModel, Triple
from .transform import ElementaryOp


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _label(tok: str, no: int) -> str:
    try:
        return check_label(tok)
    except InputError as exc:
        raise InputError(str(exc), line=no) from None


def parse_graph(text: str) -> HybridGraph:
    nodes: set = set()
    directed: dict = {}
    undirected: dict = {}
    for no, line in _lines(text):
        toks = line.split()
        if len(toks) == 2 and toks[0] == "node":
            nodes.add(_label(toks[1], no))
            continue
        if len(toks) != 3 or toks[1] not in ("->", "--"):
            raise InputError(f"expected 'node X', 'X -> Y' or 'X -- Y', got {line!r}", line=no)
        a, b = _label(toks[0], no), _label(toks[2], no)
        if a == b:
            raise InputError(f"self-loop on {a}", line=no)
        pair = frozenset((a, b))
        if toks[1] == "->":
            if (b, a) in directed or pair in undirected:
                raise InputError(f"second edge between {a} and {b}", line=no)
            directed[(a, b)] = no
        else:
            if (a, b) in directed or (b, a) in directed:
                raise InputError(f"second edge between {a} and {b}", line=no)
            undirected[pair] = no
        nodes.update((a, b))
    return HybridGraph(nodes, directed, undirected)


def format_graph(G: HybridGraph) -> str:
    out = [f"node {v}" for v in G.sorted_nodes]
    out += [f"{a} {sym} {b}" for sym, a, b in G.edges()]
    return "".join(line + "\n" for line in out)


def graph_hash(G: HybridGraph) -> str:
    return hashlib.sha256(format_graph(G).encode()).hexdigest()


def parse_chain(text: str) -> Chain:
    blocks = []
    for no, line in _lines(text):
        blocks.append([_label(t, no) for t in line.split()])
    return Chain(blocks)


def format_chain(alpha: Chain) -> str:
    return "".join(" ".join(sorted(b)) + "\n" for b in alpha.blocks)


def parse_triple(line: str, no: int | None = None) -> Triple:
    head, sep, cond = line.partition("|")
    if not sep:
        raise InputError(f"expected 'x ; y | z...', got {line!r}", line=no)
    left, sep, right = head.partition(";")
    xs, ys = left.split(), right.split()
    if not sep or len(xs) != 1 or len(ys) != 1:
        raise InputError(f"expected single nodes around ';', got {line!r}", line=no)
    x, y = _label(xs[0], no), _label(ys[0], no)
    z = [_label(t, no) for t in cond.split()]
    try:
        return Triple.make(x, y, z)
    except InputError as exc:
        raise InputError(str(exc), line=no) from None


def parse_model(text: str, universe: Iterable[str] | None = None) -> IndependenceModel:
    """Parse a model file.  Without ``universe`` it is the set of mentioned nodes."""
    triples = [parse_triple(line, no) for no, line in _lines(text)]
    if universe is None:
        universe = set()
        for t in triples:
            universe |= {t.x, t.y} | t.z
    return IndependenceModel(universe, triples)


def format_model(M: IndependenceModel) -> str:
    return "".join(f"{t}\n" for t in M)


def graph_to_json(G: HybridGraph) -> dict:
    return {
        "nodes": list(G.sorted_nodes),
        "directed": [list(e) for e in sorted(G.directed)],
        "undirected": [list(e) for e in G.undirected_pairs()],
    }


def graph_from_json(rec: dict) -> HybridGraph:
    try:
        return HybridGraph(rec["nodes"], [tuple(e) for e in rec["directed"]], rec["undirected"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed graph record: {exc}") from exc


def format_trace(trace: Trace) -> str:
    """JSON lines: a header, one record per operation, and a trailer."""
    header = {"type": "header", "initial": graph_to_json(trace.initial)}
    if trace.chain is not None:
        header["chain"] = [sorted(b) for b in trace.chain.blocks]
    recs = [header]
    recs += [{"type": "op", **step.op.to_json()} for step in trace.steps]
    recs.append({"type": "trailer", "steps": len(trace.steps), "final_hash": graph_hash(trace.final)})
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in recs)


def format_ops(ops: Iterable[ElementaryOp]) -> str:
    return "".join(json.dumps({"type": "op", **op.to_json()}, sort_keys=True) + "\n" for op in ops)


def parse_trace(text: str) -> Trace:
    recs = []
    for no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            recs.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise CorruptTraceError(f"line {no}: not JSON ({exc.msg})") from None
    if not recs or recs[0].get("type") != "header":
        raise CorruptTraceError("trace must start with a header record")
    if recs[-1].get("type") != "trailer":
        raise CorruptTraceError("trace must end with a trailer record")
    try:
        initial = graph_from_json(recs[0]["initial"])
        chain = Chain(recs[0]["chain"]) if "chain" in recs[0] else None
        ops = []
        for rec in recs[1:-1]:
            if rec.get("type") != "op":
                raise CorruptTraceError(f"unexpected record type {rec.get('type')!r}")
            ops.append(ElementaryOp.from_json(rec))
    except (InputError, KeyError) as exc:
        raise CorruptTraceError(f"bad trace record: {exc}") from exc
    trace = Trace.replay(initial, ops, chain)
    trailer = recs[-1]
    if trailer.get("steps", len(ops)) != len(ops):
        raise CorruptTraceError(f"trailer announces {trailer.get('steps')} steps, found {len(ops)}")
    if trailer.get("final_hash") != graph_hash(trace.final):
        raise CorruptTraceError("replayed final graph does not match the trailer hash")
    return trace
