"""Command-line interface.

Exit codes: 0 on success, 1 on input or domain errors (and for ``validate``
on a non-chain graph, ``verify-trace`` on an invalid trace), 2 when an
internal invariant is violated.
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import sys
import tempfile
from pathlib import Path

from . import kernel
from .errors import CGError, InternalInvariantError
from .generate import EDGE_PROBABILITY, random_cg, random_imap_pair
from .graph import components, consistent_chain, fmt_set, is_chain_graph
from .io import (
    format_graph,
    format_model,
    format_ops,
    format_trace,
    parse_chain,
    parse_graph,
    parse_model,
    parse_trace,
)
from .meek import Trace, method_b3, method_g2h, verify_trace
from .mimap import mi_map, oracle_from_graph, oracle_from_model
from .separation import (
    DEFAULT_MAX_NODES,
    enumerate_model,
    is_imap,
    model_leq,
    separated,
    separated_bruteforce,
    separated_moral,
)
from .transform import fbmerge, fbsplit

log = logging.getLogger("cgmeek")

ENGINES = {"reach": separated, "brute": separated_bruteforce, "moral": separated_moral}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _nodes(arg: str | None) -> list[str]:
    if not arg:
        return []
    return [t for t in arg.replace(",", " ").split() if t]


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` so that ``path`` is either untouched or complete."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _emit(args, text: str, path: str | None = None) -> None:
    path = path if path is not None else args.out
    if path and path != "-":
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    G = parse_graph(_read(args.graph))
    print(f"nodes: {len(G)}  edges: {G.num_edges()}")
    comps = components(G)
    print("components: " + " ".join(fmt_set(c) for c in comps))
    if not is_chain_graph(G):
        print("chain graph: no")
        return 1
    print("chain graph: yes")
    print("chain: " + " ".join(fmt_set(b) for b in consistent_chain(G).blocks))
    return 0


def cmd_components(args) -> int:
    G = parse_graph(_read(args.graph))
    _emit(args, "".join(" ".join(sorted(c)) + "\n" for c in components(G)))
    return 0


def cmd_separate(args) -> int:
    G = parse_graph(_read(args.graph))
    X, Y, Z = _nodes(args.x), _nodes(args.y), _nodes(args.z)
    if args.oracle == "all":
        answers = {name: fn(G, X, Y, Z) for name, fn in ENGINES.items()}
        if len(set(answers.values())) != 1:
            raise InternalInvariantError(
                "separation engines disagree: " + ", ".join(f"{k}={v}" for k, v in answers.items())
            )
        result = answers["reach"]
    else:
        result = ENGINES[args.oracle](G, X, Y, Z)
    print("true" if result else "false")
    return 0


def cmd_model(args) -> int:
    G = parse_graph(_read(args.graph))
    _emit(args, format_model(enumerate_model(G, args.max_nodes)))
    return 0


def cmd_imap_check(args) -> int:
    H = parse_graph(_read(args.h))
    if args.model:
        M = parse_model(_read(args.model), universe=H.nodes)
        result = model_leq(H, M, args.max_nodes)
    else:
        if not args.g:
            raise CGError("imap-check needs a graph G or --model")
        G = parse_graph(_read(args.g))
        result = is_imap(H, G, args.max_nodes)
    print("true" if result else "false")
    return 0


def _write_ops_result(args, G, ops) -> int:
    text = format_graph(G)
    ops_text = format_ops(ops)
    _emit(args, text)
    if args.trace:
        write_atomic(args.trace, ops_text)
    for op in ops:
        log.info("%s", op)
    return 0


def cmd_fbsplit(args) -> int:
    G = parse_graph(_read(args.graph))
    G2, ops = fbsplit(G, _nodes(args.block), _nodes(args.part))
    return _write_ops_result(args, G2, ops)


def cmd_fbmerge(args) -> int:
    G = parse_graph(_read(args.graph))
    G2, ops = fbmerge(G, _nodes(args.left), _nodes(args.right))
    return _write_ops_result(args, G2, ops)


def _write_trace_result(args, trace: Trace) -> int:
    graph_text = format_graph(trace.final)
    trace_text = format_trace(trace)
    _emit(args, graph_text)
    if args.trace:
        write_atomic(args.trace, trace_text)
    for step in trace.steps:
        log.info("%-8s %s", step.via, step.op)
    return 0


def cmd_b3(args) -> int:
    G = parse_graph(_read(args.graph))
    alpha = parse_chain(_read(args.chain))
    _, trace = method_b3(G, alpha)
    return _write_trace_result(args, trace)


def cmd_g2h(args) -> int:
    G = parse_graph(_read(args.g))
    H = parse_graph(_read(args.h))
    return _write_trace_result(args, method_g2h(G, H, args.max_nodes))


def cmd_mimap(args) -> int:
    alpha = parse_chain(_read(args.chain))
    if args.graph:
        oracle = oracle_from_graph(parse_graph(_read(args.graph)))
    elif args.model:
        oracle = oracle_from_model(parse_model(_read(args.model), universe=alpha.nodes))
    else:
        raise CGError("mimap needs --graph or --model")
    _emit(args, format_graph(mi_map(oracle, alpha, workers=args.workers)))
    return 0


def cmd_verify_trace(args) -> int:
    trace = parse_trace(_read(args.trace_file))
    H = parse_graph(_read(args.h))
    report = verify_trace(trace, H, args.max_nodes)
    print(report)
    return 0 if report.valid else 1


def cmd_random(args) -> int:
    rng = random.Random(args.seed)
    if args.kind == "cg":
        _emit(args, format_graph(random_cg(rng, args.n, args.edge_prob)))
        return 0
    G, H = random_imap_pair(rng, args.n, args.edge_prob)
    g_text, h_text = format_graph(G), format_graph(H)
    if args.out and args.out != "-":
        write_atomic(Path(args.out) / "G.txt", g_text)
        write_atomic(Path(args.out) / "H.txt", h_text)
    else:
        sys.stdout.write("# G\n" + g_text + "# H\n" + h_text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES,
                        help="bound for exhaustive model enumeration (default %(default)s)")
    common.add_argument("--out", help="output file (default: stdout)")

    p = argparse.ArgumentParser(prog="cgmeek", description="Chain graph separation and transformation tools.")
    p.add_argument("--version", action="version", version=f"%(prog)s (kernel: {kernel.BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="parse a graph and report whether it is a chain graph")
    s.add_argument("graph")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("components", parents=[common], help="list components, one per line")
    s.add_argument("graph")
    s.set_defaults(func=cmd_components)

    s = sub.add_parser("separate", parents=[common], help="decide X _|_ Y | Z")
    s.add_argument("graph")
    s.add_argument("--x", required=True, help="comma-separated nodes")
    s.add_argument("--y", required=True)
    s.add_argument("--z", default="")
    s.add_argument("--oracle", choices=["reach", "brute", "moral", "all"], default="reach")
    s.set_defaults(func=cmd_separate)

    s = sub.add_parser("model", parents=[common], help="print every canonical separation statement")
    s.add_argument("graph")
    s.set_defaults(func=cmd_model)

    s = sub.add_parser("imap-check", parents=[common], help="is I(H) contained in I(G) (or in --model)?")
    s.add_argument("h")
    s.add_argument("g", nargs="?")
    s.add_argument("--model", help="model file to compare against instead of G")
    s.set_defaults(func=cmd_imap_check)

    s = sub.add_parser("fbsplit", parents=[common], help="feasible block split")
    s.add_argument("graph")
    s.add_argument("--block", required=True)
    s.add_argument("--part", required=True)
    s.add_argument("--trace", help="write the operations as JSON lines")
    s.set_defaults(func=cmd_fbsplit)

    s = sub.add_parser("fbmerge", parents=[common], help="feasible block merge")
    s.add_argument("graph")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--trace", help="write the operations as JSON lines")
    s.set_defaults(func=cmd_fbmerge)

    s = sub.add_parser("b3", parents=[common], help="minimal map of I(G) relative to a chain, by graph operations")
    s.add_argument("graph")
    s.add_argument("chain")
    s.add_argument("--trace", help="write the trace as JSON lines")
    s.set_defaults(func=cmd_b3)

    s = sub.add_parser("g2h", parents=[common], help="transform G into H monotonically")
    s.add_argument("g")
    s.add_argument("h")
    s.add_argument("--trace", help="write the trace as JSON lines")
    s.set_defaults(func=cmd_g2h)

    s = sub.add_parser("mimap", parents=[common], help="minimal map relative to a chain from an oracle")
    s.add_argument("chain")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph")
    src.add_argument("--model")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_mimap)

    s = sub.add_parser("verify-trace", parents=[common], help="replay a trace and check every step")
    s.add_argument("trace_file")
    s.add_argument("h")
    s.set_defaults(func=cmd_verify_trace)

    s = sub.add_parser("random", parents=[common], help="seeded random chain graph or I-map pair")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--kind", choices=["cg", "imap-pair"], default="cg")
    s.add_argument("--edge-prob", type=float, default=EDGE_PROBABILITY)
    s.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if not 0 <= getattr(args, "seed", 0) < 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    if args.max_nodes < 1:
        parser.error("--max-nodes must be at least 1")
    if getattr(args, "n", 1) < 1:
        parser.error("-n must be at least 1")
    try:
        return args.func(args)
    except InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except (CGError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
