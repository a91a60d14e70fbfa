from cgmeek.graph import Chain
from cgmeek.io import parse_graph


def g(text: str):
    """Graph from the text format with ``;`` allowed as a line separator."""
    return parse_graph(text.replace(";", "\n"))


def chain(*blocks: str) -> Chain:
    return Chain([list(b) for b in blocks])


def fs(s: str = "") -> frozenset:
    return frozenset(s)


def possible_splits(G):
    """Every (component, part) pair that satisfies the split preconditions."""
    import itertools

    from cgmeek.graph import components, undirected_parts

    for C in components(G):
        members = sorted(C)
        for k in range(1, len(members)):
            for L in itertools.combinations(members, k):
                L = frozenset(L)
                if len(undirected_parts(G, L)) == 1 and len(undirected_parts(G, C - L)) == 1:
                    yield C, L


def possible_merges(G):
    """Every (left, right) component pair with an edge from left into right."""
    from cgmeek.graph import components, parents

    comps = components(G)
    for R in comps:
        pa = parents(G, R)
        for L in comps:
            if L != R and pa & L:
                yield L, R
