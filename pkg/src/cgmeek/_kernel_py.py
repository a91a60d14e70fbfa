"""Pure-Python separation kernel over bitmask adjacency.

Nodes are indices ``0..n-1``; ``und[i]``, ``ch[i]`` and ``pa[i]`` are integer
masks of the undirected neighbours, children and parents of node ``i``.

Reachability runs over states (node, section entered by arrowhead?, section
already met Z?).  Undirected steps stay inside the current section.  Leaving
a section through a tail requires it to have avoided Z.  Leaving through an
arrowhead makes the section a collider when it was also entered through one,
in which case it must have met Z; otherwise it must have avoided Z.
"""


def _spread(adj, mask):
    out = 0
    while mask:
        low = mask & -mask
        out |= adj[low.bit_length() - 1]
        mask ^= low
    return out


def reach_separated(und, ch, pa, xmask, ymask, zmask):
    """True iff no Z-active route joins a node of ``xmask`` to one of ``ymask``."""
    notz = ~zmask
    # visited sets: t = entered via tail (or route start), h = via arrowhead;
    # suffix 0/1 = section has not / has met Z
    t0 = xmask & notz
    t1 = h0 = h1 = 0
    ft0, ft1, fh0, fh1 = t0, 0, 0, 0
    while ft0 | ft1 | fh0 | fh1:
        if (ft0 | fh0) & ymask:
            return False
        u = _spread(und, ft0)
        nt0 = u & notz
        nt1 = (u & zmask) | _spread(und, ft1)
        u = _spread(und, fh0)
        nh0 = u & notz
        nh1 = (u & zmask) | _spread(und, fh1)
        c = _spread(ch, ft0 | fh0)
        nh0 |= c & notz
        nh1 |= c & zmask
        p = _spread(pa, ft0 | fh1)
        nt0 |= p & notz
        nt1 |= p & zmask
        ft0 = nt0 & ~t0
        ft1 = nt1 & ~t1
        fh0 = nh0 & ~h0
        fh1 = nh1 & ~h1
        t0 |= ft0
        t1 |= ft1
        h0 |= fh0
        h1 |= fh1
    return True


def separated_pairs(und, ch, pa):
    """All ``(i, j, zmask)`` with ``i < j`` and ``zmask`` over the remaining nodes
    such that node ``i`` is separated from node ``j`` given ``zmask``.

    Ordered by ``i``, then ``j``, then ascending ``zmask``.
    """
    n = len(und)
    full = (1 << n) - 1
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            rest = full & ~((1 << i) | (1 << j))
            # submasks of rest in ascending order
            z = 0
            while True:
                if reach_separated(und, ch, pa, 1 << i, 1 << j, z):
                    out.append((i, j, z))
                if z == rest:
                    break
                z = ((z | ~rest) + 1) & rest
    return out
