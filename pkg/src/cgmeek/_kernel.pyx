# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled separation kernel.  Same contract as ``_kernel_py``; limited to
64 nodes because masks are ``uint64``."""

from libc.stdint cimport uint64_t

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

MAX_NODES = 64


cdef inline uint64_t _spread(const uint64_t* adj, uint64_t mask) noexcept nogil:
    cdef uint64_t out = 0
    while mask:
        out |= adj[__builtin_ctzll(mask)]
        mask &= mask - 1
    return out


cdef bint _separated(const uint64_t* und, const uint64_t* ch, const uint64_t* pa,
                     uint64_t xmask, uint64_t ymask, uint64_t zmask) noexcept nogil:
    cdef uint64_t notz = ~zmask
    cdef uint64_t t0 = xmask & notz, t1 = 0, h0 = 0, h1 = 0
    cdef uint64_t ft0 = t0, ft1 = 0, fh0 = 0, fh1 = 0
    cdef uint64_t nt0, nt1, nh0, nh1, u, c, p
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


cdef void _load(object seq, uint64_t* out, int n) except *:
    cdef int i
    for i in range(n):
        out[i] = <uint64_t>seq[i]


def reach_separated(und, ch, pa, xmask, ymask, zmask):
    cdef int n = len(und)
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 nodes")
    cdef uint64_t a_und[64]
    cdef uint64_t a_ch[64]
    cdef uint64_t a_pa[64]
    _load(und, a_und, n)
    _load(ch, a_ch, n)
    _load(pa, a_pa, n)
    return bool(_separated(a_und, a_ch, a_pa, <uint64_t>xmask, <uint64_t>ymask, <uint64_t>zmask))


def separated_pairs(und, ch, pa):
    cdef int n = len(und)
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 nodes")
    cdef uint64_t a_und[64]
    cdef uint64_t a_ch[64]
    cdef uint64_t a_pa[64]
    _load(und, a_und, n)
    _load(ch, a_ch, n)
    _load(pa, a_pa, n)
    cdef uint64_t full = (<uint64_t>1 << n) - 1 if n < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    cdef uint64_t rest, z
    cdef int i, j
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            rest = full & ~((<uint64_t>1 << i) | (<uint64_t>1 << j))
            z = 0
            while True:
                if _separated(a_und, a_ch, a_pa, <uint64_t>1 << i, <uint64_t>1 << j, z):
                    out.append((i, j, z))
                if z == rest:
                    break
                z = ((z | ~rest) + 1) & rest
    return out
