# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels: same algorithms and exploration order as _pykernels."""

from libc.stdint cimport uint64_t
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

BACKEND = "compiled"

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long x) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long x) nogil


cdef inline uint64_t _full_mask(int n):
    if n >= 64:
        return <uint64_t>0xFFFFFFFFFFFFFFFF
    return ((<uint64_t>1) << n) - 1


cdef inline uint64_t _bit(int v):
    return (<uint64_t>1) << v


cdef struct Search:
    const uint64_t* adj
    int n
    int k
    uint64_t full
    long long expanded
    long long limit


cdef int _boundary(Search* s, uint64_t placed):
    cdef uint64_t out = s.full & ~placed
    cdef uint64_t m = placed
    cdef int count = 0
    cdef int u
    while m:
        u = ctz64(m)
        m &= m - 1
        if s.adj[u] & out:
            count += 1
    return count


# return codes: 1 found, 0 infeasible, -1 state limit hit
cdef int _vs(Search* s, uint64_t placed, int b, unordered_set[uint64_t]& failed, vector[int]& path):
    if placed == s.full:
        return 1
    if failed.count(placed):
        return 0
    s.expanded += 1
    if s.limit and s.expanded > s.limit:
        return -1
    cdef uint64_t rest = s.full & ~placed
    cdef uint64_t m = rest
    cdef int v, nb, r
    while m:
        v = ctz64(m)
        m &= m - 1
        nb = _boundary(s, placed | _bit(v))
        if nb <= b:
            path.push_back(v)
            r = _vs(s, placed | _bit(v), nb, failed, path)
            if r == 0:
                path.pop_back()
                failed.insert(placed)
            return r
    m = rest
    while m:
        v = ctz64(m)
        m &= m - 1
        nb = _boundary(s, placed | _bit(v))
        if nb <= s.k:
            path.push_back(v)
            r = _vs(s, placed | _bit(v), nb, failed, path)
            if r != 0:
                return r
            path.pop_back()
    failed.insert(placed)
    return 0


def vertex_separation_order(list adj, int k, long long node_limit=0):
    cdef int n = len(adj)
    if n > 64:
        raise ValueError("at most 64 nodes")
    cdef vector[uint64_t] masks
    for a in adj:
        masks.push_back(<uint64_t>a)
    cdef Search s
    s.adj = masks.data()
    s.n = n
    s.k = k
    s.full = _full_mask(n)
    s.expanded = 0
    s.limit = node_limit
    cdef unordered_set[uint64_t] failed
    cdef vector[int] path
    cdef int r = _vs(&s, 0, 0, failed, path)
    if r < 0:
        raise RuntimeError("search state limit exceeded")
    if r == 0:
        return None
    return [path[i] for i in range(path.size())]


cdef void _neighbourhoods(Search* s, uint64_t elim, uint64_t* nb):
    cdef uint64_t rest = s.full & ~elim
    cdef uint64_t seen = 0, comp, frontier, grow, border, m, f
    cdef int v, u, start
    for v in range(s.n):
        nb[v] = s.adj[v] & rest
    m = elim
    while m:
        start = ctz64(m)
        m &= m - 1
        if (seen >> start) & 1:
            continue
        comp = _bit(start)
        frontier = comp
        while frontier:
            grow = 0
            f = frontier
            while f:
                u = ctz64(f)
                f &= f - 1
                grow |= s.adj[u]
            grow &= elim & ~comp
            comp |= grow
            frontier = grow
        seen |= comp
        border = 0
        f = comp
        while f:
            u = ctz64(f)
            f &= f - 1
            border |= s.adj[u]
        border &= rest
        f = border
        while f:
            v = ctz64(f)
            f &= f - 1
            nb[v] |= border & ~_bit(v)


cdef bint _is_clique(uint64_t* nb, uint64_t members):
    cdef uint64_t m = members
    cdef int u
    while m:
        u = ctz64(m)
        m &= m - 1
        if (members & ~_bit(u)) & ~nb[u]:
            return False
    return True


cdef int _tw(Search* s, uint64_t elim, unordered_set[uint64_t]& failed, vector[int]& path):
    cdef uint64_t rest = s.full & ~elim
    cdef uint64_t m, w_m
    cdef int v, w, r, i, ncand = 0, forced = -1
    if popcount64(rest) <= s.k + 1:
        m = rest
        while m:
            path.push_back(ctz64(m))
            m &= m - 1
        return 1
    if failed.count(elim):
        return 0
    s.expanded += 1
    if s.limit and s.expanded > s.limit:
        return -1
    cdef uint64_t nb[64]
    cdef int cand[64]
    _neighbourhoods(s, elim, nb)
    m = rest
    while m:
        v = ctz64(m)
        m &= m - 1
        if popcount64(nb[v]) > s.k:
            continue
        cand[ncand] = v
        ncand += 1
        if _is_clique(nb, nb[v]):
            forced = v
            break
        w_m = nb[v]
        while w_m:
            w = ctz64(w_m)
            w_m &= w_m - 1
            if _is_clique(nb, nb[v] & ~_bit(w)):
                forced = v
                break
        if forced >= 0:
            break
    cdef size_t mark = path.size()
    if forced >= 0:
        path.push_back(forced)
        r = _tw(s, elim | _bit(forced), failed, path)
        if r == 0:
            path.resize(mark)
            failed.insert(elim)
        return r
    for i in range(ncand):
        v = cand[i]
        path.push_back(v)
        r = _tw(s, elim | _bit(v), failed, path)
        if r != 0:
            return r
        path.resize(mark)
    failed.insert(elim)
    return 0


def elimination_order(list adj, int k, long long node_limit=0):
    cdef int n = len(adj)
    if n > 64:
        raise ValueError("at most 64 nodes")
    cdef vector[uint64_t] masks
    for a in adj:
        masks.push_back(<uint64_t>a)
    cdef Search s
    s.adj = masks.data()
    s.n = n
    s.k = k
    s.full = _full_mask(n)
    s.expanded = 0
    s.limit = node_limit
    cdef unordered_set[uint64_t] failed
    cdef vector[int] path
    cdef int r = _tw(&s, 0, failed, path)
    if r < 0:
        raise RuntimeError("search state limit exceeded")
    if r == 0:
        return None
    return [path[i] for i in range(path.size())]
