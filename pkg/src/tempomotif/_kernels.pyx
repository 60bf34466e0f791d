# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels; same contract as ``_kernels_py``."""

from libc.stdint cimport int64_t, uint64_t

BACKEND = "cython"

cdef enum:
    MAXK = 32
    MAXL = 32


cdef inline Py_ssize_t _bl(list a, int64_t x, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if <int64_t>a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _br(list a, int64_t x, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if x < <int64_t>a[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = z + 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef class _Search:
    cdef list src, dst, tim
    cdef dict out, inn, pair
    cdef int64_t base, delta, lo, hi, expansions
    cdef int k, l, last
    cdef int order[MAXL]
    cdef int pa[MAXL]
    cdef int pb[MAXL]
    cdef int ak[MAXL]
    cdef int bk[MAXL]
    cdef int prev[MAXL]
    cdef int nxt[MAXL]
    cdef int64_t assign[MAXK]
    cdef int64_t matched[MAXL]

    cdef bint taken(self, int64_t w):
        cdef int i
        for i in range(self.k):
            if self.assign[i] == w:
                return True
        return False


cdef int64_t _rec(_Search s, int d, int64_t tmin, int64_t tmax) except -1:
    cdef int i = s.order[d]
    cdef int a = s.pa[d]
    cdef int b = s.pb[d]
    cdef int fill
    cdef int64_t base = s.base
    cdef int64_t lo_d = s.lo
    cdef int64_t hi_d = s.hi
    cdef int64_t lo_t, hi_t, o, w, t, x, y
    cdef int64_t total = 0
    cdef Py_ssize_t i0, i1, jj
    cdef object obj
    cdef list lst, ends
    cdef int p = s.prev[d]
    cdef int n = s.nxt[d]
    if p >= 0 and s.matched[p] + 1 > lo_d:
        lo_d = s.matched[p] + 1
    if n >= 0 and s.matched[n] - 1 < hi_d:
        hi_d = s.matched[n] - 1
    if lo_d > hi_d:
        return 0
    lo_t = _bl(s.tim, tmax - s.delta, lo_d - base, hi_d - base + 1) + base
    hi_t = _br(s.tim, tmin + s.delta, lo_d - base, hi_d - base + 1) + base - 1
    if lo_t > lo_d:
        lo_d = lo_t
    if hi_t < hi_d:
        hi_d = hi_t
    if lo_d > hi_d:
        return 0
    if s.ak[d] and s.bk[d]:
        obj = s.pair.get((s.assign[a], s.assign[b]))
        if obj is None:
            return 0
        lst = obj
        i0 = _bl(lst, lo_d, 0, len(lst))
        i1 = _br(lst, hi_d, i0, len(lst))
        s.expansions += i1 - i0
        if d == s.last:
            return i1 - i0
        for jj in range(i0, i1):
            o = lst[jj]
            s.matched[i] = o
            t = s.tim[o - base]
            total += _rec(s, d + 1, t if t < tmin else tmin, t if t > tmax else tmax)
        return total
    if s.ak[d] or s.bk[d]:
        if s.ak[d]:
            obj = s.out.get(s.assign[a])
            ends = s.dst
            fill = b
        else:
            obj = s.inn.get(s.assign[b])
            ends = s.src
            fill = a
        if obj is None:
            return 0
        lst = obj
        i0 = _bl(lst, lo_d, 0, len(lst))
        i1 = _br(lst, hi_d, i0, len(lst))
        s.expansions += i1 - i0
        for jj in range(i0, i1):
            o = lst[jj]
            w = ends[o - base]
            if s.taken(w):
                continue
            if d == s.last:
                total += 1
                continue
            s.assign[fill] = w
            s.matched[i] = o
            t = s.tim[o - base]
            total += _rec(s, d + 1, t if t < tmin else tmin, t if t > tmax else tmax)
            s.assign[fill] = -1
        return total
    o = lo_d
    while o <= hi_d:
        s.expansions += 1
        x = s.src[o - base]
        y = s.dst[o - base]
        if not (s.taken(x) or s.taken(y)):
            if d == s.last:
                total += 1
            else:
                s.assign[a] = x
                s.assign[b] = y
                s.matched[i] = o
                t = s.tim[o - base]
                total += _rec(s, d + 1, t if t < tmin else tmin, t if t > tmax else tmax)
                s.assign[a] = -1
                s.assign[b] = -1
        o += 1
    return total


def count_from_edge(idx, plan, int64_t e, int64_t delta, int64_t lo, int64_t hi):
    """Count delta-instances with edge ``e`` mapped to ``plan.order[0]``.

    Returns ``(count, expansions)``.
    """
    cdef _Search s = _Search()
    cdef int d, i
    cdef int64_t t0
    if plan.k > MAXK or plan.l > MAXL:
        raise ValueError(f"compiled kernel supports k, l <= {MAXK}")
    s.src = idx.src
    s.dst = idx.dst
    s.tim = idx.time
    s.out = idx.out
    s.inn = idx.inn
    s.pair = idx.pair
    s.base = idx.base
    s.delta = delta
    s.lo = lo
    s.hi = hi
    s.expansions = 0
    s.k = plan.k
    s.l = plan.l
    s.last = s.l - 1
    for d in range(s.l):
        s.order[d] = plan.order[d]
        s.pa[d] = plan.a[d]
        s.pb[d] = plan.b[d]
        s.ak[d] = plan.a_known[d]
        s.bk[d] = plan.b_known[d]
        s.prev[d] = plan.prev[d]
        s.nxt[d] = plan.nxt[d]
        s.matched[d] = -1
    for i in range(s.k):
        s.assign[i] = -1
    s.assign[s.pa[0]] = s.src[e - s.base]
    s.assign[s.pb[0]] = s.dst[e - s.base]
    s.matched[s.order[0]] = e
    if s.l == 1:
        return 1, 0
    t0 = s.tim[e - s.base]
    cdef int64_t count = _rec(s, 1, t0, t0)
    return count, s.expansions


def wedge_sum(idx, wp, int64_t e, int64_t delta, int64_t lo, int64_t hi, double q, uint64_t key):
    """Sampled wedge closures for ``e``; returns ``(closures, candidates)``."""
    cdef int64_t base = idx.base
    cdef list src = idx.src, dst = idx.dst, tim = idx.time, seqs = idx.seq
    cdef dict pair = idx.pair
    cdef int64_t u = src[e - base]
    cdef int64_t v = dst[e - base]
    cdef int64_t te = tim[e - base]
    cdef int64_t gc = u if wp.center_end == 0 else v
    cdef int x_out = wp.x_out
    cdef int ya = wp.ya, yb = wp.yb, y_lo = wp.y_lo, y_hi = wp.y_hi
    cdef object obj = (idx.out if x_out else idx.inn).get(gc)
    cdef list lst, plist, far
    cdef Py_ssize_t i0, i1, jj
    cdef int64_t g, w, tg, tmin, tmax, ga, gb, lo_y, hi_y, lo_t, hi_t, bound
    cdef int64_t closures = 0
    cdef uint64_t kj = 0, h
    cdef bint keep_all = q >= 1.0
    if obj is None:
        return 0, 0
    lst = obj
    if wp.x_before:
        bound = _bl(tim, te - delta, lo - base, e - base) + base
        i0 = _bl(lst, bound, 0, len(lst))
        i1 = _bl(lst, e, i0, len(lst))
    else:
        bound = _br(tim, te + delta, e + 1 - base, hi - base + 1) + base - 1
        i0 = _br(lst, e, 0, len(lst))
        i1 = _br(lst, bound, i0, len(lst))
    if i1 <= i0:
        return 0, 0
    if not keep_all:
        kj = _mix(_mix(key ^ <uint64_t>(<int64_t>seqs[e - base])) ^ <uint64_t>(<int>wp.j))
    far = dst if x_out else src
    for jj in range(i0, i1):
        g = lst[jj]
        w = far[g - base]
        if w == u or w == v:
            continue
        if not keep_all:
            h = _mix(kj ^ <uint64_t>(<int64_t>seqs[g - base]))
            if <double>(h >> 11) * (1.0 / 9007199254740992.0) >= q:
                continue
        ga = u if ya == 0 else (v if ya == 1 else w)
        gb = u if yb == 0 else (v if yb == 1 else w)
        obj = pair.get((ga, gb))
        if obj is None:
            continue
        plist = obj
        tg = tim[g - base]
        if tg < te:
            tmin = tg
            tmax = te
        else:
            tmin = te
            tmax = tg
        lo_y = lo
        hi_y = hi
        if y_lo == 1 and e + 1 > lo_y:
            lo_y = e + 1
        elif y_lo == 2 and g + 1 > lo_y:
            lo_y = g + 1
        if y_hi == 1 and e - 1 < hi_y:
            hi_y = e - 1
        elif y_hi == 2 and g - 1 < hi_y:
            hi_y = g - 1
        if lo_y > hi_y:
            continue
        lo_t = _bl(tim, tmax - delta, lo_y - base, hi_y - base + 1) + base
        hi_t = _br(tim, tmin + delta, lo_y - base, hi_y - base + 1) + base - 1
        if lo_t > lo_y:
            lo_y = lo_t
        if hi_t < hi_y:
            hi_y = hi_t
        if lo_y > hi_y:
            continue
        closures += _br(plist, hi_y, 0, len(plist)) - _bl(plist, lo_y, 0, len(plist))
    return closures, i1 - i0
