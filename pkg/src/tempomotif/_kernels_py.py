"""Pure-Python counting kernels (reference implementation and fallback).

``_kernels.pyx`` mirrors these functions one for one; results must agree
bit for bit.  Ordinal bounds ``lo``/``hi`` are inclusive.
"""

from bisect import bisect_left, bisect_right

from .rng import GOLDEN, MASK64

BACKEND = "python"


def count_from_edge(idx, plan, e, delta, lo, hi, emit=None):
    """Count delta-instances with edge ``e`` mapped to motif edge ``plan.order[0]``.

    Returns ``(count, expansions)`` where expansions is the number of
    candidate edges examined by the tree search.  If ``emit`` is given it
    is called with the matched ordinals (sigma order) of every instance.
    """
    base = idx.base
    src, dst, tim = idx.src, idx.dst, idx.time
    out, inn, pair = idx.out, idx.inn, idx.pair
    l = plan.l
    order, pa, pb = plan.order, plan.a, plan.b
    a_known, b_known, prev, nxt = plan.a_known, plan.b_known, plan.prev, plan.nxt
    assign = [-1] * plan.k
    matched = [-1] * l
    assign[pa[0]] = src[e - base]
    assign[pb[0]] = dst[e - base]
    matched[order[0]] = e
    t0 = tim[e - base]
    if l == 1:
        if emit is not None:
            emit((e,))
        return 1, 0
    # enumeration disables the count-only shortcut at the last depth
    last = l - 1 if emit is None else l
    expansions = 0

    def rec(d, tmin, tmax):
        nonlocal expansions
        if d == l:
            emit(tuple(matched))
            return 1
        i = order[d]
        a, b = pa[d], pb[d]
        lo_d = lo
        hi_d = hi
        p = prev[d]
        if p >= 0 and matched[p] + 1 > lo_d:
            lo_d = matched[p] + 1
        n = nxt[d]
        if n >= 0 and matched[n] - 1 < hi_d:
            hi_d = matched[n] - 1
        if lo_d > hi_d:
            return 0
        # duration constraint as an ordinal range
        lo_t = bisect_left(tim, tmax - delta, lo_d - base, hi_d - base + 1) + base
        hi_t = bisect_right(tim, tmin + delta, lo_d - base, hi_d - base + 1) + base - 1
        if lo_t > lo_d:
            lo_d = lo_t
        if hi_t < hi_d:
            hi_d = hi_t
        if lo_d > hi_d:
            return 0
        total = 0
        if a_known[d] and b_known[d]:
            lst = pair.get((assign[a], assign[b]))
            if lst is None:
                return 0
            i0 = bisect_left(lst, lo_d)
            i1 = bisect_right(lst, hi_d)
            expansions += i1 - i0
            if d == last:
                return i1 - i0
            for o in lst[i0:i1]:
                matched[i] = o
                t = tim[o - base]
                total += rec(d + 1, t if t < tmin else tmin, t if t > tmax else tmax)
            return total
        if a_known[d] or b_known[d]:
            if a_known[d]:
                lst = out.get(assign[a])
                ends, fill = dst, b
            else:
                lst = inn.get(assign[b])
                ends, fill = src, a
            if lst is None:
                return 0
            i0 = bisect_left(lst, lo_d)
            i1 = bisect_right(lst, hi_d)
            expansions += i1 - i0
            for o in lst[i0:i1]:
                w = ends[o - base]
                if w in assign:
                    continue
                if d == last:
                    total += 1
                    continue
                assign[fill] = w
                matched[i] = o
                t = tim[o - base]
                total += rec(d + 1, t if t < tmin else tmin, t if t > tmax else tmax)
                assign[fill] = -1
            return total
        # neither endpoint fixed: only reachable with a disconnected order
        for o in range(lo_d, hi_d + 1):
            expansions += 1
            s, t_ = src[o - base], dst[o - base]
            if s in assign or t_ in assign:
                continue
            if d == last:
                total += 1
                continue
            assign[a], assign[b] = s, t_
            matched[i] = o
            t = tim[o - base]
            total += rec(d + 1, t if t < tmin else tmin, t if t > tmax else tmax)
            assign[a] = assign[b] = -1
        return total

    count = rec(1, t0, t0)
    return count, expansions


def _mix(z):
    z = (z + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def wedge_sum(idx, wp, e, delta, lo, hi, q, key):
    """Sampled wedge closures for edge ``e`` under wedge plan ``wp``.

    Returns ``(closures, candidates)``: the summed closing-edge counts of
    wedges kept with probability ``q`` (unscaled), and the number of
    candidate wedges.  Keep decisions hash ``(key, seq(e), j, seq(g))``.
    """
    base = idx.base
    src, dst, tim, seqs = idx.src, idx.dst, idx.time, idx.seq
    u = src[e - base]
    v = dst[e - base]
    te = tim[e - base]
    gc = u if wp.center_end == 0 else v
    lst = (idx.out if wp.x_out else idx.inn).get(gc)
    if lst is None:
        return 0, 0
    if wp.x_before:
        lo_g = bisect_left(tim, te - delta, lo - base, e - base) + base
        i0 = bisect_left(lst, lo_g)
        i1 = bisect_left(lst, e)
    else:
        hi_g = bisect_right(tim, te + delta, e + 1 - base, hi - base + 1) + base - 1
        i0 = bisect_right(lst, e)
        i1 = bisect_right(lst, hi_g)
    if i1 <= i0:
        return 0, 0
    keep_all = q >= 1.0
    kj = _mix(_mix(key ^ (seqs[e - base] & MASK64)) ^ wp.j) if not keep_all else 0
    far = dst if wp.x_out else src
    pair = idx.pair
    ya, yb, y_lo, y_hi = wp.ya, wp.yb, wp.y_lo, wp.y_hi
    closures = 0
    for g in lst[i0:i1]:
        w = far[g - base]
        if w == u or w == v:
            continue
        if not keep_all:
            h = _mix(kj ^ (seqs[g - base] & MASK64))
            if (h >> 11) * (1.0 / 9007199254740992.0) >= q:
                continue
        ga = u if ya == 0 else (v if ya == 1 else w)
        gb = u if yb == 0 else (v if yb == 1 else w)
        plist = pair.get((ga, gb))
        if plist is None:
            continue
        tg = tim[g - base]
        tmin, tmax = (tg, te) if tg < te else (te, tg)
        lo_y = lo
        hi_y = hi
        if y_lo == 1:
            lo_y = max(lo_y, e + 1)
        elif y_lo == 2:
            lo_y = max(lo_y, g + 1)
        if y_hi == 1:
            hi_y = min(hi_y, e - 1)
        elif y_hi == 2:
            hi_y = min(hi_y, g - 1)
        if lo_y > hi_y:
            continue
        lo_t = bisect_left(tim, tmax - delta, lo_y - base, hi_y - base + 1) + base
        hi_t = bisect_right(tim, tmin + delta, lo_y - base, hi_y - base + 1) + base - 1
        if lo_t > lo_y:
            lo_y = lo_t
        if hi_t < hi_y:
            hi_y = hi_t
        if lo_y > hi_y:
            continue
        closures += bisect_right(plist, hi_y) - bisect_left(plist, lo_y)
    return closures, i1 - i0
