"""Exact delta-instance counting by backtracking, plus a brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels_py, kernels
from ._plan import BacktrackPlan
from .graph import TemporalEdge, TemporalGraph
from .motif import TemporalMotif, matching_orders

__all__ = [
    "MotifInstance",
    "EnumerationLimitError",
    "count_local",
    "count_local_last",
    "local_counts",
    "exact_count",
    "enumerate_instances",
    "naive_enumerate",
    "plans_for",
]


class EnumerationLimitError(ValueError):
    pass


@dataclass(frozen=True)
class MotifInstance:
    """Matched graph edges (by seq id) and their times, in motif edge order."""

    graph_edges: tuple[int, ...]
    times: tuple[int, ...]

    @property
    def duration(self) -> int:
        return self.times[-1] - self.times[0]


@lru_cache(maxsize=256)
def plans_for(motif: TemporalMotif, heuristics: bool = True) -> tuple[BacktrackPlan, ...]:
    """Backtracking plans, ``plans[j]`` seeding the search at motif edge j."""
    return tuple(BacktrackPlan(motif, o) for o in matching_orders(motif, heuristics))


def _check_delta(delta):
    if delta < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    return int(delta)


def _pos(g: TemporalGraph, e) -> int:
    if isinstance(e, TemporalEdge):
        pos = _seq_lookup(g, e.seq)
        if g.edge(pos) != e:
            raise KeyError(f"{e} is not an edge of this graph")
        return pos
    pos = int(e)
    if not 0 <= pos < g.m:
        raise IndexError(pos)
    return pos


def _seq_lookup(g: TemporalGraph, seq: int) -> int:
    perm = g.__dict__.get("_seq_perm")
    if perm is None:
        perm = np.argsort(g.seq, kind="stable")
        g.__dict__["_seq_perm"] = perm
    i = int(np.searchsorted(g.seq[perm], seq))
    if i >= g.m or g.seq[perm[i]] != seq:
        raise KeyError(f"no edge with seq {seq}")
    return int(perm[i])


def count_local(g: TemporalGraph, motif: TemporalMotif, delta: int, e, j: int,
                heuristics: bool = True) -> int:
    """Number of delta-instances in which edge ``e`` plays motif edge ``j``.

    ``e`` is a :class:`TemporalEdge` of ``g`` or a sorted position.
    """
    delta = _check_delta(delta)
    if not 0 <= j < motif.l:
        raise IndexError(f"motif edge index {j} out of range")
    pos = _pos(g, e)
    plan = plans_for(motif, heuristics)[j]
    return kernels.count_from_edge(g.index, plan, pos, delta, 0, g.m - 1)[0]


def local_counts(g: TemporalGraph, motif: TemporalMotif, delta: int, e) -> list[int]:
    """``[count_local(..., j) for j in range(l)]``."""
    delta = _check_delta(delta)
    pos = _pos(g, e)
    idx = g.index
    return [kernels.count_from_edge(idx, p, pos, delta, 0, g.m - 1)[0] for p in plans_for(motif)]


def count_local_last(g: TemporalGraph, motif: TemporalMotif, delta: int, e) -> int:
    """Instances in which ``e`` is the last motif edge, using only edges up to ``e``."""
    delta = _check_delta(delta)
    pos = _pos(g, e)
    plan = plans_for(motif)[motif.l - 1]
    return kernels.count_from_edge(g.index, plan, pos, delta, 0, pos)[0]


def exact_count(g: TemporalGraph, motif: TemporalMotif, delta: int, start: int | None = None,
                heuristics: bool = True, stats: dict | None = None) -> int:
    """Exact number of delta-instances of ``motif`` in ``g``.

    Each instance has exactly one edge in motif position ``start`` (default:
    the last edge), so summing that one local count over all edges counts
    every instance once.  ``stats``, if given, receives ``expansions``.
    """
    delta = _check_delta(delta)
    if g.m == 0:
        return 0
    start = motif.l - 1 if start is None else start
    plan = plans_for(motif, heuristics)[start]
    idx = g.index
    hi = g.m - 1
    total = 0
    expansions = 0
    fn = kernels.count_from_edge
    for pos in range(g.m):
        c, x = fn(idx, plan, pos, delta, 0, hi)
        total += c
        expansions += x
    if stats is not None:
        stats["expansions"] = expansions
    return total


def _instance(g: TemporalGraph, positions) -> MotifInstance:
    return MotifInstance(tuple(int(g.seq[p]) for p in positions), tuple(int(g.time[p]) for p in positions))


def enumerate_instances(g: TemporalGraph, motif: TemporalMotif, delta: int,
                        heuristics: bool = True) -> list[MotifInstance]:
    """Materialise every instance with the backtracking search (pure Python)."""
    delta = _check_delta(delta)
    found: list[tuple[int, ...]] = []
    plan = plans_for(motif, heuristics)[motif.l - 1]
    idx = g.index
    for pos in range(g.m):
        _kernels_py.count_from_edge(idx, plan, pos, delta, 0, g.m - 1, emit=found.append)
    return [_instance(g, t) for t in found]


def naive_enumerate(g: TemporalGraph, motif: TemporalMotif, delta: int, max_edges: int = 10_000,
                    max_l: int = 5, strict_times: bool = False) -> list[MotifInstance]:
    """Brute-force oracle: every increasing edge tuple within delta, filtered by bijection.

    Tuples are grown edge by edge along the time-sorted edge list and a
    tuple is dropped as soon as its vertex correspondence stops being
    one-to-one.  With ``strict_times`` consecutive edges must also have
    strictly increasing timestamps instead of relying on the (time, seq)
    tie-break.
    """
    delta = _check_delta(delta)
    if g.m > max_edges or motif.l > max_l:
        raise EnumerationLimitError(
            f"naive enumeration limited to m <= {max_edges} and l <= {max_l} (got m={g.m}, l={motif.l})")
    src = g.src.tolist()
    dst = g.dst.tolist()
    tim = g.time.tolist()
    medges = motif.edges
    l = motif.l
    m = g.m
    out: list[MotifInstance] = []
    chosen: list[int] = []

    def bind(fwd, back, a, b):
        # motif vertex a <-> graph vertex b
        fa = fwd.get(a)
        if fa is not None:
            return fa == b
        return b not in back

    def grow(i, start, fwd, back):
        if i == l:
            out.append(_instance(g, chosen))
            return
        ua, va = medges[i]
        t_first = tim[chosen[0]] if chosen else None
        for p in range(start, m):
            if t_first is not None and tim[p] - t_first > delta:
                break
            if strict_times and chosen and tim[p] <= tim[chosen[-1]]:
                continue
            w, x = src[p], dst[p]
            if not bind(fwd, back, ua, w):
                continue
            f2, b2 = dict(fwd), dict(back)
            f2[ua], b2[w] = w, ua
            if not bind(f2, b2, va, x):
                continue
            f2[va], b2[x] = x, va
            chosen.append(p)
            grow(i + 1, p + 1, f2, b2)
            chosen.pop()

    grow(0, 0, {}, {})
    return out
