"""Single-pass streaming estimators SES and SEWS over a chronological edge stream.

A fixed-size reservoir of edges is kept with Algorithm R.  When an edge
enters the reservoir its local count (the edge playing the last motif
edge, matched against the active window ``[t - delta, t]``) is computed
once and stored; the running counter is the sum of stored counts.
"""

from __future__ import annotations

import warnings
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels, rng
from ._plan import wedge_plans
from .exact import plans_for
from .graph import EdgeIndex, TemporalEdge
from .motif import STAR33, TRIANGLE, TemporalMotif
from .offline import UnsupportedMotifError, ews_center

__all__ = [
    "StreamConfig",
    "StreamState",
    "StreamEstimate",
    "StreamOrderError",
    "stream_new",
    "stream_push",
    "stream_estimate",
    "stream_variance_bound",
    "run_stream",
]

COIN_BLOCK = 4096


class StreamOrderError(ValueError):
    pass


class StreamEstimate(NamedTuple):
    value: float
    m_t: int
    timestamp: int | None


@dataclass(frozen=True)
class StreamConfig:
    delta: int
    r: int
    q: float = 1.0
    seed: int = 0
    mode: str = "ses"
    lenient: bool = False  # drop out-of-order edges with a warning instead of raising
    self_loops: str = "reject"

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")
        if self.r < 1:
            raise ValueError(f"reservoir size r must be at least 1, got {self.r}")
        if not 0.0 < self.q <= 1.0:
            raise ValueError(f"q must be in (0, 1], got {self.q}")
        if self.mode not in ("ses", "sews"):
            raise ValueError(f"mode must be 'ses' or 'sews', got {self.mode!r}")
        if self.self_loops not in ("reject", "skip"):
            raise ValueError("self_loops must be 'reject' or 'skip'")


class StreamState:
    """Reservoir, active window and running counter of one stream.

    Single writer: one ``push`` at a time.
    """

    def __init__(self, motif: TemporalMotif, cfg: StreamConfig):
        if cfg.mode == "sews" and motif.kind.tag not in (STAR33, TRIANGLE):
            raise UnsupportedMotifError(
                f"SEWS handles 3-vertex 3-edge stars and triangles only; motif is {motif.kind.tag}")
        self.motif = motif
        self.cfg = cfg
        self.m_t = 0
        self.last_time: int | None = None
        self.dropped = 0
        # reservoir slots: stored integer local count and seq of the resident edge
        self.res_count: list[int] = []
        self.res_seq: list[int] = []
        self.counter = 0  # sum of res_count; SEWS divides by q on read
        self.window = EdgeIndex()
        self.wstart = 0  # oldest live ordinal; older entries linger until compaction
        self.peak_window = 0
        self.expansions = 0
        self.local_computations = 0
        self._plan = plans_for(motif)[motif.l - 1]
        self._wedge = wedge_plans(motif, 2) if cfg.mode == "sews" else None
        self._coin_key = rng.stream_key(cfg.seed, rng.TAG_RESERVOIR_COIN)
        self._coins: list[float] = []
        self._coin_base = 0
        self._slot_key = rng.stream_key(cfg.seed, rng.TAG_RESERVOIR_SLOT)
        self._wedge_key = rng.stream_key(cfg.seed, rng.TAG_WEDGE)

    @property
    def r(self) -> int:
        return self.cfg.r

    @property
    def window_size(self) -> int:
        return self.window.end - self.wstart

    def stored_words(self) -> int:
        """Entries held by window lists, adjacency and reservoir (memory proxy)."""
        w = self.window
        adj = sum(map(len, w.out.values())) + sum(map(len, w.inn.values())) + sum(map(len, w.pair.values()))
        return 4 * len(w.time) + adj + 2 * len(self.res_count)

    def counter_value(self) -> float:
        if self.cfg.mode == "sews":
            return self.counter / self.cfg.q
        return float(self.counter)

    def estimate(self) -> StreamEstimate:
        c = self.counter_value()
        value = c if self.m_t < self.cfg.r else (self.m_t / self.cfg.r) * c
        return StreamEstimate(value, self.m_t, self.last_time)

    def live_degree(self, v: int) -> int:
        w = self.window
        ws = self.wstart
        d = 0
        for lst in (w.out.get(v), w.inn.get(v)):
            if lst:
                d += len(lst) - bisect_left(lst, ws)
        return d

    def live_edges(self) -> list[tuple[int, int, int, int]]:
        """``(src, dst, time, seq)`` of the active window, oldest first."""
        w = self.window
        lo = self.wstart - w.base
        return list(zip(w.src[lo:], w.dst[lo:], w.time[lo:], w.seq[lo:]))

    def _evict_before(self, t_min: int) -> None:
        # Evicted edges stay in the lists (kernels never look below wstart)
        # until they make up half the storage; then the live part is rebuilt.
        w = self.window
        base = w.base
        self.wstart = bisect_left(w.time, t_min, self.wstart - base) + base
        dead = self.wstart - base
        if dead >= 32 and 2 * dead >= len(w.time):
            self._compact()

    def _compact(self) -> None:
        old = self.window
        lo = self.wstart - old.base
        w = EdgeIndex()
        w.base = self.wstart
        w.src, w.dst, w.time, w.seq = old.src[lo:], old.dst[lo:], old.time[lo:], old.seq[lo:]
        out, inn, pair = w.out, w.inn, w.pair
        for o, (u, v) in enumerate(zip(w.src, w.dst), self.wstart):
            out.setdefault(u, []).append(o)
            inn.setdefault(v, []).append(o)
            pair.setdefault((u, v), []).append(o)
        self.window = w

    def _local(self, o: int, u: int, v: int) -> int:
        w = self.window
        self.local_computations += 1
        if self._wedge is None:
            c, x = kernels.count_from_edge(w, self._plan, o, self.cfg.delta, self.wstart, o)
        else:
            first, second = self._wedge
            wp = first if second is None else (first, second)[
                ews_center(u, v, self.live_degree(u), self.live_degree(v))]
            c, x = kernels.wedge_sum(w, wp, o, self.cfg.delta, self.wstart, o, self.cfg.q, self._wedge_key)
        self.expansions += x
        return c

    def _coin(self, m_t: int) -> float:
        # rng.uniform(coin_key, m_t), computed in vectorised blocks
        k = m_t - self._coin_base
        if k >= len(self._coins):
            self._coin_base = m_t
            self._coins = rng.uniform_array(self._coin_key, np.arange(m_t, m_t + COIN_BLOCK)).tolist()
            k = 0
        return self._coins[k]

    def push(self, edge) -> StreamEstimate:
        """Feed one edge ``(src, dst, time[, seq])``; returns the current estimate."""
        if isinstance(edge, TemporalEdge):
            u, v, t, seq = edge
        else:
            u, v, t = edge[0], edge[1], edge[2]
            seq = edge[3] if len(edge) > 3 else self.m_t + self.dropped
        u, v, t, seq = int(u), int(v), int(t), int(seq)
        cfg = self.cfg
        if u == v:
            if cfg.self_loops == "skip":
                self.dropped += 1
                return self.estimate()
            raise StreamOrderError(f"self-loop on vertex {u}")
        if t < 0:
            raise StreamOrderError(f"negative timestamp {t}")
        if self.last_time is not None and t < self.last_time:
            if cfg.lenient:
                warnings.warn(f"dropping out-of-order edge at time {t} (stream is at {self.last_time})",
                              RuntimeWarning, stacklevel=2)
                self.dropped += 1
                return self.estimate()
            raise StreamOrderError(f"edge at time {t} arrived after time {self.last_time}")
        self.last_time = t
        self.m_t += 1
        m_t = self.m_t
        self._evict_before(t - cfg.delta)
        w = self.window
        o = w.base + len(w.time)
        w.src.append(u)
        w.dst.append(v)
        w.time.append(t)
        w.seq.append(seq)
        lst = w.out.get(u)
        if lst is None:
            w.out[u] = [o]
        else:
            lst.append(o)
        lst = w.inn.get(v)
        if lst is None:
            w.inn[v] = [o]
        else:
            lst.append(o)
        lst = w.pair.get((u, v))
        if lst is None:
            w.pair[(u, v)] = [o]
        else:
            lst.append(o)
        size = o + 1 - self.wstart
        if size > self.peak_window:
            self.peak_window = size

        r = cfg.r
        if m_t <= r:
            self.res_count.append(0)
            self.res_seq.append(seq)
            slot = m_t - 1
        elif self._coin(m_t) < r / m_t:
            slot = rng.below(self._slot_key, r, m_t)
            self.counter -= self.res_count[slot]
            self.res_seq[slot] = seq
        else:
            return StreamEstimate((m_t / r) * self.counter_value(), m_t, t)
        c = self._local(o, u, v)
        self.res_count[slot] = c
        self.counter += c
        return self.estimate()

    def verify(self) -> None:
        """Re-check the counter and window invariants (debugging aid)."""
        if self.counter != sum(self.res_count):
            raise AssertionError("reservoir counter drifted from stored local counts")
        if len(self.res_count) != min(self.m_t, self.cfg.r):
            raise AssertionError("reservoir size mismatch")
        if self.last_time is not None:
            for _, _, t, _ in self.live_edges():
                if t < self.last_time - self.cfg.delta:
                    raise AssertionError("stale edge in active window")


def stream_new(motif: TemporalMotif, cfg: StreamConfig) -> StreamState:
    return StreamState(motif, cfg)


def stream_push(st: StreamState, e) -> StreamEstimate:
    return st.push(e)


def stream_estimate(st: StreamState) -> StreamEstimate:
    return st.estimate()


def stream_variance_bound(kind: str, m_t: int, r: int, q: float = 1.0, C: float = 0.0) -> float:
    """Variance bound at time t: SES ``(m_t - r)/r C^2``, SEWS ``(m_t - r q)/(r q) C^2``.

    Clamped at zero (the SES estimate is exact while ``m_t <= r``).
    """
    if r < 1 or m_t < 0:
        raise ValueError("need r >= 1 and m_t >= 0")
    if kind == "ses":
        s = float(r)
    elif kind == "sews":
        if not 0 < q <= 1:
            raise ValueError("q must be in (0, 1]")
        s = r * q
    else:
        raise ValueError(f"unknown estimator kind {kind!r}")
    return max(0.0, (m_t - s) / s) * C * C


def run_stream(motif: TemporalMotif, cfg: StreamConfig, edges: Iterable,
               report_every: int = 0) -> tuple[StreamEstimate, list[StreamEstimate], StreamState]:
    """Push every edge; optionally record the estimate every ``report_every`` pushes."""
    st = StreamState(motif, cfg)
    trail: list[StreamEstimate] = []
    est = st.estimate()
    for e in edges:
        est = st.push(e)
        if report_every and st.m_t % report_every == 0 and (not trail or trail[-1].m_t != st.m_t):
            trail.append(est)
    return est, trail, st
