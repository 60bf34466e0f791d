"""Temporal graph storage, time windows and SNAP-style edge-list I/O."""

from __future__ import annotations

import io
import os
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

import numpy as np

__all__ = [
    "TemporalEdge",
    "TemporalGraph",
    "TimeWindowView",
    "EdgeIndex",
    "LoaderOptions",
    "EdgeListError",
    "InvalidRangeError",
    "load_edge_list",
    "iter_edge_list",
    "write_edge_list",
    "window",
    "count_pair_edges_in_range",
]


class EdgeListError(ValueError):
    """Bad input data. ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class InvalidRangeError(ValueError):
    pass


class TemporalEdge(NamedTuple):
    src: int
    dst: int
    time: int
    seq: int


@dataclass(frozen=True)
class LoaderOptions:
    """``self_loops`` is ``"reject"`` (raise) or ``"skip"`` (drop silently)."""

    self_loops: str = "reject"
    remap: bool = True

    def __post_init__(self):
        if self.self_loops not in ("reject", "skip"):
            raise ValueError(f"self_loops must be 'reject' or 'skip', got {self.self_loops!r}")


class EdgeIndex:
    """Adjacency consumed by the counting kernels.

    Edges are addressed by an ordinal that increases with (time, seq).
    ``src[o - base]`` etc. give edge attributes; ``out[v]``, ``inn[v]`` and
    ``pair[(u, v)]`` are ascending lists of ordinals.  Offline graphs use
    ``base == 0`` and ordinal == sorted position; the streaming window
    advances ``base`` as it forgets old edges.
    """

    __slots__ = ("base", "src", "dst", "time", "seq", "out", "inn", "pair")

    def __init__(self):
        self.base = 0
        self.src: list[int] = []
        self.dst: list[int] = []
        self.time: list[int] = []
        self.seq: list[int] = []
        self.out: dict[int, list[int]] = {}
        self.inn: dict[int, list[int]] = {}
        self.pair: dict[tuple[int, int], list[int]] = {}

    @property
    def end(self) -> int:
        """One past the newest ordinal."""
        return self.base + len(self.time)

    def ord_range(self, lo: int, hi: int) -> tuple[int, int]:
        """Ordinals ``[a, b)`` of edges with ``lo <= time <= hi``."""
        t = self.time
        return (self.base + bisect_left(t, lo), self.base + bisect_right(t, hi))

    def degree(self, v: int) -> int:
        return len(self.out.get(v, ())) + len(self.inn.get(v, ()))


class TemporalGraph:
    """Immutable time-sorted directed multigraph.

    Vertices are dense ints ``0..n-1``; ``vertex_ids[v]`` recovers the id
    used in the source file.  Edges are kept sorted by ``(time, seq)``;
    position in that order is the edge's ordinal for the kernels.
    """

    def __init__(self, src, dst, time, seq=None, n=None, vertex_ids=None):
        src = np.asarray(src, dtype=np.int64).reshape(-1)
        dst = np.asarray(dst, dtype=np.int64).reshape(-1)
        time = np.asarray(time, dtype=np.int64).reshape(-1)
        if not (len(src) == len(dst) == len(time)):
            raise ValueError("src, dst and time must have equal length")
        if seq is None:
            seq = np.arange(len(src), dtype=np.int64)
        seq = np.asarray(seq, dtype=np.int64).reshape(-1)
        if len(seq) != len(src):
            raise ValueError("seq length mismatch")
        if len(np.unique(seq)) != len(seq):
            raise ValueError("seq values must be unique")
        if len(src):
            if (src < 0).any() or (dst < 0).any():
                raise ValueError("vertex ids must be non-negative")
            if (time < 0).any():
                raise ValueError("timestamps must be non-negative")
            if (src == dst).any():
                raise ValueError("self-loops are not allowed")
        order = np.lexsort((seq, time))
        self.src = src[order]
        self.dst = dst[order]
        self.time = time[order]
        self.seq = seq[order]
        for a in (self.src, self.dst, self.time, self.seq):
            a.setflags(write=False)
        top = int(max(self.src.max(), self.dst.max())) + 1 if len(src) else 0
        self.n = top if n is None else int(n)
        if self.n < top:
            raise ValueError("n smaller than largest vertex id")
        self.m = len(self.src)
        if vertex_ids is None:
            vertex_ids = np.arange(self.n, dtype=np.int64)
        self.vertex_ids = np.asarray(vertex_ids, dtype=np.int64)

    @classmethod
    def from_edges(cls, edges: Iterable, n=None) -> "TemporalGraph":
        """Build from ``(src, dst, time)`` triples; seq is iteration order."""
        rows = [tuple(e)[:3] for e in edges]
        if not rows:
            return cls([], [], [], n=n)
        a = np.array(rows, dtype=np.int64)
        return cls(a[:, 0], a[:, 1], a[:, 2], n=n)

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"TemporalGraph(n={self.n}, m={self.m})"

    def edge(self, pos: int) -> TemporalEdge:
        return TemporalEdge(int(self.src[pos]), int(self.dst[pos]), int(self.time[pos]), int(self.seq[pos]))

    def __iter__(self) -> Iterator[TemporalEdge]:
        for row in zip(self.src.tolist(), self.dst.tolist(), self.time.tolist(), self.seq.tolist()):
            yield TemporalEdge(*row)

    @property
    def edges(self) -> list[TemporalEdge]:
        return list(self)

    def position_of(self, seq: int) -> int:
        """Sorted position of the edge with ingestion index ``seq``."""
        hits = np.flatnonzero(self.seq == seq)
        if not len(hits):
            raise KeyError(seq)
        return int(hits[0])

    @cached_property
    def index(self) -> EdgeIndex:
        idx = EdgeIndex()
        idx.src = self.src.tolist()
        idx.dst = self.dst.tolist()
        idx.time = self.time.tolist()
        idx.seq = self.seq.tolist()
        out, inn, pair = idx.out, idx.inn, idx.pair
        for o, (s, d) in enumerate(zip(idx.src, idx.dst)):
            lst = out.get(s)
            if lst is None:
                out[s] = [o]
            else:
                lst.append(o)
            lst = inn.get(d)
            if lst is None:
                inn[d] = [o]
            else:
                lst.append(o)
            lst = pair.get((s, d))
            if lst is None:
                pair[(s, d)] = [o]
            else:
                lst.append(o)
        return idx

    @cached_property
    def degree(self) -> np.ndarray:
        """Total temporal degree (in + out edge count) per vertex."""
        return np.bincount(self.src, minlength=self.n) + np.bincount(self.dst, minlength=self.n)

    @cached_property
    def pair_index(self) -> dict[tuple[int, int], np.ndarray]:
        """Ordered pair ``(u, v)`` -> sorted timestamps of all edges u->v."""
        return {k: self.time[v] for k, v in self.index.pair.items()}

    def out_adj(self, v: int) -> list[tuple[int, int, int]]:
        """``(neighbor, time, seq)`` for edges leaving ``v``, time-sorted."""
        idx = self.index
        return [(idx.dst[o], idx.time[o], idx.seq[o]) for o in idx.out.get(v, ())]

    def in_adj(self, v: int) -> list[tuple[int, int, int]]:
        idx = self.index
        return [(idx.src[o], idx.time[o], idx.seq[o]) for o in idx.inn.get(v, ())]

    @property
    def time_span(self) -> int:
        return int(self.time[-1] - self.time[0]) if self.m else 0

    @cached_property
    def static_edges(self) -> int:
        """Number of distinct ordered pairs (reported as a statistic only)."""
        return len(self.index.pair)

    def stats(self) -> dict:
        return {"n": self.n, "m": self.m, "static_edges": self.static_edges, "time_span": self.time_span}

    def window(self, lo: int, hi: int) -> "TimeWindowView":
        return window(self, lo, hi)

    def prefix(self, count: int) -> "TemporalGraph":
        """Subgraph of the first ``count`` edges in (time, seq) order."""
        return TemporalGraph(self.src[:count], self.dst[:count], self.time[:count], self.seq[:count],
                             n=self.n, vertex_ids=self.vertex_ids)


class TimeWindowView:
    """Edges with ``lo <= time <= hi`` (inclusive), in (time, seq) order."""

    def __init__(self, graph: TemporalGraph, lo: int, hi: int):
        if lo > hi:
            raise InvalidRangeError(f"window lower bound {lo} exceeds upper bound {hi}")
        self.graph = graph
        self.lo = lo
        self.hi = hi
        self.start = int(np.searchsorted(graph.time, lo, side="left"))
        self.stop = int(np.searchsorted(graph.time, hi, side="right"))

    def __len__(self) -> int:
        return max(0, self.stop - self.start)

    def __iter__(self) -> Iterator[TemporalEdge]:
        g = self.graph
        for pos in range(self.start, self.stop):
            yield g.edge(pos)

    def positions(self) -> range:
        return range(self.start, self.stop)


def window(g: TemporalGraph, lo: int, hi: int) -> TimeWindowView:
    return TimeWindowView(g, lo, hi)


def count_pair_edges_in_range(g: TemporalGraph, u: int, v: int, lo: int, hi: int,
                              open_lo: bool = False, open_hi: bool = False) -> int:
    """Number of edges u->v with time in the interval from lo to hi.

    A hash lookup and two binary searches; an absent pair counts 0.
    """
    times = g.pair_index.get((u, v))
    if times is None:
        return 0
    a = np.searchsorted(times, lo, side="right" if open_lo else "left")
    b = np.searchsorted(times, hi, side="left" if open_hi else "right")
    return max(0, int(b - a))


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="ascii", errors="strict"), True
    if isinstance(source, io.TextIOBase) or hasattr(source, "readline"):
        return source, False
    raise TypeError(f"cannot read edges from {type(source).__name__}")


def iter_edge_list(source, self_loops: str = "reject") -> Iterator[tuple[int, int, int, int]]:
    """Yield ``(lineno, src, dst, time)`` with raw ids, one file line at a time.

    Comment lines start with ``#`` or ``%``; blank lines are skipped.
    Extra columns beyond the third are ignored.
    """
    fh, owned = _open_text(source)
    try:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s[0] in "#%":
                continue
            parts = s.split()
            if len(parts) < 3:
                raise EdgeListError(f"expected 'src dst time', got {s!r}", lineno)
            try:
                u, v, t = int(parts[0]), int(parts[1]), int(parts[2])
            except ValueError:
                raise EdgeListError(f"non-integer field in {s!r}", lineno) from None
            if u < 0 or v < 0:
                raise EdgeListError("negative vertex id", lineno)
            if t < 0:
                raise EdgeListError(f"negative timestamp {t}", lineno)
            if u == v:
                if self_loops == "skip":
                    continue
                raise EdgeListError(f"self-loop on vertex {u}", lineno)
            yield lineno, u, v, t
    finally:
        if owned:
            fh.close()


def load_edge_list(path, options: LoaderOptions | None = None) -> TemporalGraph:
    """Read a whitespace-separated ``src dst time`` file into a graph.

    Out-of-order lines are fine: edges are sorted after reading and ties
    keep file order.
    """
    options = options or LoaderOptions()
    src: list[int] = []
    dst: list[int] = []
    tim: list[int] = []
    ids: dict[int, int] = {}
    for _, u, v, t in iter_edge_list(path, options.self_loops):
        if options.remap:
            u = ids.setdefault(u, len(ids))
            v = ids.setdefault(v, len(ids))
        src.append(u)
        dst.append(v)
        tim.append(t)
    if options.remap:
        vertex_ids = np.fromiter(ids.keys(), dtype=np.int64, count=len(ids))
        return TemporalGraph(src, dst, tim, n=len(ids), vertex_ids=vertex_ids)
    return TemporalGraph(src, dst, tim)


def write_edge_list(g: TemporalGraph, path, original_ids: bool = True) -> None:
    """Write edges in ingestion (seq) order so a reload reproduces seq."""
    order = np.argsort(g.seq, kind="stable")
    s, d = g.src[order], g.dst[order]
    if original_ids:
        s, d = g.vertex_ids[s], g.vertex_ids[d]
    t = g.time[order]
    lines = "".join(f"{a} {b} {c}\n" for a, b, c in zip(s.tolist(), d.tolist(), t.tolist()))
    if isinstance(path, (str, os.PathLike)):
        with open(path, "w", encoding="ascii") as fh:
            fh.write(lines)
    else:
        path.write(lines)
