"""Temporal motifs: parsing, shape classification and matching orders.

Motif text format::

    # optional comments
    <k> <l>
    <u> <v>        # l lines, in temporal order, vertex ids in 0..k-1

Lines may also be separated by ``/`` so a motif fits on one command line,
e.g. ``"3 3 / 0 1 / 1 2 / 2 0"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

__all__ = [
    "MotifError",
    "TemporalMotif",
    "MotifClass",
    "MatchingOrder",
    "parse_motif",
    "load_motif",
    "matching_orders",
    "classify",
    "bundled_motif",
    "BUNDLED",
]

STAR33 = "star33"
TRIANGLE = "triangle"
GENERIC = "generic"

BUNDLED = ("Q1", "Q2", "Q3", "Q4", "Q5")


class MotifError(ValueError):
    pass


@dataclass(frozen=True)
class MotifClass:
    tag: str
    center: int | None = None


@dataclass(frozen=True)
class MatchingOrder:
    start: int
    order: tuple[int, ...]


@dataclass(frozen=True)
class TemporalMotif:
    k: int
    edges: tuple[tuple[int, int], ...]
    name: str = field(default="", compare=False)
    kind: MotifClass = field(init=False, compare=False)

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        _validate(self.k, edges)
        object.__setattr__(self, "kind", _classify(self.k, edges))

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.edges)

    @property
    def src(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.edges)

    @property
    def dst(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.edges)

    def to_text(self) -> str:
        body = "".join(f"{a} {b}\n" for a, b in self.edges)
        return f"{self.k} {self.l}\n{body}"

    def __str__(self) -> str:
        label = f"{self.name} " if self.name else ""
        return label + " ".join(f"{a}->{b}" for a, b in self.edges)


def _validate(k, edges):
    if k < 1:
        raise MotifError("motif needs at least one vertex")
    if not edges:
        raise MotifError("motif needs at least one edge")
    for i, (a, b) in enumerate(edges):
        if not (0 <= a < k and 0 <= b < k):
            raise MotifError(f"edge {i} ({a}, {b}) uses a vertex outside 0..{k - 1}")
        if a == b:
            raise MotifError(f"edge {i} is a self-loop")
    used = {v for e in edges for v in e}
    if len(used) != k:
        missing = sorted(set(range(k)) - used)
        raise MotifError(f"vertices {missing} appear in no edge")
    # union-find over the undirected skeleton
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    if len({find(v) for v in range(k)}) != 1:
        raise MotifError("motif skeleton is not connected")


def _classify(k, edges):
    if k != 3 or len(edges) != 3:
        return MotifClass(GENERIC)
    pairs = {frozenset(e) for e in edges}
    if len(pairs) == 3:
        return MotifClass(TRIANGLE)
    for c in range(3):
        if all(c in e for e in edges):
            return MotifClass(STAR33, c)
    return MotifClass(GENERIC)  # pragma: no cover - unreachable for connected k=3, l=3


def classify(motif: TemporalMotif) -> MotifClass:
    return motif.kind


def parse_motif(text: str, name: str = "") -> TemporalMotif:
    rows = []
    for raw in text.replace("/", "\n").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise MotifError("empty motif specification")
    head = rows[0]
    try:
        if len(head) != 2:
            raise ValueError
        k, l = int(head[0]), int(head[1])
        edges = []
        for r in rows[1:]:
            if len(r) != 2:
                raise ValueError
            edges.append((int(r[0]), int(r[1])))
    except ValueError:
        raise MotifError("motif lines must be '<k> <l>' followed by '<u> <v>' pairs") from None
    if len(edges) != l:
        raise MotifError(f"header declares {l} edges but {len(edges)} were given")
    return TemporalMotif(k, tuple(edges), name=name)


_INLINE = re.compile(r"[\d\s/]+")


def load_motif(spec: str) -> TemporalMotif:
    """A bundled name (``Q1``..``Q5``), a file path, or inline motif text."""
    if spec.upper() in BUNDLED:
        return bundled_motif(spec.upper())
    try:
        with open(spec, encoding="ascii") as fh:
            text = fh.read()
    except (FileNotFoundError, IsADirectoryError, OSError):
        if _INLINE.fullmatch(spec):
            return parse_motif(spec)
        raise
    return parse_motif(text, name=spec)


def bundled_motif(name: str) -> TemporalMotif:
    """Query motifs Q1-Q5 (shape-class reconstructions, see README)."""
    name = name.upper()
    if name not in BUNDLED:
        raise KeyError(name)
    text = resources.files("tempomotif.motifs").joinpath(f"{name.lower()}.txt").read_text()
    return parse_motif(text, name=name)


def _touches(edges, i, verts):
    a, b = edges[i]
    return a in verts or b in verts


def _order_from(edges, start, heuristics):
    l = len(edges)
    order = [start]
    verts = set(edges[start])
    left = set(range(l)) - {start}
    while left:
        eligible = sorted(i for i in left if _touches(edges, i, verts))
        if not eligible:
            # disconnected motifs are rejected at parse time
            raise MotifError("no connected continuation")
        if heuristics:
            boundary = [i for i in (min(left), max(left)) if i in eligible]
            boundary = sorted(set(boundary))
            if len(boundary) == 2:
                last = set(edges[order[-1]])
                near = [i for i in boundary if _touches(edges, i, last)]
                pick = near[0] if len(near) == 1 else boundary[0]
            elif boundary:
                pick = boundary[0]
            else:
                pick = eligible[0]
        else:
            pick = eligible[0]
        order.append(pick)
        verts.update(edges[pick])
        left.discard(pick)
    return MatchingOrder(start, tuple(order))


def matching_orders(motif: TemporalMotif, heuristics: bool = True) -> list[MatchingOrder]:
    """One order per motif edge, order ``j`` starting at edge ``j``.

    Each later edge touches a vertex already covered. With ``heuristics``
    the earliest or latest unmatched edge is preferred when it qualifies;
    without, the smallest eligible index is taken.
    """
    return [_order_from(motif.edges, j, heuristics) for j in range(motif.l)]


def check_order(motif: TemporalMotif, order: Sequence[int]) -> list[str]:
    """Problems with ``order`` as a matching order (empty list if valid)."""
    problems = []
    edges = motif.edges
    if sorted(order) != list(range(motif.l)):
        return ["not a permutation of the motif edges"]
    verts = set(edges[order[0]])
    left = set(range(motif.l)) - {order[0]}
    for pos in range(1, len(order)):
        i = order[pos]
        if not _touches(edges, i, verts):
            problems.append(f"position {pos}: edge {i} is not adjacent to earlier edges")
        eligible = {x for x in left if _touches(edges, x, verts)}
        boundary = {min(left), max(left)} & eligible
        if boundary and i not in boundary:
            problems.append(f"position {pos}: boundary edge {sorted(boundary)} skipped for {i}")
        verts.update(edges[i])
        left.discard(i)
    return problems
