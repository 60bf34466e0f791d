"""Flatten motifs and matching orders into the per-depth tables the kernels read."""

from __future__ import annotations

from .motif import STAR33, TRIANGLE, MatchingOrder, MotifError, TemporalMotif


class BacktrackPlan:
    """Per-depth tables for one matching order.

    For depth ``d`` the motif edge ``order[d]`` has endpoints ``a[d] -> b[d]``;
    ``a_known``/``b_known`` tell whether earlier depths already fixed them.
    ``prev[d]``/``nxt[d]`` are the nearest sigma indices below/above
    ``order[d]`` among ``order[:d]`` (-1 if none): the strict ordinal bounds.
    """

    __slots__ = ("k", "l", "order", "a", "b", "a_known", "b_known", "prev", "nxt")

    def __init__(self, motif: TemporalMotif, order: MatchingOrder | tuple):
        seq = tuple(order.order if isinstance(order, MatchingOrder) else order)
        if sorted(seq) != list(range(motif.l)):
            raise MotifError("matching order is not a permutation of the motif edges")
        self.k = motif.k
        self.l = motif.l
        self.order = seq
        self.a, self.b, self.a_known, self.b_known, self.prev, self.nxt = [], [], [], [], [], []
        seen_v: set[int] = set()
        for d, i in enumerate(seq):
            u, v = motif.edges[i]
            self.a.append(u)
            self.b.append(v)
            self.a_known.append(u in seen_v)
            self.b_known.append(v in seen_v)
            before = seq[:d]
            self.prev.append(max((x for x in before if x < i), default=-1))
            self.nxt.append(min((x for x in before if x > i), default=-1))
            seen_v.update((u, v))


class WedgePlan:
    """How to grow edge ``e`` (mapped to motif edge ``j``) into a wedge and close it.

    ``center_end``: 0 if the wedge center is e's source, 1 if its target.
    ``x``: the partner motif edge; ``x_out`` is true when it leaves the center,
    ``x_before`` when it precedes ``j``.  ``ya``/``yb`` locate the closing
    edge's endpoints: 0 = src(e), 1 = dst(e), 2 = partner's far endpoint.
    ``y_lo``/``y_hi`` name the edge that bounds the closing edge's ordinal
    from below/above: 0 none, 1 = e, 2 = partner.
    """

    __slots__ = ("j", "x", "y", "center", "center_end", "x_out", "x_before", "ya", "yb", "y_lo", "y_hi")

    def __init__(self, motif: TemporalMotif, j: int, center: int, x: int):
        edges = motif.edges
        uj, vj = edges[j]
        if center not in (uj, vj):
            raise MotifError("wedge center must be an endpoint of the mapped edge")
        if center not in edges[x]:
            raise MotifError("wedge partner must touch the center")
        y = ({0, 1, 2} - {j, x}).pop()
        self.j, self.x, self.y, self.center = j, x, y, center
        self.center_end = 0 if center == uj else 1
        xa, xb = edges[x]
        self.x_out = xa == center
        far = xb if self.x_out else xa
        if far in (uj, vj):
            raise MotifError("wedge must span three motif vertices")
        self.x_before = x < j
        where = {uj: 0, vj: 1, far: 2}
        ya, yb = edges[y]
        self.ya, self.yb = where[ya], where[yb]
        lo = [(s, code) for s, code in ((j, 1), (x, 2)) if s < y]
        hi = [(s, code) for s, code in ((j, 1), (x, 2)) if s > y]
        self.y_lo = max(lo)[1] if lo else 0
        self.y_hi = min(hi)[1] if hi else 0


def wedge_plans(motif: TemporalMotif, j: int) -> tuple[WedgePlan, WedgePlan | None]:
    """Candidate wedge plans for ``e -> e'_j``.

    Stars give one plan (center of the star).  Triangles give two: centered
    at the motif vertex mapped from e's source, and from e's target; the
    caller picks by graph degree.
    """
    kind = motif.kind
    edges = motif.edges
    if kind.tag == STAR33:
        c = kind.center
        far_j = edges[j][1] if edges[j][0] == c else edges[j][0]
        for x in range(3):
            if x == j:
                continue
            far_x = edges[x][1] if edges[x][0] == c else edges[x][0]
            if far_x != far_j:
                return WedgePlan(motif, j, c, x), None
        raise MotifError("star motif has no three-vertex wedge")  # pragma: no cover
    if kind.tag == TRIANGLE:
        plans = []
        for c in edges[j]:
            x = next(i for i in range(3) if i != j and c in edges[i])
            plans.append(WedgePlan(motif, j, c, x))
        return plans[0], plans[1]
    raise MotifError(f"wedge sampling needs a (3,3)-star or triangle motif, got {kind.tag}")
