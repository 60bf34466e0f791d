"""Edge sampling (ES) and edge-wedge sampling (EWS) estimators for offline graphs."""

from __future__ import annotations

import time as _time
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import kernels, rng
from ._plan import WedgePlan, wedge_plans
from .exact import plans_for
from .graph import TemporalGraph
from .motif import STAR33, TRIANGLE, TemporalMotif

__all__ = [
    "EstimatorConfig",
    "Estimate",
    "TemporalWedge",
    "UnsupportedMotifError",
    "sample_edges",
    "es_estimate",
    "ews_estimate",
    "ews_center",
    "local_wedge_estimate",
    "enumerate_wedges",
    "variance_bound",
    "probability_for_guarantee",
]


class UnsupportedMotifError(ValueError):
    pass


@dataclass(frozen=True)
class EstimatorConfig:
    delta: int
    p: float = 1.0
    q: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"p must be in (0, 1], got {self.p}")
        if not 0.0 < self.q <= 1.0:
            raise ValueError(f"q must be in (0, 1], got {self.q}")


@dataclass
class Estimate:
    value: float
    sampled_edges: int
    config: EstimatorConfig
    elapsed: float
    algorithm: str
    work: int = 0  # kernel expansions (ES) or candidate wedges (EWS)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["config"] = asdict(self.config)
        return d


class TemporalWedge(NamedTuple):
    """Two edges sharing ``center``; ``pattern`` gives the direction of the
    earlier and the later edge as seen from the center (``"out"``/``"in"``)."""

    center: int
    edge_a: int
    edge_b: int
    pattern: tuple[str, str]


def sample_edges(g: TemporalGraph, p: float, seed: int) -> np.ndarray:
    """Sorted positions of edges kept by independent coins of bias ``p``.

    Each coin is a hash of ``(seed, seq)``, so the sample does not depend
    on edge order.
    """
    if p >= 1.0:
        return np.arange(g.m)
    u = rng.uniform_array(rng.stream_key(seed, rng.TAG_EDGE), g.seq)
    return np.flatnonzero(u < p)


def es_estimate(g: TemporalGraph, motif: TemporalMotif, cfg: EstimatorConfig) -> Estimate:
    """Sum exact local counts of sampled edges over all l roles, scaled by 1/(p l)."""
    t0 = _time.perf_counter()
    sample = sample_edges(g, cfg.p, cfg.seed)
    plans = plans_for(motif)
    idx = g.index
    hi = g.m - 1
    delta = int(cfg.delta)
    fn = kernels.count_from_edge
    total = 0
    work = 0
    for pos in sample.tolist():
        for plan in plans:
            c, x = fn(idx, plan, pos, delta, 0, hi)
            total += c
            work += x
    value = total / (cfg.p * motif.l)
    return Estimate(value, len(sample), cfg, _time.perf_counter() - t0, "es", work)


@lru_cache(maxsize=64)
def _wedge_tables(motif: TemporalMotif):
    return tuple(wedge_plans(motif, j) for j in range(3))


def _require_wedge_motif(motif: TemporalMotif):
    if motif.kind.tag not in (STAR33, TRIANGLE):
        raise UnsupportedMotifError(
            f"EWS handles 3-vertex 3-edge stars and triangles only; motif is {motif.kind.tag}. Use ES instead.")


def ews_center(u: int, v: int, deg_u: int, deg_v: int) -> int:
    """0 to center a triangle wedge at the source ``u``, 1 at the target ``v``.

    Lower degree wins; ties go to the smaller vertex id.
    """
    if deg_u != deg_v:
        return 0 if deg_u < deg_v else 1
    return 0 if u < v else 1


def _pick_plan(tables, j, u, v, degree) -> WedgePlan:
    first, second = tables[j]
    if second is None:
        return first
    return (first, second)[ews_center(u, v, int(degree[u]), int(degree[v]))]


def local_wedge_estimate(g: TemporalGraph, motif: TemporalMotif, cfg: EstimatorConfig, pos: int,
                         j: int) -> float:
    """Wedge-sampled estimate of the count with edge ``pos`` in role ``j``."""
    _require_wedge_motif(motif)
    tables = _wedge_tables(motif)
    idx = g.index
    wp = _pick_plan(tables, j, idx.src[pos], idx.dst[pos], g.degree)
    key = rng.stream_key(cfg.seed, rng.TAG_WEDGE)
    closures, _ = kernels.wedge_sum(idx, wp, pos, int(cfg.delta), 0, g.m - 1, cfg.q, key)
    return closures / cfg.q


def ews_estimate(g: TemporalGraph, motif: TemporalMotif, cfg: EstimatorConfig) -> Estimate:
    """Edge sampling with wedge-sampled local counts, for (3,3)-stars and triangles."""
    _require_wedge_motif(motif)
    t0 = _time.perf_counter()
    sample = sample_edges(g, cfg.p, cfg.seed)
    tables = _wedge_tables(motif)
    idx = g.index
    degree = g.degree.tolist()
    src, dst = idx.src, idx.dst
    key = rng.stream_key(cfg.seed, rng.TAG_WEDGE)
    hi = g.m - 1
    delta = int(cfg.delta)
    q = cfg.q
    fn = kernels.wedge_sum
    total = 0
    work = 0
    for pos in sample.tolist():
        u, v = src[pos], dst[pos]
        for j in range(3):
            wp = _pick_plan(tables, j, u, v, degree)
            c, x = fn(idx, wp, pos, delta, 0, hi, q, key)
            total += c
            work += x
    value = (total / q) / (cfg.p * 3)
    return Estimate(value, len(sample), cfg, _time.perf_counter() - t0, "ews", work)


def enumerate_wedges(g: TemporalGraph, motif: TemporalMotif, delta: int, pos: int,
                     j: int) -> list[TemporalWedge]:
    """All wedges the EWS step would consider for edge ``pos`` in role ``j``.

    Straightforward scan of the center's edges; used to cross-check the
    kernels.
    """
    _require_wedge_motif(motif)
    wp = _pick_plan(_wedge_tables(motif), j, int(g.src[pos]), int(g.dst[pos]), g.degree)
    e = g.edge(pos)
    center = e.src if wp.center_end == 0 else e.dst
    found = []
    for o in range(g.m):
        if o == pos:
            continue
        s, d, t = int(g.src[o]), int(g.dst[o]), int(g.time[o])
        if (s if wp.x_out else d) != center:
            continue
        far = d if wp.x_out else s
        if far in (e.src, e.dst) or abs(t - e.time) > delta:
            continue
        if (o < pos) != wp.x_before:
            continue
        first, second = (o, pos) if o < pos else (pos, o)

        def way(p):
            return "out" if int(g.src[p]) == center else "in"

        found.append(TemporalWedge(center, int(g.seq[first]), int(g.seq[second]), (way(first), way(second))))
    return found


def variance_bound(kind: str, cfg: EstimatorConfig | None = None, C: float = 0.0, *,
                   p: float | None = None, q: float | None = None) -> float:
    """Upper bound on the estimator variance for true count ``C``.

    ES: ``(1 - p) / p * C**2``; EWS: ``(1 - p q) / (p q) * C**2``.
    """
    if C < 0:
        raise ValueError("count must be non-negative")
    p = cfg.p if p is None else p
    q = (cfg.q if cfg is not None else 1.0) if q is None else q
    if kind == "es":
        s = p
    elif kind == "ews":
        s = p * q
    else:
        raise ValueError(f"unknown estimator kind {kind!r}")
    if s <= 0:
        raise ValueError("sampling probability must be positive")
    return (1.0 - s) / s * C * C


def probability_for_guarantee(eps: float, gamma: float) -> float:
    """Sampling probability (p for ES, p*q for EWS) giving
    ``Pr[|C_hat - C| < eps C] > 1 - gamma`` by Chebyshev."""
    if not (0 < eps < 1 and 0 < gamma < 1):
        raise ValueError("eps and gamma must lie in (0, 1)")
    return 1.0 / (1.0 + gamma * eps * eps)
