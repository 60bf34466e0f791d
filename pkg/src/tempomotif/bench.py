"""Repeated-trial runs, relative-error reports, synthetic graphs and report comparison.

CSV reports have one row per trial with the fixed columns::

    algorithm,dataset,motif,delta,p,q,r,trial,seed,value,truth,relative_error,elapsed

``truth`` and ``relative_error`` are empty when no ground truth is known.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import kernels
from .exact import exact_count, naive_enumerate
from .graph import LoaderOptions, TemporalGraph, iter_edge_list, load_edge_list
from .motif import TemporalMotif, load_motif
from .offline import EstimatorConfig, es_estimate, ews_estimate
from .stream import StreamConfig, StreamState

__all__ = [
    "ALGORITHMS",
    "CSV_COLUMNS",
    "RunSpec",
    "EstimateReport",
    "ReportMismatchError",
    "run",
    "generate_synthetic",
    "synthetic_edges",
    "compare",
    "format_comparison",
    "relative_error",
]

ALGORITHMS = ("exact", "naive", "es", "ews", "ses", "sews")
STREAMING = ("ses", "sews")
CSV_COLUMNS = ("algorithm", "dataset", "motif", "delta", "p", "q", "r", "trial", "seed", "value",
               "truth", "relative_error", "elapsed")


class ReportMismatchError(ValueError):
    pass


def relative_error(estimate: float, truth: float) -> float:
    if truth == 0:
        return 0.0 if estimate == 0 else math.inf
    return abs(estimate - truth) / truth


@dataclass
class RunSpec:
    algorithm: str
    graph: str
    motif: str
    delta: int
    p: float = 1.0
    q: float = 1.0
    r: int | str | None = None  # int, or "<fraction>m" for a fraction of the edge count
    seed: int = 0
    trials: int = 10
    report_every: int = 1000
    output: str = "json"
    ground_truth: float | str | None = None  # a number, "auto", or None
    ground_truth_cap: int = 1_000_000
    self_loops: str = "reject"
    threads: int | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.delta is None or self.delta < 0:
            raise ValueError("delta is required and must be non-negative")
        if self.algorithm in STREAMING and self.r is None:
            raise ValueError(f"{self.algorithm} needs a reservoir size r")
        if self.output not in ("json", "csv"):
            raise ValueError("output must be json or csv")
        if isinstance(self.ground_truth, str) and self.ground_truth != "auto":
            self.ground_truth = float(self.ground_truth)


@dataclass
class EstimateReport:
    algorithm: str
    dataset: str
    motif: str
    delta: int
    params: dict
    seeds: list[int]
    values: list[float]
    elapsed: list[float]
    mean: float
    variance: float
    mean_elapsed: float
    stats: dict
    backend: str
    truth: float | None = None
    relative_errors: list[float] | None = None
    mean_relative_error: float | None = None
    trajectories: list[list[list[float]]] | None = None  # per trial: [m_t, estimate] rows

    @classmethod
    def build(cls, *, algorithm, dataset, motif, delta, params, seeds, values, elapsed, stats,
              truth=None, trajectories=None) -> "EstimateReport":
        arr = np.asarray(values, dtype=float)
        mean = float(arr.mean())
        var = float(arr.var(ddof=1)) if len(arr) > 1 else 0.0
        rel = mean_rel = None
        if truth is not None:
            rel = [relative_error(v, truth) for v in values]
            mean_rel = float(np.mean(rel))
        return cls(algorithm, dataset, motif, int(delta), params, list(seeds), [float(v) for v in values],
                   [float(t) for t in elapsed], mean, var, float(np.mean(elapsed)), stats, kernels.BACKEND,
                   None if truth is None else float(truth), rel, mean_rel, trajectories)

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["relative_errors"] is None:
            for k in ("truth", "relative_errors", "mean_relative_error"):
                d.pop(k)
        if d["trajectories"] is None:
            d.pop("trajectories")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "EstimateReport":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})

    @classmethod
    def from_json(cls, text: str) -> "EstimateReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for i, (seed, value, t) in enumerate(zip(self.seeds, self.values, self.elapsed)):
            rel = "" if self.relative_errors is None else repr(self.relative_errors[i])
            truth = "" if self.truth is None else repr(self.truth)
            w.writerow([self.algorithm, self.dataset, self.motif, self.delta, self.params.get("p", ""),
                        self.params.get("q", ""), self.params.get("r", ""), i, seed, repr(value), truth, rel,
                        repr(t)])
        return buf.getvalue()

    def render(self, fmt: str = "json") -> str:
        return self.to_json() + "\n" if fmt == "json" else self.to_csv()


def _threads(spec: RunSpec) -> int:
    if spec.threads is not None:
        return max(1, int(spec.threads))
    env = os.environ.get("TEMPOMOTIF_THREADS")
    return max(1, int(env)) if env else 1


def _resolve_r(r, m: int) -> int:
    if isinstance(r, str):
        s = r.strip().lower()
        if s.endswith("m"):
            return max(1, int(round(float(s[:-1]) * m)))
        return int(s)
    return int(r)


def _stream_stats(path, self_loops) -> dict:
    m = 0
    first = last = None
    for _, _, _, t in iter_edge_list(path, self_loops):
        m += 1
        first = t if first is None else first
        last = t
    return {"m": m, "time_span": 0 if first is None else last - first}


def run(spec: RunSpec) -> EstimateReport:
    """Run ``spec.trials`` repetitions with seeds ``seed, seed + 1, ...``."""
    motif = load_motif(spec.motif)
    streaming = spec.algorithm in STREAMING
    opts = LoaderOptions(self_loops=spec.self_loops)
    g: TemporalGraph | None = None
    if not streaming or spec.ground_truth == "auto":
        g = load_edge_list(spec.graph, opts)
    stats = g.stats() if g is not None else _stream_stats(spec.graph, spec.self_loops)
    m = stats["m"]

    truth = spec.ground_truth
    if truth == "auto":
        truth = float(exact_count(g, motif, spec.delta)) if m <= spec.ground_truth_cap else None
    elif truth is not None:
        truth = float(truth)

    deterministic = spec.algorithm in ("exact", "naive")
    trials = 1 if deterministic else spec.trials
    seeds = [spec.seed + i for i in range(trials)]
    params = {"p": spec.p, "q": spec.q, "seed": spec.seed, "trials": trials}
    r = None
    if streaming:
        r = _resolve_r(spec.r, m)
        params.update(r=r, report_every=spec.report_every)

    def one(seed):
        t0 = time.perf_counter()
        trail = None
        if spec.algorithm == "exact":
            value = float(exact_count(g, motif, spec.delta))
        elif spec.algorithm == "naive":
            value = float(len(naive_enumerate(g, motif, spec.delta)))
        elif spec.algorithm in ("es", "ews"):
            cfg = EstimatorConfig(spec.delta, spec.p, spec.q, seed)
            fn = es_estimate if spec.algorithm == "es" else ews_estimate
            value = fn(g, motif, cfg).value
        else:
            cfg = StreamConfig(spec.delta, r, spec.q, seed, spec.algorithm, self_loops=spec.self_loops)
            st = StreamState(motif, cfg)
            trail = []
            every = spec.report_every
            for _, u, v, t in iter_edge_list(spec.graph, spec.self_loops):
                est = st.push((u, v, t))
                if every and st.m_t % every == 0:
                    trail.append([st.m_t, est.value])
            value = st.estimate().value
            if every and (not trail or trail[-1][0] != st.m_t):
                trail.append([st.m_t, value])
        return value, time.perf_counter() - t0, trail

    workers = min(_threads(spec), trials)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, seeds))
    else:
        results = [one(s) for s in seeds]
    values = [v for v, _, _ in results]
    elapsed = [t for _, t, _ in results]
    trajectories = [tr for _, _, tr in results] if streaming else None
    return EstimateReport.build(algorithm=spec.algorithm, dataset=os.path.basename(str(spec.graph)),
                                motif=motif.to_text().strip().replace("\n", " / "), delta=spec.delta,
                                params=params, seeds=seeds, values=values, elapsed=elapsed, stats=stats,
                                truth=truth, trajectories=trajectories)


def synthetic_edges(n: int, m: int, span: int, model: str = "uniform", seed: int = 0,
                    zipf_s: float = 1.5) -> list[tuple[int, int, int]]:
    """Chronological synthetic edge list.

    ``uniform``: iid endpoints and times.  ``bursty``: timestamps drawn
    around Poisson-many burst centers.  ``skewed-pairs``: ordered vertex
    pairs drawn with Zipf weights ``rank**-zipf_s``.
    """
    if n < 2 or m < 1 or span < 0:
        raise ValueError("need n >= 2, m >= 1 and span >= 0")
    gen = np.random.Generator(np.random.PCG64(seed))
    if model == "skewed-pairs":
        total = n * (n - 1)
        pool = min(total, 100_000)
        codes = gen.choice(total, size=pool, replace=False) if total > pool else gen.permutation(total)
        w = np.arange(1, pool + 1, dtype=float) ** -zipf_s
        pick = codes[gen.choice(pool, size=m, p=w / w.sum())]
        u = pick // (n - 1)
        v = pick % (n - 1)
        v = v + (v >= u)
    else:
        u = gen.integers(0, n, size=m)
        v = gen.integers(0, n - 1, size=m)
        v = v + (v >= u)
    if model in ("uniform", "skewed-pairs"):
        t = gen.integers(0, span + 1, size=m)
    elif model == "bursty":
        bursts = max(1, int(gen.poisson(max(1.0, m / 50))))
        centers = gen.integers(0, span + 1, size=bursts)
        width = max(1.0, span / (bursts * 20))
        t = centers[gen.integers(0, bursts, size=m)] + gen.exponential(width, size=m).astype(np.int64)
        t = np.clip(t, 0, span)
    else:
        raise ValueError(f"unknown model {model!r}; choose uniform, bursty or skewed-pairs")
    order = np.argsort(t, kind="stable")
    return list(zip(u[order].tolist(), v[order].tolist(), t[order].tolist()))


def generate_synthetic(n: int, m: int, span: int, model: str = "uniform", seed: int = 0, path=None) -> str:
    """Write a synthetic edge list; returns the text (also written to ``path`` if given)."""
    text = "".join(f"{a} {b} {c}\n" for a, b, c in synthetic_edges(n, m, span, model, seed))
    if path is not None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    return text


def compare(a: EstimateReport, b: EstimateReport) -> list[dict]:
    """Join two reports on (dataset, motif, delta); speedup is how much faster ``b`` ran."""
    key_a = (a.dataset, a.motif, a.delta)
    key_b = (b.dataset, b.motif, b.delta)
    if key_a != key_b:
        raise ReportMismatchError(f"reports differ in (dataset, motif, delta): {key_a} vs {key_b}")
    speedup = a.mean_elapsed / b.mean_elapsed if b.mean_elapsed > 0 else math.inf
    return [{
        "dataset": a.dataset,
        "motif": a.motif,
        "delta": a.delta,
        "algorithm_a": a.algorithm,
        "algorithm_b": b.algorithm,
        "error_a": a.mean_relative_error,
        "error_b": b.mean_relative_error,
        "time_a": a.mean_elapsed,
        "time_b": b.mean_elapsed,
        "speedup": speedup,
    }]


def format_comparison(rows: list[dict]) -> str:
    def pct(x):
        return "-" if x is None else f"{100 * x:.2f}%"

    head = f"{'dataset':<16} {'delta':>8} {'A':>6} {'err A':>8} {'time A':>10} {'B':>6} {'err B':>8} {'time B':>10} {'speedup':>8}"
    lines = [head]
    for r in rows:
        lines.append(f"{r['dataset']:<16} {r['delta']:>8} {r['algorithm_a']:>6} {pct(r['error_a']):>8} "
                     f"{r['time_a']:>10.4f} {r['algorithm_b']:>6} {pct(r['error_b']):>8} {r['time_b']:>10.4f} "
                     f"{r['speedup']:>7.2f}x")
    return "\n".join(lines)
