"""Acceptance criteria A1-A9, one test each; outcomes are summarised at the end of the run."""

import gzip
import math
import os
import shutil
import time
import urllib.request
from collections import Counter

import numpy as np
import pytest

from conftest import ACCEPTANCE, CORPUS_MOTIFS, record
from tempomotif import TemporalGraph, exact_count, naive_enumerate, parse_motif
from tempomotif.bench import synthetic_edges
from tempomotif.graph import LoaderOptions, load_edge_list
from tempomotif.motif import STAR33, TRIANGLE
from tempomotif.offline import EstimatorConfig, es_estimate, ews_estimate, variance_bound
from tempomotif.stream import StreamConfig, StreamState, stream_variance_bound

TRIALS = 1000
P, Q = 0.1, 0.5


def test_a1_exact_matches_oracle(a1_corpus):
    t0 = time.perf_counter()
    cases = mismatches = instances = 0
    for g, deltas in a1_corpus:
        for motif in CORPUS_MOTIFS.values():
            for delta in deltas:
                c = exact_count(g, motif, delta)
                mismatches += c != len(naive_enumerate(g, motif, delta))
                cases += 1
                instances += c
    took = time.perf_counter() - t0
    ok = mismatches == 0 and took < 60
    record("A1", ok, f"{cases} cases, {instances} instances, {mismatches} mismatches, {took:.1f}s (limit 60s)")
    assert ok


def test_a2_degenerate_sampling_is_exact(a1_corpus):
    bad = []
    checked = 0
    for i, (g, deltas) in enumerate(a1_corpus):
        for name, motif in CORPUS_MOTIFS.items():
            for delta in deltas:
                c = exact_count(g, motif, delta)
                got = {"es": es_estimate(g, motif, EstimatorConfig(delta, 1.0, 1.0, i)).value}
                if motif.kind.tag in (STAR33, TRIANGLE):
                    got["ews"] = ews_estimate(g, motif, EstimatorConfig(delta, 1.0, 1.0, i)).value
                st = StreamState(motif, StreamConfig(delta, max(1, g.m), 1.0, i))
                for e in g:
                    st.push(e)
                got["ses"] = st.estimate().value
                checked += len(got)
                bad += [(i, name, delta, k) for k, v in got.items() if v != c]
    record("A2", not bad, f"{checked} degenerate runs, {len(bad)} differ from the exact count")
    assert not bad


def _a3_graph():
    return TemporalGraph.from_edges(synthetic_edges(40, 2000, 20_000, "uniform", seed=11))


A3_DELTA = 1000
_A3_CACHE = {}


def _stream_values(g, motif, mode, r, q):
    edges = list(g)
    out = []
    for seed in range(TRIALS):
        st = StreamState(motif, StreamConfig(A3_DELTA, r, q, seed, mode))
        for e in edges:
            st.push(e)
        out.append(st.estimate().value)
    return np.array(out)


def a3_runs():
    """Trial values for every estimator on the fixed graph, for a star and a triangle motif."""
    if _A3_CACHE:
        return _A3_CACHE
    g = _a3_graph()
    r = g.m // 10
    t0 = time.perf_counter()
    for name in ("Q1", "Q3"):
        motif = CORPUS_MOTIFS[name]
        c = exact_count(g, motif, A3_DELTA)
        runs = {
            "ES": (np.array([es_estimate(g, motif, EstimatorConfig(A3_DELTA, P, 1.0, s)).value
                             for s in range(TRIALS)]), variance_bound("es", C=c, p=P)),
            "EWS": (np.array([ews_estimate(g, motif, EstimatorConfig(A3_DELTA, P, Q, s)).value
                              for s in range(TRIALS)]), variance_bound("ews", C=c, p=P, q=Q)),
            "SES": (_stream_values(g, motif, "ses", r, 1.0), stream_variance_bound("ses", g.m, r, 1.0, c)),
            "SEWS": (_stream_values(g, motif, "sews", r, Q), stream_variance_bound("sews", g.m, r, Q, c)),
        }
        _A3_CACHE[name] = (c, runs)
    _A3_CACHE["elapsed"] = time.perf_counter() - t0
    return _A3_CACHE


def test_a3_unbiased():
    runs = a3_runs()
    ok = runs["elapsed"] < 300
    parts = []
    for name in ("Q1", "Q3"):
        c, per = runs[name]
        ok &= c >= 50
        for est, (vals, _) in per.items():
            se = vals.std(ddof=1) / math.sqrt(len(vals))
            good = abs(vals.mean() - c) <= 3 * se
            ok &= good
            parts.append(f"{name}/{est} mean {vals.mean():.1f} vs {c} ({abs(vals.mean() - c) / se:.2f} se)")
    record("A3", ok, "; ".join(parts) + f"; {runs['elapsed']:.0f}s (limit 300s)")
    assert ok


def test_a4_variance_within_bounds():
    runs = a3_runs()
    ok = True
    parts = []
    for name in ("Q1", "Q3"):
        _, per = runs[name]
        for est, (vals, bound) in per.items():
            v = vals.var(ddof=1)
            ok &= v <= 1.1 * bound
            parts.append(f"{name}/{est} {v:.0f} <= {1.1 * bound:.0f}")
    record("A4", ok, "; ".join(parts))
    assert ok


def test_a5_chebyshev_coverage():
    runs = a3_runs()
    eps = 0.5
    limit = (1 - P) / (P * eps * eps) + 0.05
    ok = True
    parts = []
    for name in ("Q1", "Q3"):
        c, per = runs[name]
        vals = per["ES"][0]
        frac = float(np.mean(np.abs(vals - c) >= eps * c))
        ok &= frac <= limit
        parts.append(f"{name} {frac:.3f} <= {limit:.2f}")
    record("A5", ok, "fraction of ES trials off by >= 50%: " + "; ".join(parts))
    assert ok


def test_a6_order_invariance(a1_corpus):
    differ = 0
    cases = 0
    for g, deltas in a1_corpus:
        for motif in CORPUS_MOTIFS.values():
            for delta in deltas:
                counts = {exact_count(g, motif, delta, start=j, heuristics=h)
                          for j in range(motif.l) for h in (True, False)}
                differ += len(counts) != 1
                cases += 1
    record("A6", differ == 0, f"{cases} cases x all start edges x heuristics on/off, {differ} disagree")
    assert differ == 0


def test_a7_streaming_beats_recomputation():
    m = 100_000
    edges = synthetic_edges(300, m, 1_000_000, "uniform", seed=5)
    motif = CORPUS_MOTIFS["Q3"]
    delta = 3600
    src = np.array([e[0] for e in edges])
    dst = np.array([e[1] for e in edges])
    tim = np.array([e[2] for e in edges])

    t0 = time.perf_counter()
    st = StreamState(motif, StreamConfig(delta, m // 100, 1.0, 0))
    for e in edges:
        st.push(e)
    ses = time.perf_counter() - t0

    t0 = time.perf_counter()
    for k in range(1000, m + 1, 1000):
        g = TemporalGraph(src[:k], dst[:k], tim[:k])
        es_estimate(g, motif, EstimatorConfig(delta, 0.01, 1.0, k))
    es = time.perf_counter() - t0
    ratio = es / ses
    ok = ratio >= 10 and ses + es < 600
    record("A7", ok, f"SES {ses:.2f}s vs ES rerun every 1000 edges {es:.2f}s: {ratio:.1f}x (need >= 10x)")
    assert ok


def test_a8_reservoir_uniformity():
    from scipy.stats import chisquare

    single = parse_motif("2 1 / 0 1")
    edges = [(i % 7, 7 + i % 5, i) for i in range(100)]
    r, trials = 10, 20_000
    hits = Counter()
    for seed in range(trials):
        st = StreamState(single, StreamConfig(5, r, 1.0, seed))
        for e in edges:
            st.push(e)
        hits.update(st.res_seq)
    observed = np.array([hits[i] for i in range(100)])
    stat, pvalue = chisquare(observed, np.full(100, trials * r / 100))
    ok = pvalue >= 0.01
    record("A8", ok, f"chi2 = {stat:.1f} on 99 dof, p = {pvalue:.3f} (need >= 0.01)")
    assert ok


SNAP_URL = "https://snap.stanford.edu/data/sx-askubuntu.txt.gz"


def _askubuntu(tmp_dir):
    local = os.environ.get("TEMPOMOTIF_ASKUBUNTU")
    if local and os.path.exists(local):
        return local
    gz = os.path.join(tmp_dir, "sx-askubuntu.txt.gz")
    try:
        with urllib.request.urlopen(SNAP_URL, timeout=20) as resp, open(gz, "wb") as fh:
            shutil.copyfileobj(resp, fh)
    except OSError:
        return None
    path = gz[:-3]
    with gzip.open(gz, "rb") as fin, open(path, "wb") as fout:
        shutil.copyfileobj(fin, fout)
    return path


@pytest.mark.network
@pytest.mark.slow
def test_a9_askubuntu(tmp_path):
    path = _askubuntu(str(tmp_path))
    if path is None:
        ACCEPTANCE["A9"] = "A9 SKIP: dataset not reachable (set TEMPOMOTIF_ASKUBUNTU to a local copy)"
        pytest.skip("AskUbuntu dataset not reachable")
    t0 = time.perf_counter()
    g = load_edge_list(path, LoaderOptions(self_loops="skip"))
    motif = CORPUS_MOTIFS["Q1"]
    delta = 86_400
    c = exact_count(g, motif, delta)
    errs = [abs(es_estimate(g, motif, EstimatorConfig(delta, 0.01, 1.0, s)).value - c) / c for s in range(10)]
    took = time.perf_counter() - t0
    ok = float(np.mean(errs)) <= 0.10 and took < 900
    record("A9", ok, f"n={g.n} m={g.m}, exact {c}, mean relative error {np.mean(errs):.2%}, {took:.0f}s")
    assert ok
