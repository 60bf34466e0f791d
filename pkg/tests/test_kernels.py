import os
import subprocess
import sys

import pytest

from conftest import CORPUS_MOTIFS, random_graph
from tempomotif import _kernels_py, kernels, load_motif, rng
from tempomotif._plan import wedge_plans
from tempomotif.exact import plans_for
from tempomotif.stream import StreamConfig, StreamState

BACKENDS = kernels.backends()
needs_ext = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")


def test_backend_selected():
    assert kernels.BACKEND in BACKENDS


def test_pure_python_switch():
    env = dict(os.environ, TEMPOMOTIF_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import tempomotif; print(tempomotif.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


@needs_ext
def test_count_parity():
    ext = BACKENDS["cython"]
    for seed in range(25):
        g = random_graph(seed)
        idx = g.index
        for motif in CORPUS_MOTIFS.values():
            for heur in (True, False):
                for plan in plans_for(motif, heur):
                    for pos in range(g.m):
                        for delta, hi in ((30, g.m - 1), (500, pos)):
                            a = _kernels_py.count_from_edge(idx, plan, pos, delta, 0, hi)
                            b = ext.count_from_edge(idx, plan, pos, delta, 0, hi)
                            assert a == b


@needs_ext
def test_wedge_parity_with_hashing():
    ext = BACKENDS["cython"]
    for seed in range(25):
        g = random_graph(seed, n=8)
        idx = g.index
        key = rng.stream_key(seed, rng.TAG_WEDGE)
        for name in ("Q1", "Q2", "Q3", "Q4"):
            motif = CORPUS_MOTIFS[name]
            for j in range(3):
                for wp in wedge_plans(motif, j):
                    if wp is None:
                        continue
                    for pos in range(g.m):
                        for q in (1.0, 0.5, 0.1):
                            a = _kernels_py.wedge_sum(idx, wp, pos, 40, 0, g.m - 1, q, key)
                            b = ext.wedge_sum(idx, wp, pos, 40, 0, g.m - 1, q, key)
                            assert a == b


@needs_ext
def test_parity_on_shifted_window():
    # the streaming window has base > 0 and stale entries below wstart
    ext = BACKENDS["cython"]
    g = random_graph(3, n=6, m=200, span=300)
    motif = load_motif("Q3")
    st = StreamState(motif, StreamConfig(20, 1000, 1.0, 0, "sews"))
    plan = plans_for(motif)[2]
    wp = wedge_plans(motif, 2)[0]
    key = rng.stream_key(0, rng.TAG_WEDGE)
    for e in g:
        st.push(e)
        w = st.window
        o = w.end - 1
        for q in (1.0, 0.5):
            assert (_kernels_py.wedge_sum(w, wp, o, 20, st.wstart, o, q, key)
                    == ext.wedge_sum(w, wp, o, 20, st.wstart, o, q, key))
        assert (_kernels_py.count_from_edge(w, plan, o, 20, st.wstart, o)
                == ext.count_from_edge(w, plan, o, 20, st.wstart, o))
    assert st.window.base > 0
