import random

import pytest

from tempomotif import TemporalGraph, load_motif, parse_motif

# six motifs with l <= 4: two stars, two triangles, a 4-cycle and a 4-vertex star
CORPUS_MOTIFS = {
    "Q1": load_motif("Q1"),
    "Q2": load_motif("Q2"),
    "Q3": load_motif("Q3"),
    "Q4": load_motif("Q4"),
    "Q5": load_motif("Q5"),
    "fan4": parse_motif("4 4 / 0 1 / 0 2 / 3 0 / 0 1", name="fan4"),
}


def random_edges(rnd, n, m, span):
    edges = []
    for _ in range(m):
        u = rnd.randrange(n)
        v = rnd.randrange(n - 1)
        v += v >= u
        edges.append((u, v, rnd.randint(0, span)))
    return edges


def random_graph(seed, n=None, m=None, span=None):
    rnd = random.Random(seed)
    n = n or rnd.randint(3, 30)
    m = m or rnd.randint(1, 200)
    span = span or rnd.choice([20, 100, 1000])
    return TemporalGraph.from_edges(random_edges(rnd, n, m, span))


def corpus(count=200):
    """Deterministic random graphs with m <= 200, n <= 30 and three deltas each."""
    out = []
    for i in range(count):
        rnd = random.Random(1000 + i)
        n = rnd.randint(3, 30)
        m = rnd.randint(1, 200)
        span = rnd.choice([50, 200, 1000])
        g = TemporalGraph.from_edges(random_edges(rnd, n, m, span))
        deltas = (max(1, span // 50), span // 5, 10 * span)  # small, medium, unbounded in practice
        out.append((g, deltas))
    return out


@pytest.fixture(scope="session")
def a1_corpus():
    return corpus()


@pytest.fixture
def chain_graph():
    return TemporalGraph.from_edges([(0, 1, 5), (1, 2, 7)])


# acceptance criteria outcomes, printed once at the end of the run
ACCEPTANCE: dict[str, str] = {}


def record(criterion, ok, detail):
    line = f"{criterion} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])
