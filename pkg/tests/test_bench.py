import csv
import io
import json
import subprocess
import sys
from collections import Counter

import pytest

from tempomotif.bench import (
    CSV_COLUMNS,
    EstimateReport,
    ReportMismatchError,
    RunSpec,
    compare,
    format_comparison,
    generate_synthetic,
    run,
    synthetic_edges,
)


@pytest.fixture
def toy(tmp_path):
    p = tmp_path / "toy.txt"
    p.write_text("0 1 5\n1 2 7\n2 3 9\n")
    return str(p)


@pytest.fixture
def synth(tmp_path):
    p = tmp_path / "synth.txt"
    generate_synthetic(30, 3000, 30_000, "uniform", seed=1, path=p)
    return str(p)


def test_exact_single_value(toy):
    rep = run(RunSpec("exact", toy, "3 2 / 0 1 / 1 2", 10))
    assert rep.values == [2.0] and rep.variance == 0.0
    assert rep.stats == {"n": 4, "m": 3, "static_edges": 3, "time_span": 4}
    assert rep.relative_errors is None and "relative_errors" not in rep.to_dict()


def test_es_full_sampling_trials(toy):
    rep = run(RunSpec("es", toy, "3 2 / 0 1 / 1 2", 10, p=1.0, trials=3, ground_truth="auto"))
    assert rep.values == [2.0, 2.0, 2.0] and rep.seeds == [0, 1, 2]
    assert rep.relative_errors == [0.0, 0.0, 0.0]


def test_mean_relative_error_reported(synth):
    truth = run(RunSpec("exact", synth, "Q1", 2000)).values[0]
    rep = run(RunSpec("es", synth, "Q1", 2000, p=0.1, trials=10, ground_truth=truth))
    assert rep.mean == pytest.approx(sum(rep.values) / 10)
    assert rep.mean_relative_error == pytest.approx(sum(abs(v - truth) / truth for v in rep.values) / 10)
    assert len(rep.elapsed) == 10


def test_ground_truth_cap(synth):
    rep = run(RunSpec("es", synth, "Q1", 2000, p=0.5, trials=2, ground_truth="auto", ground_truth_cap=100))
    assert rep.truth is None and rep.relative_errors is None


def test_streaming_trajectory(synth):
    rep = run(RunSpec("ses", synth, "Q3", 2000, r="0.1m", trials=2, report_every=1000))
    assert rep.params["r"] == 300
    assert [row[0] for row in rep.trajectories[0]] == [1000, 2000, 3000]
    assert rep.trajectories[0][-1][1] == rep.values[0]
    assert rep.stats == {"m": 3000, "time_span": rep.stats["time_span"]}


def test_streaming_full_reservoir_matches_exact(synth):
    truth = run(RunSpec("exact", synth, "Q3", 2000)).values[0]
    rep = run(RunSpec("sews", synth, "Q3", 2000, r=3000, trials=1))
    assert rep.values == [truth]


def test_spec_validation(toy):
    with pytest.raises(ValueError):
        RunSpec("nope", toy, "Q1", 1)
    with pytest.raises(ValueError):
        RunSpec("es", toy, "Q1", 1, trials=0)
    with pytest.raises(ValueError):
        RunSpec("ses", toy, "Q1", 1)


def test_json_round_trip(synth):
    rep = run(RunSpec("ews", synth, "Q2", 2000, p=0.5, q=0.5, trials=3, ground_truth="auto"))
    text = rep.to_json()
    again = EstimateReport.from_json(text)
    assert again == rep
    assert again.to_json() == text


def test_csv_layout(synth):
    rep = run(RunSpec("es", synth, "Q1", 2000, p=0.5, trials=4, ground_truth="auto"))
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 5
    assert [float(r[9]) for r in rows[1:]] == rep.values
    empty = run(RunSpec("es", synth, "Q1", 2000, p=0.5, trials=1))
    rows = list(csv.reader(io.StringIO(empty.to_csv())))
    assert tuple(rows[0]) == CSV_COLUMNS and rows[1][10] == "" and rows[1][11] == ""


def test_threads_do_not_change_values(synth, monkeypatch):
    spec = dict(algorithm="es", graph=synth, motif="Q1", delta=2000, p=0.2, trials=6)
    a = run(RunSpec(**spec)).values
    monkeypatch.setenv("TEMPOMOTIF_THREADS", "4")
    assert run(RunSpec(**spec)).values == a


def test_same_values_across_processes(synth):
    code = ("import sys; from tempomotif.bench import RunSpec, run; "
            "print(run(RunSpec('sews', sys.argv[1], 'Q3', 2000, q=0.5, r=200, trials=3)).values)")
    outs = {subprocess.run([sys.executable, "-c", code, synth], capture_output=True, text=True,
                           check=True).stdout for _ in range(2)}
    assert len(outs) == 1


def test_generator_is_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    generate_synthetic(10, 100, 1000, seed=7, path=a)
    generate_synthetic(10, 100, 1000, seed=7, path=b)
    assert a.read_bytes() == b.read_bytes()
    assert generate_synthetic(10, 100, 1000, seed=8) != a.read_text()


@pytest.mark.parametrize("model", ["uniform", "bursty", "skewed-pairs"])
def test_generator_output_is_valid(model):
    edges = synthetic_edges(50, 2000, 10_000, model, seed=2)
    assert len(edges) == 2000
    assert all(u != v and 0 <= u < 50 and 0 <= v < 50 and 0 <= t <= 10_000 for u, v, t in edges)
    assert [t for _, _, t in edges] == sorted(t for _, _, t in edges)


def test_uniform_pairs_spread_out():
    edges = synthetic_edges(100, 10_000, 10**6, "uniform", seed=3)
    top = Counter((u, v) for u, v, _ in edges).most_common(1)[0][1]
    assert top <= 10  # about 1 edge per pair on average


def test_skewed_pairs_concentrate():
    edges = synthetic_edges(100, 10_000, 10**6, "skewed-pairs", seed=3)
    top = Counter((u, v) for u, v, _ in edges).most_common(1)[0][1]
    assert top >= 0.05 * len(edges)


def test_bursty_clusters_times():
    b = sorted(t for _, _, t in synthetic_edges(100, 5000, 10**6, "bursty", seed=3))
    u = sorted(t for _, _, t in synthetic_edges(100, 5000, 10**6, "uniform", seed=3))
    gaps = lambda ts: sum(1 for a, c in zip(ts, ts[1:]) if a == c)
    assert gaps(b) > 5 * gaps(u)


def test_generator_rejects_bad_sizes():
    with pytest.raises(ValueError):
        synthetic_edges(1, 10, 10)
    with pytest.raises(ValueError):
        synthetic_edges(10, 0, 10)
    with pytest.raises(ValueError):
        synthetic_edges(10, 10, 10, model="nope")


def test_compare(synth):
    a = run(RunSpec("es", synth, "Q1", 2000, p=0.3, trials=3, ground_truth="auto"))
    rows = compare(a, a)
    assert rows[0]["speedup"] == pytest.approx(1.0)
    b = run(RunSpec("ews", synth, "Q1", 2000, p=0.3, q=0.5, trials=3, ground_truth="auto"))
    row = compare(a, b)[0]
    assert row["error_a"] is not None and row["error_b"] is not None
    assert "ews" in format_comparison([row])
    other = run(RunSpec("es", synth, "Q1", 1000, p=0.3, trials=1))
    with pytest.raises(ReportMismatchError):
        compare(a, other)


def test_exact_vs_sampled_speedup_is_reported(synth):
    ex = run(RunSpec("exact", synth, "Q1", 2000))
    es = run(RunSpec("es", synth, "Q1", 2000, p=0.01, trials=3))
    assert compare(ex, es)[0]["speedup"] > 0
