"""Exact counting and sampling estimators for temporal motifs."""

from .exact import count_local, enumerate_instances, exact_count, naive_enumerate
from .graph import TemporalEdge, TemporalGraph, load_edge_list, window
from .kernels import BACKEND
from .motif import TemporalMotif, classify, load_motif, matching_orders, parse_motif
from .offline import EstimatorConfig, es_estimate, ews_estimate, variance_bound
from .stream import StreamConfig, StreamState, run_stream

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EstimatorConfig",
    "StreamConfig",
    "StreamState",
    "TemporalEdge",
    "TemporalGraph",
    "TemporalMotif",
    "classify",
    "count_local",
    "enumerate_instances",
    "es_estimate",
    "ews_estimate",
    "exact_count",
    "load_edge_list",
    "load_motif",
    "matching_orders",
    "naive_enumerate",
    "parse_motif",
    "run_stream",
    "variance_bound",
    "window",
]
