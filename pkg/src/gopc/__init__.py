"""Clustering by globally optimal medoid selection on tree-path distances.

The public surface re-exports the pipeline pieces (I/O, spanning tree and
minimax distances, medoid selection, k estimation, agreement metrics,
synthetic data, the exhaustive reference solver) plus the scikit-learn style
``GOPC`` estimator.  Submodules load lazily so the command-line entry point
can configure threading before the numeric stack initializes.
"""

from importlib import import_module

__version__ = "0.1.0"

_EXPORTS = {
    # dataio
    "ParseError": ".dataio",
    "PointSet": ".dataio",
    "DistanceMatrix": ".dataio",
    "load_points": ".dataio",
    "write_points": ".dataio",
    "euclidean_matrix": ".dataio",
    "load_matrix": ".dataio",
    "save_matrix": ".dataio",
    "write_partition": ".dataio",
    "read_labels": ".dataio",
    # mst
    "SpanningTree": ".mst",
    "MinimaxMatrix": ".mst",
    "build_tree": ".mst",
    "minimax_all_pairs": ".mst",
    "verify_ultrametric": ".mst",
    "write_tree": ".mst",
    # core
    "DegreeTable": ".core",
    "NnTable": ".core",
    "ClusterModel": ".core",
    "compute_degrees": ".core",
    "compute_nn": ".core",
    "gain": ".core",
    "run": ".core",
    "assign": ".core",
    "resolve_noise": ".core",
    # decision
    "DecisionTrace": ".decision",
    "trace": ".decision",
    "estimate_k": ".decision",
    "write_trace": ".decision",
    # metrics
    "rand_index": ".metrics",
    "adjusted_rand_index": ".metrics",
    "nmi": ".metrics",
    # synth
    "GenSpec": ".synth",
    "generate": ".synth",
    # oracle
    "OracleResult": ".oracle",
    "brute_force": ".oracle",
    # estimator
    "GOPC": ".estimator",
}

__all__ = sorted(_EXPORTS) + ["__version__"]


def __getattr__(name: str):
    try:
        module = _EXPORTS[name]
    except KeyError:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}") from None
    value = getattr(import_module(module, __name__), name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(set(globals()) | set(_EXPORTS))
