"""Command-line interface.

Subcommands: cluster, estimate (= cluster with k estimation), eval, gen,
verify.  Exit codes: 0 success, 1 I/O or parse failure, 2 invalid
configuration, 3 verification mismatch.

Only the standard library is imported at module level so that the
``GOPC_THREADS`` environment variable can cap the numeric backends' thread
pools before they initialize.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def _configure_threads() -> None:
    """Apply GOPC_THREADS (0 or unset = automatic) before numpy loads."""
    raw = os.environ.get("GOPC_THREADS", "").strip()
    if not raw:
        return
    try:
        threads = int(raw)
    except ValueError:
        raise ValueError(f"GOPC_THREADS must be an integer, got {raw!r}") from None
    if threads < 0:
        raise ValueError(f"GOPC_THREADS must be >= 0, got {threads}")
    if threads == 0:
        return
    for var in _THREAD_VARS:
        os.environ[var] = str(threads)


def _points_format(path: str) -> str:
    return "tsv" if str(path).endswith(".tsv") else "csv"


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="input file")
    p.add_argument(
        "--format",
        choices=("points", "matrix"),
        default="points",
        help="input kind: point rows (csv/tsv by extension) or a dense square matrix",
    )
    p.add_argument(
        "--mode",
        choices=("diss", "sim"),
        default="diss",
        help="matrix semantics: dissimilarity or similarity",
    )


def _add_cluster_flags(p: argparse.ArgumentParser, with_k: bool) -> None:
    _add_input_flags(p)
    if with_k:
        p.add_argument("--k", type=int, help="number of clusters")
        p.add_argument(
            "--estimate",
            action="store_true",
            help="estimate k from the decision trace instead of --k",
        )
    p.add_argument("--k-max", type=int, default=20, help="epoch budget for estimation")
    p.add_argument(
        "--noise",
        choices=("separate", "merge"),
        default="merge",
        help="tie-noise handling",
    )
    p.add_argument(
        "--no-filter",
        action="store_true",
        help="score every non-medoid each epoch (slow path, identical result)",
    )
    p.add_argument("--tie-eps", type=float, default=0.0, help="assignment tie tolerance")
    p.add_argument("--out-labels", help="write the partition here")
    p.add_argument("--out-trace", help="write the gain trace TSV here")
    p.add_argument("--out-summary", help="write the JSON summary here (default: stdout)")
    p.add_argument("--verbose", action="store_true", help="human-readable progress")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gopc",
        description="Clustering by optimal medoid selection on tree-path distances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cluster = sub.add_parser("cluster", help="cluster a dataset")
    _add_cluster_flags(p_cluster, with_k=True)
    p_cluster.set_defaults(func=cmd_cluster)

    p_estimate = sub.add_parser("estimate", help="cluster with k estimated from the trace")
    _add_cluster_flags(p_estimate, with_k=False)
    p_estimate.set_defaults(func=cmd_estimate)

    p_eval = sub.add_parser("eval", help="compare two partitions")
    p_eval.add_argument("pred", help="predicted labels (partition file or label column)")
    p_eval.add_argument("truth", help="reference labels")
    p_eval.set_defaults(func=cmd_eval)

    p_gen = sub.add_parser("gen", help="generate a synthetic dataset")
    p_gen.add_argument(
        "--family",
        required=True,
        choices=("blobs", "circles", "spiral", "unbalance", "line_clusters"),
    )
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="output points file (csv/tsv)")
    p_gen.add_argument("--components", type=int)
    p_gen.add_argument("--spread", type=float)
    p_gen.add_argument("--separation", type=float)
    p_gen.add_argument("--radius-step", type=float)
    p_gen.add_argument("--scale", type=float)
    p_gen.add_argument("--length", type=float)
    p_gen.add_argument("--ratios", help="comma-separated component weights (unbalance)")
    p_gen.set_defaults(func=cmd_gen)

    p_verify = sub.add_parser(
        "verify", help="check the clustering objective against exhaustive search"
    )
    _add_input_flags(p_verify)
    p_verify.add_argument("--k", type=int, required=True)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def _load_pipeline_input(args, timings: dict):
    """Input file -> (DistanceMatrix, phase timings)."""
    from . import dataio

    t0 = time.perf_counter()
    if args.format == "points":
        ps = dataio.load_points(args.input, fmt=_points_format(args.input))
        timings["load"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        dm = dataio.euclidean_matrix(ps)
        timings["distances"] = time.perf_counter() - t0
    else:
        dm = dataio.load_matrix(args.input, mode=args.mode)
        timings["load"] = time.perf_counter() - t0
    return dm


def _elapsed_ms(timings: dict) -> dict:
    return {k: round(v * 1000.0, 3) for k, v in timings.items()}


def _emit_summary(args, summary: dict) -> None:
    text = json.dumps(summary, indent=2)
    if args.out_summary:
        with open(args.out_summary, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _run_cluster(args, estimate: bool) -> int:
    from . import core, dataio, decision, mst

    if estimate:
        if args.k_max < 2:
            raise ValueError("--k-max must be >= 2 when estimating")
    else:
        if args.k is None:
            raise ValueError("provide --k or --estimate")
        if args.k < 1:
            raise ValueError("--k must be >= 1")

    t_total = time.perf_counter()
    timings: dict[str, float] = {}
    dm = _load_pipeline_input(args, timings)

    t0 = time.perf_counter()
    tree = mst.build_tree(dm)
    timings["tree"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    mmx = mst.minimax_all_pairs(tree, dm)
    timings["minimax"] = time.perf_counter() - t0

    estimated_k = None
    tr = None
    if estimate:
        t0 = time.perf_counter()
        tr = decision.trace(mmx, min(args.k_max, dm.n), candidate_filter=not args.no_filter)
        estimated_k = decision.estimate_k(tr)
        timings["estimate"] = time.perf_counter() - t0
        k = estimated_k
        if args.verbose:
            print(f"estimated k = {k} from a {tr.k_max}-epoch trace")
    else:
        k = args.k

    t0 = time.perf_counter()
    model = core.run(mmx, k, candidate_filter=not args.no_filter, tie_eps=args.tie_eps)
    model = core.resolve_noise(model, args.noise, tree=tree, mm=mmx)
    timings["cluster"] = time.perf_counter() - t0

    if args.out_labels:
        dataio.write_partition(args.out_labels, model.labels, model.noise_flags)
    if args.out_trace:
        out_tr = tr if tr is not None else decision.DecisionTrace(k, model.gain_trace)
        decision.write_trace(args.out_trace, out_tr)
    timings["total"] = time.perf_counter() - t_total

    summary = {
        "n": model.n,
        "k": model.k,
        "medoids": [int(m) for m in model.medoids],
        "objective": model.objective,
        "noise_count": int(model.noise_flags.sum()),
        "elapsed_ms": _elapsed_ms(timings),
    }
    if estimated_k is not None:
        summary["estimated_k"] = estimated_k
        summary["k_max"] = tr.k_max
    if args.verbose:
        print(
            f"n={model.n} k={model.k} objective={model.objective:.6g} "
            f"noise={int(model.noise_flags.sum())} medoids={summary['medoids']}"
        )
    _emit_summary(args, summary)
    return 0


def cmd_cluster(args) -> int:
    if args.estimate == (args.k is not None):
        raise ValueError("provide exactly one of --k and --estimate")
    return _run_cluster(args, estimate=args.estimate)


def cmd_estimate(args) -> int:
    return _run_cluster(args, estimate=True)


def cmd_eval(args) -> int:
    from . import dataio, metrics

    pred = dataio.read_labels(args.pred)
    truth = dataio.read_labels(args.truth)
    out = {
        "rand_index": round(metrics.rand_index(pred, truth), 6),
        "adjusted_rand_index": round(metrics.adjusted_rand_index(pred, truth), 6),
        "nmi": round(metrics.nmi(pred, truth), 6),
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_gen(args) -> int:
    from . import dataio, synth

    params: dict = {}
    for key in ("components", "spread", "separation", "scale", "length"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    if args.radius_step is not None:
        params["radius_step"] = args.radius_step
    if args.ratios is not None:
        try:
            params["ratios"] = tuple(float(r) for r in args.ratios.split(","))
        except ValueError:
            raise ValueError(f"--ratios must be comma-separated numbers, got {args.ratios!r}")
    spec = synth.GenSpec(args.family, args.n, seed=args.seed, params=params)
    ps = synth.generate(spec)
    dataio.write_points(args.out, ps, fmt=_points_format(args.out))
    print(
        json.dumps(
            {"family": args.family, "n": ps.n, "seed": args.seed, "out": args.out},
            indent=2,
        )
    )
    return 0


def cmd_verify(args) -> int:
    from . import core, mst, oracle

    if args.k < 1:
        raise ValueError("--k must be >= 1")
    timings: dict[str, float] = {}
    dm = _load_pipeline_input(args, timings)
    tree = mst.build_tree(dm)
    mmx = mst.minimax_all_pairs(tree, dm)
    model = core.run(mmx, args.k)
    ref = oracle.brute_force(mmx, args.k)
    tol = 1e-12 * max(1.0, abs(ref.best_objective))
    match = abs(model.objective - ref.best_objective) <= tol
    print(
        json.dumps(
            {
                "objective": model.objective,
                "oracle_objective": ref.best_objective,
                "evaluated_subsets": ref.evaluated,
                "match": bool(match),
            },
            indent=2,
        )
    )
    if not match:
        print(
            f"mismatch: clustering objective {model.objective!r} != "
            f"exhaustive optimum {ref.best_objective!r}",
            file=sys.stderr,
        )
        return 3
    return 0


def main(argv=None) -> int:
    try:
        _configure_threads()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        from .dataio import ParseError

        code = 1 if isinstance(exc, ParseError) else 2
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
