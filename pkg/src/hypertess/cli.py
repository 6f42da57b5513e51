"""Command-line frontend for reproducible tessellation experiments.

All randomness flows from one --seed; per-stage streams are derived by fixed
stream ids (matrix=0, sampling=1, pair selection=2), so every report can be
regenerated exactly from the config it embeds.

Exit codes: 0 success or audit pass, 1 audit fail, 2 usage or invalid
configuration, 3 I/O or file-format failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import formats
from .affine import audit_affine, build_affine_arrangement, normalize_diameter
from .audit import all_pairs, audit_uniformity, build_tessellation_graph, cell_analysis, l1_embedding_stat, select_pairs
from .embedding import batch_embed
from .exceptions import HypertessError, FileFormatError
from .rng import Seed, gaussian_matrix
from .sets import FiniteSet, mean_width, parse_model
from .validation import unit_rows

EXIT_OK = 0
EXIT_AUDIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3

STREAM_MATRIX = 0
STREAM_SAMPLING = 1
STREAM_PAIRS = 2


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["command"] = args.func.__name__.removeprefix("cmd_")
    return cfg


def _emit(args, payload: dict) -> None:
    payload["config"] = _config(args)
    if getattr(args, "report", None):
        formats.write_json(args.report, payload)
    line = {k: payload[k] for k in ("kind", "delta_max", "passed") if k in payload}
    print(json.dumps(line if line else {"kind": payload.get("kind", "ok")}))


def _sample_model(model, samples, seed):
    if samples is None:
        if isinstance(model, FiniteSet):
            return model.points
        samples = 200
    return model.sample_many(samples, seed)


def cmd_gen(args) -> int:
    A = gaussian_matrix(Seed(args.seed, args.stream), args.m, args.n)
    formats.write_matrix(args.out, A)
    print(f"wrote {args.out}: {A.m} x {A.n} matrix")
    return EXIT_OK


def cmd_embed(args) -> int:
    A = formats.read_matrix(args.matrix)
    points = formats.load_points(args.points)
    codes = batch_embed(A, points, threads=args.threads) if points.shape[0] else []
    formats.write_codes(args.out, codes, m=A.m)
    print(f"wrote {args.out}: {len(codes)} codes of {A.m} bits")
    return EXIT_OK


def _load_arrangement_for_model(args, model):
    seed = Seed(args.seed, STREAM_MATRIX)
    if getattr(args, "matrix", None):
        A = formats.read_matrix(args.matrix)
        if A.n != model.n:
            raise HypertessError(
                f"matrix has n={A.n} but model {model.name} has n={model.n}"
            )
        return A
    if args.m is None:
        raise HypertessError("either --matrix or --m is required")
    return gaussian_matrix(seed, args.m, model.n)


def cmd_audit(args) -> int:
    model = parse_model(args.model)
    A = _load_arrangement_for_model(args, model)
    points = _sample_model(model, args.samples, Seed(args.seed, STREAM_SAMPLING))
    if points.shape[0] == 1:
        pairs = np.array([[0, 0]], dtype=np.int64)
    else:
        pairs = select_pairs(points, max_pairs=args.pairs, seed=Seed(args.seed, STREAM_PAIRS))
    bound = None if args.delta is None else args.delta + 2.0 * abs(args.t)
    report = audit_uniformity(A, points, pairs=pairs, t=args.t, bound=bound, threads=args.threads)
    payload = formats.report_to_dict(report)
    _emit(args, payload)
    if getattr(args, "csv", None):
        formats.worst_pairs_csv(args.csv, report)
    return EXIT_OK if report.passed is not False else EXIT_AUDIT_FAIL


def cmd_meanwidth(args) -> int:
    model = parse_model(args.model)
    est = mean_width(model, args.trials, Seed(args.seed, STREAM_SAMPLING))
    payload = formats.mean_width_to_dict(est)
    payload["model"] = model.name
    _emit(args, payload)
    if getattr(args, "csv", None):
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("gaussian_width,std_error,trials,spherical_width,diff_width\n")
            fh.write(
                f"{est.gaussian_width:.17g},{est.std_error:.17g},{est.trials},"
                f"{est.spherical_width:.17g},{est.diff_width:.17g}\n"
            )
    return EXIT_OK


def cmd_cells(args) -> int:
    model = parse_model(args.model)
    A = _load_arrangement_for_model(args, model)
    points = _sample_model(model, args.samples, Seed(args.seed, STREAM_SAMPLING))
    codes = batch_embed(A, points, threads=args.threads)
    report = cell_analysis(codes, points)
    payload = formats.cell_report_to_dict(report)
    payload["m"] = A.m
    payload["n"] = A.n
    passed = None if args.delta is None else report.max_diameter_euclidean <= args.delta
    payload["bound"] = args.delta
    payload["passed"] = passed
    _emit(args, payload)
    return EXIT_OK if passed is not False else EXIT_AUDIT_FAIL


def cmd_graph(args) -> int:
    codes = formats.read_codes(args.codes)
    points = formats.load_points(args.points) if args.points else None
    graph = build_tessellation_graph(codes, points)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(formats.graph_to_dot(graph))
    if args.json:
        formats.write_json(args.json, formats.graph_to_json(graph))
    print(f"graph: {graph.node_count} cells, {len(graph.edges())} edges")
    return EXIT_OK


def cmd_l1(args) -> int:
    model = parse_model(args.model)
    A = _load_arrangement_for_model(args, model)
    points = _sample_model(model, args.samples, Seed(args.seed, STREAM_SAMPLING))
    stat = l1_embedding_stat(A, points)
    payload = {
        "kind": "l1",
        "m": A.m,
        "n": A.n,
        "z": stat.z,
        "pair_defect": stat.pair_defect,
        "points": int(points.shape[0]),
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_affine(args) -> int:
    raw = formats.load_points(args.points)
    normalized, scale = normalize_diameter(raw)
    arr = build_affine_arrangement(
        normalized, t=args.t, m=args.m, seed=Seed(args.seed, STREAM_MATRIX), base_point=raw[0]
    )
    if args.out:
        formats.write_arrangement(args.out, arr)
    if normalized.shape[0] > 1000 and args.pairs is not None:
        pairs = select_pairs(normalized, max_pairs=args.pairs, seed=Seed(args.seed, STREAM_PAIRS))
    else:
        pairs = all_pairs(normalized.shape[0])
    report = audit_affine(arr, normalized, pairs=pairs, bound=args.delta)
    payload = formats.report_to_dict(report)
    payload["scale"] = scale
    _emit(args, payload)
    if getattr(args, "csv", None):
        formats.worst_pairs_csv(args.csv, report)
    return EXIT_OK if report.passed is not False else EXIT_AUDIT_FAIL


def jl_sample_size(n_points: int, delta: float, eta: float) -> int:
    """Hyperplane count from the pairwise-concentration union bound."""
    return math.ceil((2.0 * math.log(n_points) + math.log(2.0 / eta)) / (2.0 * delta**2))


def cmd_jl(args) -> int:
    points = formats.load_points(args.points)
    if points.shape[0] < 2:
        raise HypertessError(f"need at least 2 points, got {points.shape[0]}")
    points, _ = unit_rows(points)
    m = jl_sample_size(points.shape[0], args.delta, args.eta)
    A = gaussian_matrix(Seed(args.seed, STREAM_MATRIX), m, points.shape[1])
    report = audit_uniformity(A, points, pairs=all_pairs(points.shape[0]), bound=args.delta)
    payload = formats.report_to_dict(report)
    payload["kind"] = "jl"
    payload["eta"] = args.eta
    _emit(args, payload)
    if getattr(args, "csv", None):
        formats.worst_pairs_csv(args.csv, report)
    return EXIT_OK if report.passed else EXIT_AUDIT_FAIL


def _add_common(p, report=True, csv=True, threads=False):
    p.add_argument("--seed", type=int, required=True, help="base seed (u64)")
    if report:
        p.add_argument("--report", help="write a JSON report here")
    if csv:
        p.add_argument("--csv", help="write a CSV summary here")
    if threads:
        p.add_argument("--threads", type=int, default=1, help="worker cap; never changes results")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypertess",
        description="Random hyperplane tessellations, sign embeddings, and audits.",
    )
    sub = parser.add_subparsers(required=True, metavar="command")

    p = sub.add_parser("gen", help="generate a Gaussian hyperplane matrix (HPM1)")
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_common(p, report=False, csv=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("embed", help="sign-embed a point file against a matrix (HPC1)")
    p.add_argument("--matrix", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("audit", help="audit uniformity of a tessellation over a model")
    p.add_argument("--model", required=True)
    p.add_argument("--matrix", help="use an existing HPM1 file instead of --m")
    p.add_argument("--m", type=int)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--pairs", type=int, default=None, help="max pairs to evaluate")
    p.add_argument("--t", type=float, default=0.0, help="soft threshold (0 = hard)")
    p.add_argument("--delta", type=float, help="target delta; bound is delta + 2|t|")
    _add_common(p, threads=True)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("meanwidth", help="Monte-Carlo Gaussian mean width of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--trials", type=int, default=100000)
    _add_common(p)
    p.set_defaults(func=cmd_meanwidth)

    p = sub.add_parser("cells", help="cell occupancy and diameters of an embedding")
    p.add_argument("--model", required=True)
    p.add_argument("--matrix")
    p.add_argument("--m", type=int)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--delta", type=float, help="pass iff max cell diameter <= delta")
    _add_common(p, csv=False, threads=True)
    p.set_defaults(func=cmd_cells)

    p = sub.add_parser("graph", help="tessellation graph from a code file")
    p.add_argument("--codes", required=True)
    p.add_argument("--points")
    p.add_argument("--out", help="DOT output path")
    p.add_argument("--json", help="JSON adjacency output path")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("l1", help="l1 embedding defect statistics")
    p.add_argument("--model", required=True)
    p.add_argument("--matrix")
    p.add_argument("--m", type=int)
    p.add_argument("--samples", type=int, default=None)
    _add_common(p, csv=False)
    p.set_defaults(func=cmd_l1)

    p = sub.add_parser("affine", help="affine tessellation of a bounded cloud via lifting")
    p.add_argument("--points", required=True)
    p.add_argument("--t", type=float, default=4.0, help="lift height (>= 2)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--pairs", type=int, default=None)
    p.add_argument("--delta", type=float)
    p.add_argument("--out", help="write the arrangement (HPA1) here")
    _add_common(p)
    p.set_defaults(func=cmd_affine)

    p = sub.add_parser("jl", help="dimension-reduction run for a finite point file")
    p.add_argument("--points", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eta", type=float, default=0.01, help="failure budget")
    _add_common(p)
    p.set_defaults(func=cmd_jl)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (HypertessError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
