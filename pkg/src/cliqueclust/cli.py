"""``cliqueclust`` command line: simulate, cluster, evaluate, bench, export.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

import argparse
import json
import sys

from . import io, sbm
from .errors import InvalidArgumentError, InvalidNodeError, NumericalError
from .experiments import ALGORITHMS, METRICS, ExperimentSpec, cluster_with, run_experiment
from .metrics import ari, error_matrix, nmi
from .spectral import SolverConfig

EXIT_INPUT = 2
EXIT_NUMERICAL = 3


class CommandError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CommandError(f"{path}: invalid JSON ({exc})") from None


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_simulate(args):
    spec = sbm.BlockModelSpec.from_dict(_load_json(args.spec))
    errors = sbm.validate_spec(spec)
    if errors:
        raise CommandError("invalid block model spec: " + "; ".join(errors))
    net = sbm.generate(spec, args.seed)
    io.write_edge_list(net.graph, f"{args.out}.edges")
    io.write_membership(net.truth, f"{args.out}.truth.csv")
    print(f"wrote {args.out}.edges ({net.graph.n} nodes, {net.graph.m} edges) "
          f"and {args.out}.truth.csv ({net.truth.h} communities)", file=sys.stderr)


def _solver(args):
    return SolverConfig(tol=args.tol, max_iter=args.max_iter, seed=args.seed)


def cmd_cluster(args):
    g = io.read_edge_list(args.edges)
    if args.algorithm == "global-p" and args.p is None:
        raise CommandError("--algorithm global-p requires --p")
    part, tree = cluster_with(args.algorithm, g, args.p, args.alpha, _solver(args))
    io.write_membership(part, args.out)
    if tree is not None:
        tree_path = args.tree or f"{args.out}.tree.json"
        io.write_json(tree.to_dict(), tree_path)
    print(f"{part.h} communities over {g.n} nodes", file=sys.stderr)


def _metric_list(text):
    metrics = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in metrics if m not in METRICS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown metric(s): {', '.join(bad)}")
    return metrics


def evaluate_files(truth_path, pred_path, metrics=METRICS):
    truth = io.read_membership(truth_path)
    pred = io.read_membership(pred_path, n=truth.n)
    results = []
    if "nmi" in metrics:
        results.append({"metric": "nmi", "mean": nmi(truth, pred), "replications": 1})
    if "ari" in metrics:
        results.append({"metric": "ari", "mean": ari(truth, pred), "replications": 1})
    if "error-matrix" in metrics:
        em = error_matrix(truth, pred)
        results.append({"metric": "error-matrix", "mean": em.eps.tolist(),
                        "replications": 1, "undefined": em.undefined.tolist()})
    return {"replications": 1, "results": results}


def cmd_evaluate(args):
    _emit(io.write_json(evaluate_files(args.truth, args.membership, args.metrics)),
          args.out)


def cmd_bench(args):
    spec = ExperimentSpec.from_dict(_load_json(args.experiment))
    report = run_experiment(spec, jobs=args.jobs, keep_series=args.series or bool(args.csv))
    if args.csv:
        _write_series_csv(report["series"], args.csv)
        if not args.series:
            del report["series"]
    _emit(io.write_json(report), args.out)


def _write_series_csv(series, path):
    cols = [k for k in ("nmi", "ari") if k in series]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(["replication"] + cols) + "\n")
        for i, r in enumerate(series["replication"]):
            fh.write(",".join([str(r)] + [repr(series[c][i]) for c in cols]) + "\n")


def cmd_export(args):
    g = io.read_edge_list(args.edges)
    part = io.read_membership(args.membership, n=g.n) if args.membership else None
    text = io.format_dot(g, part) if args.format == "dot" else io.format_node_link_json(g, part)
    _emit(text, args.out)


def build_parser():
    parser = argparse.ArgumentParser(prog="cliqueclust", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw a stochastic blockmodel graph")
    p.add_argument("spec", help='JSON with "sizes" and "B"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True,
                   help="output prefix; writes PREFIX.edges and PREFIX.truth.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("cluster", help="cluster an edge list")
    p.add_argument("edges")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="localized")
    p.add_argument("--p", type=float, help="global threshold (global-p)")
    p.add_argument("--alpha", type=float, default=0.025, help="type-I tolerance (localized)")
    p.add_argument("--seed", type=int, default=0, help="eigensolver start-vector seed")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--out", required=True, help="membership CSV")
    p.add_argument("--tree", help="tree JSON path (localized; default OUT.tree.json)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("evaluate", help="compare a membership file with the truth")
    p.add_argument("truth")
    p.add_argument("membership")
    p.add_argument("--metrics", type=_metric_list, default=list(METRICS))
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="replicated experiment from a JSON spec")
    p.add_argument("experiment")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-")
    p.add_argument("--series", action="store_true", help="include per-replication values")
    p.add_argument("--csv", help="also write per-replication NMI/ARI to this CSV")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export", help="write the graph as DOT or node-link JSON")
    p.add_argument("edges")
    p.add_argument("membership", nargs="?")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InvalidArgumentError, InvalidNodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
