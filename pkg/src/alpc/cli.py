"""Command-line driver: ``alpc synth|import-csv|fit|grid|ablate|bench``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.
"""
import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__, dataset_io, errors, experiment
from .solver import SolverConfig, Variant
from .synth import SynthSpec, generate
from .types import Hyperparams

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 1, 2, 3

log = logging.getLogger("alpc")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _list_of(kind):
    def parse(text):
        try:
            return [kind(item) for item in text.split(",") if item.strip()]
        except (ValueError, argparse.ArgumentTypeError) as err:
            raise argparse.ArgumentTypeError(str(err))
    return parse


def _add_solver_flags(p, restarts=50):
    hp = Hyperparams()
    g = p.add_argument_group("solver")
    g.add_argument("--lambda1", type=_positive_float, default=hp.lambda1)
    g.add_argument("--lambda2", type=_positive_float, default=hp.lambda2)
    g.add_argument("--anchors-per-cluster", type=_positive_int, default=hp.anchors_per_cluster)
    g.add_argument("--max-iter", type=_non_negative_int, default=hp.max_iter)
    g.add_argument("--tol", type=_positive_float, default=hp.tol)
    g.add_argument("--seed", type=int, default=hp.seed)
    g.add_argument("--restarts", type=_positive_int, default=restarts,
                   help="k-means restarts on the learned graph")
    g.add_argument("--ridge-epsilon", type=_positive_float, default=hp.ridge_epsilon)
    g.add_argument("--simplex-projection", action="store_true")
    g.add_argument("--reorthonormalize", action="store_true")
    g.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.FULL.value)
    g.add_argument("--gamma", type=_positive_float, default=None,
                   help="graph penalty for --variant baseline-a")


def _hyperparams(args):
    return Hyperparams(
        lambda1=args.lambda1,
        lambda2=args.lambda2,
        anchors_per_cluster=args.anchors_per_cluster,
        max_iter=args.max_iter,
        tol=args.tol,
        seed=args.seed,
        simplex_projection=args.simplex_projection,
        reorthonormalize_anchors=args.reorthonormalize,
        ridge_epsilon=args.ridge_epsilon,
        kmeans_restarts=args.restarts,
    )


def _config(args):
    variant = Variant(args.variant)
    gamma = args.gamma
    if variant is Variant.BASELINE_A and gamma is None:
        raise UsageError("--variant baseline-a requires --gamma")
    return SolverConfig(_hyperparams(args), variant, gamma)


def _load(path):
    data = dataset_io.load(path)
    info = {"path": str(path), "fingerprint": dataset_io.fingerprint(path)}
    return data, info


def _write_text(path, text):
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _write_json(path, payload):
    _write_text(path, json.dumps(payload, indent=2) + "\n")


def _write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[h]) for h in header])
    _write_text(path, buf.getvalue())


def _fmt(value):
    if isinstance(value, float):
        return repr(value)  # shortest round-trip repr, up to 17 significant digits
    return "" if value is None else value


def _sidecar(out, suffix):
    out = Path(out)
    return out.with_name(out.stem + suffix)


def cmd_synth(args):
    spec = SynthSpec(n=args.n, c=args.c, l=args.views, latent_dim=args.latent_dim,
                     view_dims=args.view_dims, separation=args.separation,
                     noise_sigma=args.noise_sigma, seed=args.seed)
    try:
        spec.check()
    except errors.ValidationError as err:
        raise UsageError(str(err)) from err
    dataset_io.save(generate(spec), args.out)
    print(dataset_io.fingerprint(args.out))
    return EXIT_OK


def cmd_import_csv(args):
    data = dataset_io.import_csv(args.view, args.c, labels=args.labels, skip_header=args.skip_header)
    dataset_io.save(data, args.out)
    print(dataset_io.fingerprint(args.out))
    return EXIT_OK


def _write_trace(path, trace):
    _write_csv(path, ["iteration", "objective"],
               [{"iteration": i + 1, "objective": v} for i, v in enumerate(trace)])


def cmd_fit(args):
    config = _config(args)
    data, info = _load(args.dataset)
    record = experiment.run_record(data, config, info)
    _write_json(args.out, record)
    _write_trace(args.trace_csv or _sidecar(args.out, ".trace.csv"), record["fit"]["objective_trace"])
    if record["error"]:
        log.error("%s", record["error"])
        return EXIT_NUMERICAL
    clus = record["clustering"]
    if clus["acc"] is not None:
        log.info("acc=%.4f nmi=%.4f purity=%.4f f=%.4f", clus["acc"], clus["nmi"],
                 clus["purity"], clus["f_score"])
    return EXIT_OK


GRID_COLUMNS = ["lambda1", "lambda2", "anchors_per_cluster", "acc", "nmi", "purity", "f_score",
                "objective", "iterations", "error"]


def cmd_grid(args):
    config = _config(args)
    data, info = _load(args.dataset)
    rows, best, index = experiment.grid_search(
        data, config, lambda1s=args.lambda1_grid, lambda2s=args.lambda2_grid,
        anchors=args.anchors_grid, select_by=args.select_by, dataset_info=info)
    _write_csv(args.table or _sidecar(args.out, ".grid.csv"), GRID_COLUMNS, rows)
    best = dict(best, grid_cell=index)
    _write_json(args.out, best)
    log.info("best cell %d: %s", index, rows[index])
    return EXIT_OK


def cmd_ablate(args):
    config = _config(args)
    data, info = _load(args.dataset)
    if data.labels is None:
        raise errors.ValidationError("ablation needs ground-truth labels")
    gamma = args.gamma if args.gamma is not None else config.hp.lambda2
    seeds = [config.hp.seed + i for i in range(args.repeats)]
    result = experiment.ablate(data, config, gamma, seeds, info)
    _write_json(args.out, result)
    log.info("mean delta (full - baseline): %s", result["mean_delta"])
    return EXIT_OK


def cmd_bench(args):
    config = _config(args)
    rows, _ = experiment.bench(sizes=args.sizes, iterations=args.iters, repeats=args.repeats,
                               c=args.c, l=args.views, hp=config.hp, seed=config.hp.seed)
    _write_csv(args.out, ["n", "iterations", "wall_time_seconds", "init_seconds"], rows)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="alpc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"alpc {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="generate a synthetic multi-view dataset")
    p.add_argument("--n", type=_positive_int, default=1000)
    p.add_argument("--c", type=_positive_int, default=5)
    p.add_argument("--views", type=_positive_int, default=3)
    p.add_argument("--latent-dim", type=_positive_int, default=None)
    p.add_argument("--view-dims", type=_list_of(_positive_int), default=None)
    p.add_argument("--separation", type=_positive_float, default=10.0)
    p.add_argument("--noise-sigma", type=_positive_float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("import-csv", help="convert per-view CSV files into a dataset")
    p.add_argument("--view", action="append", required=True, help="CSV file, one row per sample")
    p.add_argument("--labels", default=None)
    p.add_argument("--c", type=_positive_int, required=True)
    p.add_argument("--skip-header", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_import_csv)

    p = sub.add_parser("fit", help="fit one model, cluster and score it")
    p.add_argument("dataset")
    _add_solver_flags(p)
    p.add_argument("--out", required=True, help="run record JSON")
    p.add_argument("--trace-csv", default=None, help="default: <out>.trace.csv")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("grid", help="hyperparameter grid search")
    p.add_argument("dataset")
    _add_solver_flags(p)
    p.add_argument("--lambda1-grid", type=_list_of(_positive_float), default=list(experiment.LAMBDA1_GRID))
    p.add_argument("--lambda2-grid", type=_list_of(_positive_float), default=list(experiment.LAMBDA2_GRID))
    p.add_argument("--anchors-grid", type=_list_of(_positive_int), default=list(experiment.ANCHOR_GRID))
    p.add_argument("--select-by", choices=["acc", "objective"], default=None)
    p.add_argument("--out", required=True, help="best run record JSON")
    p.add_argument("--table", default=None, help="default: <out>.grid.csv")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("ablate", help="full model vs regularised-graph baseline")
    p.add_argument("dataset")
    _add_solver_flags(p)
    p.add_argument("--repeats", type=_positive_int, default=1, help="seeds seed..seed+repeats-1")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("bench", help="wall time of fixed-length fits versus n")
    _add_solver_flags(p)
    p.add_argument("--sizes", type=_list_of(_positive_int), default=list(experiment.BENCH_SIZES))
    p.add_argument("--iters", type=_positive_int, default=20)
    p.add_argument("--repeats", type=_positive_int, default=3)
    p.add_argument("--c", type=_positive_int, default=5)
    p.add_argument("--views", type=_positive_int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def _exit_code(err):
    if isinstance(err, (UsageError, errors.HyperparameterError, errors.AnchorBudgetError)):
        return EXIT_USAGE
    if isinstance(err, (errors.DataError, errors.ValidationError, OSError)):
        return EXIT_DATA
    if isinstance(err, errors.NumericalError):
        return EXIT_NUMERICAL
    return EXIT_USAGE


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, errors.AlpcError, OSError) as err:
        print(f"alpc {args.command}: {err}", file=sys.stderr)
        return _exit_code(err)


if __name__ == "__main__":
    sys.exit(main())
