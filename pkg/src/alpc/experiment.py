"""Fit, cluster and score; plus the grid, ablation and scaling drivers.

Everything here returns plain dicts ready for JSON so the CLI only has to
parse flags and write files.
"""
import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from . import __version__, errors
from .kmeans import kmeans
from .metrics import evaluate
from .solver import SolverConfig, Variant, fit
from .synth import SynthSpec, generate
from .types import ClusteringResult

LAMBDA1_GRID = (1e-2, 1e-1, 1.0, 1e1, 1e2)
LAMBDA2_GRID = (1e-4, 1e-3, 1e-2, 1e-1, 1.0)
ANCHOR_GRID = (1, 2, 3)
BENCH_SIZES = (2500, 5000, 10000, 20000)
METRICS = ("acc", "nmi", "purity", "f_score")


def max_workers():
    value = os.environ.get("ALPC_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            raise errors.HyperparameterError(f"ALPC_THREADS must be an integer, got {value!r}")
    return os.cpu_count() or 1


def cluster(state, data, restarts, seed):
    """k-means on the columns of the learned graph, scored if labels exist."""
    km = kmeans(state.graph, data.n_clusters, restarts=restarts, seed=seed)
    result = ClusteringResult(km.labels)
    if data.labels is not None:
        for name, value in evaluate(km.labels, data.labels).items():
            setattr(result, name, value)
    return result, km


def config_dict(config):
    return {
        "hyperparams": config.hp.to_dict(),
        "variant": config.variant.value,
        "baseline_gamma": config.baseline_gamma,
    }


def run_record(data, config, dataset_info=None, early_stop=True):
    """Fit, cluster and score once; returns a self-describing record.

    On solver failure the record carries ``error`` and the partial trace
    instead of clustering results.
    """
    record = {
        "tool": "alpc",
        "tool_version": __version__,
        "config": config_dict(config),
        "dataset": dict(dataset_info or {}, n=data.n_samples, c=data.n_clusters,
                        view_dims=data.view_dims),
        "fit": None,
        "clustering": None,
        "error": None,
    }
    try:
        state, report = fit(data, config, early_stop=early_stop)
    except errors.FitError as err:
        record["fit"] = report_dict(err.report)
        record["error"] = str(err)
        return record
    record["fit"] = report_dict(report)
    result, km = cluster(state, data, config.hp.kmeans_restarts, config.hp.seed)
    record["clustering"] = dict(result.metrics(), predicted_labels=result.predicted_labels.tolist(),
                                kmeans_inertia=km.inertia)
    return record


def report_dict(report):
    d = report.to_dict()
    d["objective_trace"] = [float(v) for v in d["objective_trace"]]
    return d


def _map(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def grid_search(data, base, lambda1s=LAMBDA1_GRID, lambda2s=LAMBDA2_GRID, anchors=ANCHOR_GRID,
                select_by=None, dataset_info=None, workers=None):
    """Sweep ``lambda1 x lambda2 x anchors`` and pick the best cell.

    Cells are scored by ACC when labels exist (ties broken by NMI, then by
    sweep order) and otherwise by lowest final objective. Cells whose
    anchor budget exceeds ``n`` or whose fit fails are kept with an error.
    """
    if select_by is None:
        select_by = "acc" if data.labels is not None else "objective"
    if select_by == "acc" and data.labels is None:
        raise errors.ValidationError("select_by=acc needs ground-truth labels")
    cells = list(itertools.product(lambda1s, lambda2s, anchors))

    def run(cell):
        l1, l2, m = cell
        config = replace(base, hp=replace(base.hp, anchors_per_cluster=m, lambda1=l1, lambda2=l2))
        try:
            return run_record(data, config, dataset_info)
        except errors.ValidationError as err:
            return {"config": config_dict(config), "fit": None, "clustering": None, "error": str(err)}

    records = _map(run, cells, workers or max_workers())
    rows = []
    for (l1, l2, m), rec in zip(cells, records):
        row = {"anchors_per_cluster": m, "lambda1": l1, "lambda2": l2}
        clus = rec.get("clustering") or {}
        for name in METRICS:
            row[name] = clus.get(name)
        fit_ = rec.get("fit") or {}
        trace = fit_.get("objective_trace") or []
        row["objective"] = trace[-1] if trace else None
        row["iterations"] = fit_.get("iterations")
        row["error"] = rec.get("error") or ""
        rows.append(row)

    def key(i):
        row = rows[i]
        score = row["objective"] if select_by == "objective" else row["acc"]
        if row["error"] or score is None:
            return (1, 0.0, 0.0, i)
        if select_by == "objective":
            return (0, score, 0.0, i)
        return (0, -score, -row["nmi"], i)

    best = min(range(len(rows)), key=key)
    if rows[best]["error"]:
        raise errors.NumericalError("every grid cell failed")
    return rows, records[best], best


def ablate(data, base, gamma, seeds, dataset_info=None):
    """Paired full vs baseline-a runs; deltas are full minus baseline."""
    pairs = []
    for seed in seeds:
        hp = replace(base.hp, seed=seed)
        full = run_record(data, SolverConfig(hp, Variant.FULL), dataset_info)
        baseline = run_record(data, SolverConfig(hp, Variant.BASELINE_A, gamma), dataset_info)
        pairs.append({"seed": seed, "full": full, "baseline": baseline,
                      "delta": _deltas(full, baseline)})
    mean = {}
    for name in METRICS:
        values = [p["delta"][name] for p in pairs if p["delta"][name] is not None]
        mean[name] = float(np.mean(values)) if values else None
    return {"tool": "alpc", "tool_version": __version__, "gamma": gamma,
            "pairs": pairs, "mean_delta": mean}


def _deltas(full, baseline):
    out = {}
    for name in METRICS:
        a = (full.get("clustering") or {}).get(name)
        b = (baseline.get("clustering") or {}).get(name)
        out[name] = None if a is None or b is None else a - b
    return out


def bench(sizes=BENCH_SIZES, iterations=20, repeats=3, c=5, l=3, hp=None, seed=0, workers=1):
    """Time fixed-length fits on synthetic data of growing size.

    ``wall_time_seconds`` covers the alternating sweeps only (the best of
    ``repeats`` runs); initialisation is reported separately.
    """
    base = hp or SolverConfig().hp
    hp = replace(base, max_iter=iterations, seed=seed)

    def run(n):
        data = generate(SynthSpec(n=n, c=c, l=l, seed=seed))
        best = None
        for _ in range(repeats):
            _, report = fit(data, SolverConfig(hp), early_stop=False)
            if best is None or report.wall_time_seconds < best.wall_time_seconds:
                best = report
        return {"n": n, "iterations": best.iterations,
                "wall_time_seconds": best.wall_time_seconds, "init_seconds": best.init_seconds}

    start = time.perf_counter()
    rows = _map(run, list(sizes), workers)
    return rows, time.perf_counter() - start
