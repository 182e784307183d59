"""Alternating minimisation for anchor learning with cluster constraints.

The model reconstructs every view from view-specific anchors and one
shared anchor graph, ``X_v ~ A_v Z``, while tying the anchors to an
orthonormal cluster basis (``A_v ~ U_v P``) and the graph to the cluster
indicators (``Z ~ P^T R``)::

    J = sum_v ||X_v - A_v Z||^2 + lam1 sum_v ||A_v - U_v P||^2 + lam2 ||Z - P^T R||^2

Each block update below is the exact minimiser of ``J`` over that block
with the others held fixed, so ``J`` never increases across a sweep.
"""
import enum
import logging
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import errors
from .kmeans import kmeans
from .linalg import polar_factor, spd_solve_ridge, thin_svd
from .simplex import project_columns
from .types import FitReport, Hyperparams, ModelState, validate

logger = logging.getLogger(__name__)

INIT_NOISE = 1e-3


class Variant(str, enum.Enum):
    FULL = "full"
    BASELINE_A = "baseline-a"


@dataclass
class SolverConfig:
    hp: Hyperparams = field(default_factory=Hyperparams)
    variant: Variant = Variant.FULL
    baseline_gamma: Optional[float] = None

    def __post_init__(self):
        self.variant = Variant(self.variant)
        if self.variant is Variant.BASELINE_A:
            if self.baseline_gamma is None or not self.baseline_gamma > 0:
                raise errors.HyperparameterError("baseline-a requires a positive baseline_gamma")


class _RidgeCounter:
    def __init__(self):
        self.count = 0

    def __call__(self, err):
        self.count += 1
        logger.info("singular system (pivot %d); retrying with ridge", err.pivot)


def _solve(a, b, hp, counter=None):
    return spd_solve_ridge(a, b, hp.ridge_epsilon, counter)


def objective(state, data, hp):
    """Value of the full objective at ``state``."""
    state.check_shapes(data, hp)
    z, p, r = state.graph, state.anchor_indicator, state.data_indicator
    total = 0.0
    for x, a, u in zip(data.views, state.anchors, state.bases):
        total += _sq_norm(x - a @ z) + hp.lambda1 * _sq_norm(a - u @ p)
    return total + hp.lambda2 * _sq_norm(z - p.T @ r)


def baseline_objective(state, data, gamma):
    total = sum(_sq_norm(x - a @ state.graph) for x, a in zip(data.views, state.anchors))
    return total + gamma * _sq_norm(state.graph)


def _sq_norm(m):
    return float(np.einsum("ij,ij->", m, m))


def update_anchors(state, data, hp, counter=None):
    """Closed-form anchors ``A_v = (lam1 U_v P + X_v Z^T)(Z Z^T + lam1 I)^-1``.

    Solved as the transposed SPD system ``(Z Z^T + lam1 I) A_v^T = (...)^T``.
    """
    z = state.graph
    gram = z @ z.T + hp.lambda1 * np.eye(z.shape[0])
    anchors = []
    for x, u in zip(data.views, state.bases):
        rhs = hp.lambda1 * (u @ state.anchor_indicator) + x @ z.T
        a = _solve(gram, rhs.T, hp, counter).T
        if hp.reorthonormalize_anchors:
            a = polar_factor(a)
        anchors.append(a)
    return anchors


def update_graph(state, data, hp, counter=None):
    """Closed-form graph ``Z = (sum A_v^T A_v + lam2 I)^-1 (sum A_v^T X_v + lam2 P^T R)``."""
    k = state.graph.shape[0]
    gram = hp.lambda2 * np.eye(k)
    rhs = hp.lambda2 * (state.anchor_indicator.T @ state.data_indicator)
    for x, a in zip(data.views, state.anchors):
        gram += a.T @ a
        rhs += a.T @ x
    z = _solve(gram, rhs, hp, counter)
    if hp.simplex_projection:
        z = project_columns(z)
    return z


def update_anchor_indicator(state, data, hp, counter=None):
    """Closed-form ``P = (lam1 sum U_v^T U_v + lam2 R R^T)^-1 (lam1 sum U_v^T A_v + lam2 R Z^T)``.

    With orthonormal bases ``sum U_v^T U_v`` is ``l I``; the general Gram
    keeps the update exact while the bases are still zero.
    """
    r = state.data_indicator
    gram = hp.lambda2 * (r @ r.T)
    rhs = hp.lambda2 * (r @ state.graph.T)
    for a, u in zip(state.anchors, state.bases):
        gram += hp.lambda1 * (u.T @ u)
        rhs += hp.lambda1 * (u.T @ a)
    return _solve(gram, rhs, hp, counter)


def update_data_indicator(state, hp, counter=None):
    """Least-squares indicator ``R = (P P^T)^-1 P Z``."""
    p = state.anchor_indicator
    return _solve(p @ p.T, p @ state.graph, hp, counter)


def update_basis(state, hp=None):
    """Orthogonal Procrustes: ``U_v = W V^T`` where ``A_v P^T = W S V^T``."""
    bases = []
    for a in state.anchors:
        f = thin_svd(a @ state.anchor_indicator.T)
        bases.append(f.u @ f.vt)
    return bases


def _normalized_features(data):
    blocks = []
    for x in data.views:
        norms = np.linalg.norm(x, axis=0)
        blocks.append(x / np.where(norms > 0, norms, 1.0))
    return np.vstack(blocks)


def init_state(data, hp, seed=None):
    """Deterministic starting point for the alternating updates.

    Anchors and bases start at zero. ``P`` is the block indicator giving
    each cluster ``m`` consecutive anchors, ``Z`` is near-uniform on the
    simplex and ``R`` is one-hot from a single k-means run on the
    concatenated, column-normalised views.
    """
    validate(data, hp)
    seed = hp.seed if seed is None else seed
    n, c, m = data.n_samples, data.n_clusters, hp.anchors_per_cluster
    k = m * c
    rng = np.random.default_rng(seed)
    p = np.zeros((c, k))
    p[np.arange(k) // m, np.arange(k)] = 1.0
    z = project_columns(1.0 / k + INIT_NOISE * rng.standard_normal((k, n)))
    init = kmeans(_normalized_features(data), c, restarts=1, seed=seed)
    r = np.zeros((c, n))
    r[init.labels, np.arange(n)] = 1.0
    return ModelState(
        anchors=[np.zeros((d, k)) for d in data.view_dims],
        bases=[np.zeros((d, c)) for d in data.view_dims],
        graph=z,
        anchor_indicator=p,
        data_indicator=r,
    )


_EPS = np.finfo(np.float64).eps


def _converged(prev, cur, tol, floor):
    # ``floor`` (machine epsilon times the starting objective) stops an
    # exactly attainable fit from chasing round-off once J is ~0.
    return abs(cur - prev) / max(prev, floor, 1e-300) < tol


def _check_finite(state):
    blocks = [state.graph, state.anchor_indicator, state.data_indicator, *state.anchors, *state.bases]
    if not all(np.all(np.isfinite(b)) for b in blocks):
        raise errors.NumericalError("non-finite values in model state")


def fit(data, config=None, early_stop=True, state=None):
    """Run the alternating updates until the objective stalls.

    Updates go in the order anchors, graph, anchor indicator, data
    indicator, bases. Iteration stops once the relative objective change
    drops below ``hp.tol`` (unless ``early_stop`` is false) or after
    ``hp.max_iter`` sweeps.

    Returns
    -------
    state : ModelState
    report : FitReport
        ``objective_trace[t]`` is the objective after sweep ``t + 1``.

    Raises
    ------
    FitError
        If an update fails; ``err.report`` carries the partial trace.
    """
    config = config or SolverConfig()
    if config.variant is Variant.BASELINE_A:
        return fit_baseline(data, config, early_stop=early_stop, state=state)
    hp = config.hp
    start = time.perf_counter()
    state = init_state(data, hp) if state is None else state.copy()
    report = FitReport(init_seconds=time.perf_counter() - start)
    counter = _RidgeCounter()
    prev = objective(state, data, hp)
    floor = _EPS * prev
    start = time.perf_counter()
    try:
        for _ in range(hp.max_iter):
            state.anchors = update_anchors(state, data, hp, counter)
            state.graph = update_graph(state, data, hp, counter)
            state.anchor_indicator = update_anchor_indicator(state, data, hp, counter)
            state.data_indicator = update_data_indicator(state, hp, counter)
            state.bases = update_basis(state, hp)
            state.check_shapes(data, hp)
            _check_finite(state)
            cur = objective(state, data, hp)
            report.objective_trace.append(cur)
            report.iterations += 1
            if _converged(prev, cur, hp.tol, floor):
                report.converged = True
                if early_stop:
                    break
            prev = cur
    except errors.AlpcError as err:
        report.wall_time_seconds = time.perf_counter() - start
        report.ridge_fallbacks = counter.count
        raise errors.FitError(f"update failed at iteration {report.iterations + 1}: {err}",
                              report) from err
    report.wall_time_seconds = time.perf_counter() - start
    report.ridge_fallbacks = counter.count
    return state, report


def fit_baseline(data, config, early_stop=True, state=None):
    """Ablation baseline: anchor graph with plain ridge regularisation.

    Minimises ``sum_v ||X_v - A_v Z||^2 + gamma ||Z||^2`` by alternating
    ``A_v = X_v Z^T (Z Z^T + eps I)^-1`` and
    ``Z = (sum A_v^T A_v + gamma I)^-1 sum A_v^T X_v``, starting from the
    same initial graph as the full model.
    """
    if config.baseline_gamma is None:
        raise errors.HyperparameterError("baseline-a requires baseline_gamma")
    hp, gamma = config.hp, config.baseline_gamma
    start = time.perf_counter()
    state = init_state(data, hp) if state is None else state.copy()
    report = FitReport(init_seconds=time.perf_counter() - start)
    counter = _RidgeCounter()
    prev = baseline_objective(state, data, gamma)
    floor = _EPS * prev
    k = state.graph.shape[0]
    start = time.perf_counter()
    try:
        for _ in range(hp.max_iter):
            z = state.graph
            gram = z @ z.T + hp.ridge_epsilon * np.eye(k)
            state.anchors = [_solve(gram, (x @ z.T).T, hp, counter).T for x in data.views]
            lhs = gamma * np.eye(k)
            rhs = np.zeros_like(z)
            for x, a in zip(data.views, state.anchors):
                lhs += a.T @ a
                rhs += a.T @ x
            state.graph = _solve(lhs, rhs, hp, counter)
            _check_finite(state)
            cur = baseline_objective(state, data, gamma)
            report.objective_trace.append(cur)
            report.iterations += 1
            if _converged(prev, cur, hp.tol, floor):
                report.converged = True
                if early_stop:
                    break
            prev = cur
    except errors.AlpcError as err:
        report.wall_time_seconds = time.perf_counter() - start
        raise errors.FitError(f"update failed at iteration {report.iterations + 1}: {err}",
                              report) from err
    report.wall_time_seconds = time.perf_counter() - start
    report.ridge_fallbacks = counter.count
    return state, report
