"""Value types for datasets, hyperparameters, solver state and reports."""
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from . import errors


@dataclass
class MultiViewDataset:
    """``l`` feature matrices over the same ``n`` samples.

    Each view is stored as a ``d_v x n`` array, so sample ``i`` is column
    ``i`` of every view. ``labels`` holds 0-based cluster ids when known.
    """

    views: List[np.ndarray]
    n_clusters: int
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        self.views = [np.asarray(x, dtype=np.float64) for x in self.views]
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)

    @property
    def n_samples(self):
        return self.views[0].shape[1] if self.views else 0

    @property
    def n_views(self):
        return len(self.views)

    @property
    def view_dims(self):
        return [x.shape[0] for x in self.views]

    def __eq__(self, other):
        if not isinstance(other, MultiViewDataset):
            return NotImplemented
        if self.n_clusters != other.n_clusters or len(self.views) != len(other.views):
            return False
        if (self.labels is None) != (other.labels is None):
            return False
        if self.labels is not None and not np.array_equal(self.labels, other.labels):
            return False
        return all(a.shape == b.shape and np.array_equal(a, b)
                   for a, b in zip(self.views, other.views))


@dataclass
class Hyperparams:
    lambda1: float = 1.0
    lambda2: float = 0.1
    anchors_per_cluster: int = 2
    max_iter: int = 100
    tol: float = 1e-6
    seed: int = 0
    simplex_projection: bool = False
    reorthonormalize_anchors: bool = False
    ridge_epsilon: float = 1e-8
    kmeans_restarts: int = 50

    def to_dict(self):
        return asdict(self)


@dataclass
class ModelState:
    anchors: List[np.ndarray]
    bases: List[np.ndarray]
    graph: np.ndarray
    anchor_indicator: np.ndarray
    data_indicator: np.ndarray

    def copy(self):
        return ModelState(
            anchors=[a.copy() for a in self.anchors],
            bases=[u.copy() for u in self.bases],
            graph=self.graph.copy(),
            anchor_indicator=self.anchor_indicator.copy(),
            data_indicator=self.data_indicator.copy(),
        )

    def check_shapes(self, data, hp):
        """Raise ``ShapeError`` unless every block matches ``data`` and ``hp``."""
        n, c = data.n_samples, data.n_clusters
        k = hp.anchors_per_cluster * c
        expected = [("graph", self.graph, (k, n)),
                    ("anchor_indicator", self.anchor_indicator, (c, k)),
                    ("data_indicator", self.data_indicator, (c, n))]
        if len(self.anchors) != data.n_views or len(self.bases) != data.n_views:
            raise errors.ShapeError(
                f"state has {len(self.anchors)} anchor / {len(self.bases)} basis "
                f"matrices for {data.n_views} views")
        for v, d in enumerate(data.view_dims):
            expected.append((f"anchors[{v}]", self.anchors[v], (d, k)))
            expected.append((f"bases[{v}]", self.bases[v], (d, c)))
        for name, arr, shape in expected:
            if arr.shape != shape:
                raise errors.ShapeError(f"{name} has shape {arr.shape}, expected {shape}")


@dataclass
class FitReport:
    objective_trace: List[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    wall_time_seconds: float = 0.0
    init_seconds: float = 0.0
    ridge_fallbacks: int = 0

    def to_dict(self):
        return asdict(self)


@dataclass
class ClusteringResult:
    predicted_labels: np.ndarray
    acc: Optional[float] = None
    nmi: Optional[float] = None
    purity: Optional[float] = None
    f_score: Optional[float] = None

    def metrics(self):
        return {"acc": self.acc, "nmi": self.nmi, "purity": self.purity, "f_score": self.f_score}


def validate_dataset(dataset):
    if dataset.n_views < 1:
        raise errors.ViewShapeError("dataset has no views")
    n = dataset.n_samples
    for v, x in enumerate(dataset.views):
        if x.ndim != 2:
            raise errors.ViewShapeError(f"view {v} is not a matrix (shape {x.shape})")
        if x.shape[1] != n:
            raise errors.ViewShapeError(
                f"view {v} has {x.shape[1]} samples, view 0 has {n}")
        if x.shape[0] < 1:
            raise errors.ViewShapeError(f"view {v} has no features")
        if not np.all(np.isfinite(x)):
            raise errors.NonFiniteError(f"view {v} has non-finite entries")
    c = dataset.n_clusters
    if c < 2:
        raise errors.ClusterCountError(f"need at least 2 clusters, got {c}")
    if n < c:
        raise errors.ClusterCountError(f"{n} samples cannot form {c} clusters")
    if dataset.labels is not None:
        labels = dataset.labels
        if labels.shape != (n,):
            raise errors.ViewShapeError(f"labels have shape {labels.shape}, expected ({n},)")
        if labels.size and (labels.min() < 0 or labels.max() >= c):
            raise errors.LabelRangeError(f"labels must lie in [0, {c})")


def validate_hyperparams(hp):
    for name in ("lambda1", "lambda2", "tol", "ridge_epsilon"):
        value = getattr(hp, name)
        if not (np.isfinite(value) and value > 0):
            raise errors.HyperparameterError(f"{name} must be positive, got {value}")
    for name in ("anchors_per_cluster", "kmeans_restarts"):
        if getattr(hp, name) < 1:
            raise errors.HyperparameterError(f"{name} must be at least 1")
    if hp.max_iter < 0:
        raise errors.HyperparameterError("max_iter must be non-negative")


def validate(dataset, hp):
    """Check every dataset and hyperparameter invariant.

    Each violation raises its own ``ValidationError`` subclass.
    """
    validate_dataset(dataset)
    validate_hyperparams(hp)
    budget = hp.anchors_per_cluster * dataset.n_clusters
    if budget > dataset.n_samples:
        raise errors.AnchorBudgetError(
            f"{hp.anchors_per_cluster} anchors x {dataset.n_clusters} clusters = {budget} "
            f"exceeds {dataset.n_samples} samples")
