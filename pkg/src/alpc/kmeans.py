"""Lloyd's k-means with k-means++ seeding, run on the columns of a matrix."""
import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

MAX_LLOYD_ITER = 300


@dataclass
class KmeansResult:
    labels: np.ndarray
    centroids: np.ndarray  # dim x k
    inertia: float
    restarts_run: int
    empty_repairs: int = 0


def assignment_cost(points, labels, centroids):
    """Sum of squared distances from each column to its assigned centroid."""
    diff = points - centroids[:, labels]
    return float(np.einsum("ij,ij->", diff, diff))


def _sq_distances(points, centroids):
    # n x k matrix of squared distances, clipped against cancellation.
    d = (np.einsum("ij,ij->j", points, points)[:, None]
         - 2.0 * points.T @ centroids
         + np.einsum("ij,ij->j", centroids, centroids)[None, :])
    return np.maximum(d, 0.0)


def kmeans_plus_plus(points, k, rng):
    """Pick ``k`` initial centroids by D^2 sampling."""
    dim, n = points.shape
    centroids = np.empty((dim, k))
    first = rng.integers(n)
    centroids[:, 0] = points[:, first]
    closest = _sq_distances(points, centroids[:, :1])[:, 0]
    for j in range(1, k):
        total = closest.sum()
        if total <= 0.0:
            idx = rng.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(closest), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        centroids[:, j] = points[:, idx]
        closest = np.minimum(closest, _sq_distances(points, centroids[:, j:j + 1])[:, 0])
    return centroids


def _update_centroids(points, labels, k):
    dim = points.shape[0]
    counts = np.bincount(labels, minlength=k)
    sums = np.zeros((dim, k))
    np.add.at(sums.T, labels, points.T)
    centroids = np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)
    return centroids, counts


def lloyd(points, centroids, max_iter=MAX_LLOYD_ITER):
    """Run Lloyd iterations from ``centroids`` until assignments stop changing.

    Returns ``(labels, centroids, inertia_history, empty_repairs)``; the
    history holds the assignment cost after each assignment step.
    """
    k = centroids.shape[1]
    labels = None
    history = []
    repairs = 0
    for _ in range(max_iter):
        dist = _sq_distances(points, centroids)
        new_labels = np.argmin(dist, axis=1)  # ties go to the lowest index
        history.append(assignment_cost(points, new_labels, centroids))
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        centroids, counts = _update_centroids(points, labels, k)
        for j in np.flatnonzero(counts == 0):
            # Move the point farthest from its centroid into the empty cluster.
            resid = points - centroids[:, labels]
            far = np.einsum("ij,ij->j", resid, resid)
            far[counts[labels] <= 1] = -1.0
            i = int(np.argmax(far))
            labels[i] = j
            centroids, counts = _update_centroids(points, labels, k)
            repairs += 1
            logger.debug("repaired empty cluster %d with point %d", j, i)
    return labels, centroids, history, repairs


def kmeans(points, k, restarts=50, seed=0):
    """Best-of-``restarts`` k-means on the columns of ``points`` (dim x n).

    Each restart draws its own generator from ``SeedSequence(seed)``, so
    the first ``r`` restarts are identical for any ``restarts >= r``.
    """
    points = np.asarray(points, dtype=np.float64)
    dim, n = points.shape
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        labels, centroids, _, repairs = lloyd(points, kmeans_plus_plus(points, k, rng))
        inertia = assignment_cost(points, labels, centroids)
        if best is None or inertia < best.inertia:
            best = KmeansResult(labels, centroids, inertia, restarts, repairs)
    return best
