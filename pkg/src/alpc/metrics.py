"""External clustering metrics: ACC, NMI, purity and pairwise F-score."""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass
class ContingencyTable:
    counts: np.ndarray  # predicted clusters x true classes
    n: int


def _labels(pred, truth):
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise ValueError(f"label arrays differ in length: {pred.size} vs {truth.size}")
    if pred.size == 0:
        raise ValueError("label arrays are empty")
    return pred, truth


def contingency(pred, truth):
    pred, truth = _labels(pred, truth)
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    counts = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(counts, (p, t), 1)
    return ContingencyTable(counts, int(pred.size))


def hungarian(cost):
    """Permutation ``perm`` minimising ``sum(cost[i, perm[i]])``."""
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValueError(f"cost matrix must be square, got {cost.shape}")
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix has non-finite entries")
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(cost.shape[0], dtype=np.int64)
    perm[rows] = cols
    return perm


def accuracy(pred, truth):
    """Fraction of samples correct under the best one-to-one relabelling."""
    table = contingency(pred, truth)
    k = max(table.counts.shape)
    square = np.zeros((k, k))
    square[:table.counts.shape[0], :table.counts.shape[1]] = table.counts
    perm = hungarian(-square)
    return float(square[np.arange(k), perm].sum() / table.n)


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log(p)))


def nmi(pred, truth):
    """Mutual information normalised by the geometric mean of the entropies."""
    table = contingency(pred, truth)
    counts, n = table.counts, table.n
    h_pred = _entropy(counts.sum(axis=1), n)
    h_true = _entropy(counts.sum(axis=0), n)
    if h_pred == 0.0 or h_true == 0.0:
        return 1.0 if h_pred == h_true else 0.0
    joint = counts / n
    outer = np.outer(counts.sum(axis=1), counts.sum(axis=0)) / n ** 2
    nz = joint > 0
    mi = float(np.sum(joint[nz] * np.log(joint[nz] / outer[nz])))
    return min(1.0, max(0.0, mi / np.sqrt(h_pred * h_true)))


def purity(pred, truth):
    table = contingency(pred, truth)
    return float(table.counts.max(axis=1).sum() / table.n)


def _pairs(x):
    return x * (x - 1) // 2


def pairwise_f_score(pred, truth):
    """F1 over sample pairs, counting a pair positive when co-clustered."""
    table = contingency(pred, truth)
    if table.n < 2:
        raise ValueError("pairwise F-score needs at least two samples")
    both = int(_pairs(table.counts).sum())
    pred_pairs = int(_pairs(table.counts.sum(axis=1)).sum())
    true_pairs = int(_pairs(table.counts.sum(axis=0)).sum())
    precision = both / pred_pairs if pred_pairs else 0.0
    recall = both / true_pairs if true_pairs else 0.0
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def evaluate(pred, truth):
    """All four metrics as a dict keyed ``acc``, ``nmi``, ``purity``, ``f_score``."""
    return {
        "acc": accuracy(pred, truth),
        "nmi": nmi(pred, truth),
        "purity": purity(pred, truth),
        "f_score": pairwise_f_score(pred, truth),
    }
