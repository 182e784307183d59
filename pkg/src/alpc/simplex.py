import numpy as np


def simplex_project(v):
    """Euclidean projection of a vector onto the probability simplex.

    Sort-and-threshold: find the largest ``rho`` with
    ``u[rho] > (sum(u[:rho + 1]) - 1) / (rho + 1)`` on the descending sort
    ``u`` and shift every entry down by that threshold.
    """
    v = np.asarray(v, dtype=np.float64)
    return project_columns(v[:, None])[:, 0]


def project_columns(m):
    """Project every column of ``m`` onto the probability simplex."""
    m = np.asarray(m, dtype=np.float64)
    k = m.shape[0]
    u = -np.sort(-m, axis=0)
    css = np.cumsum(u, axis=0) - 1.0
    ind = np.arange(1, k + 1)[:, None]
    cond = u - css / ind > 0
    rho = k - 1 - np.argmax(cond[::-1], axis=0)
    theta = css[rho, np.arange(m.shape[1])] / (rho + 1)
    out = np.maximum(m - theta, 0.0)
    # Clean up the last ulp so columns sum to one.
    out /= out.sum(axis=0, keepdims=True)
    return out
