"""Dense matrix primitives used by the block updates.

Matrices are plain 2-D ``float64`` ndarrays. Solves go through LAPACK's
Cholesky routines so that a failing pivot can be reported to the caller.
"""
from typing import NamedTuple

import numpy as np
from scipy.linalg import lapack

from .errors import NonFiniteError, NumericalError, ShapeError, SingularMatrixError


class SvdFactors(NamedTuple):
    u: np.ndarray
    singular_values: np.ndarray
    vt: np.ndarray


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D float64 array."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return a


def gemm(a, b, transpose_a=False, transpose_b=False):
    a = a.T if transpose_a else a
    b = b.T if transpose_b else b
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def cholesky(a):
    """Lower Cholesky factor of a symmetric positive definite matrix.

    Raises
    ------
    SingularMatrixError
        If a pivot is not positive; ``err.pivot`` is the 0-based index.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-8 * scale):
        raise ShapeError("matrix is not symmetric")
    factor, info = lapack.dpotrf(a, lower=1, clean=1)
    if info > 0:
        raise SingularMatrixError(info - 1)
    if info < 0:
        raise NumericalError(f"dpotrf: illegal argument {-info}")
    return factor


def spd_solve(a, b):
    """Solve ``a @ x = b`` for symmetric positive definite ``a``."""
    b = np.asarray(b, dtype=np.float64)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    if b.ndim != 2 or b.shape[0] != np.shape(a)[0]:
        raise ShapeError(f"cannot solve {np.shape(a)} system with right-hand side {b.shape}")
    factor = cholesky(a)
    x, info = lapack.dpotrs(factor, b, lower=1)
    if info != 0:
        raise NumericalError(f"dpotrs: illegal argument {-info}")
    return x[:, 0] if vector else x


def spd_solve_ridge(a, b, epsilon, on_fallback=None):
    """``spd_solve`` that retries once with ``epsilon * I`` added to ``a``."""
    try:
        return spd_solve(a, b)
    except SingularMatrixError as err:
        if on_fallback is not None:
            on_fallback(err)
        return spd_solve(a + epsilon * np.eye(a.shape[0]), b)


def thin_svd(a):
    """Economy SVD with a fixed sign convention.

    Each left singular vector is flipped so that its largest-magnitude
    entry is non-negative; the matching row of ``vt`` is flipped with it.
    """
    a = as_matrix(a)
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as err:
        raise NumericalError(f"SVD did not converge: {err}") from err
    if u.shape[1]:
        pivots = np.argmax(np.abs(u), axis=0)
        signs = np.where(u[pivots, np.arange(u.shape[1])] < 0, -1.0, 1.0)
        u = u * signs
        vt = vt * signs[:, None]
    return SvdFactors(u, s, vt)


def polar_factor(a):
    """Orthonormal factor ``U V^T`` of ``a = U S V^T``."""
    f = thin_svd(a)
    return f.u @ f.vt
