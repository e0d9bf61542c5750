"""Dense LU factorization with partial pivoting."""
import logging

import numpy as np

from .errors import SingularMatrix

log = logging.getLogger(__name__)

PIVOT_TOL = 1e-13


def lu_factor(A):
    """Factor P A = L U in place on a copy.

    Returns (lu, perm) where `lu` holds U on and above the diagonal and the
    unit-lower multipliers below it, and `perm[k]` is the original row now
    at position k.
    """
    lu = np.array(A, dtype=float, copy=True)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {lu.shape}")
    if not np.all(np.isfinite(lu)):
        raise ValueError("matrix has non-finite entries")
    m = lu.shape[0]
    perm = np.arange(m)
    threshold = PIVOT_TOL * np.max(np.abs(lu), initial=0.0)
    for k in range(m):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if not abs(lu[p, k]) > threshold:
            raise SingularMatrix(f"pivot {k} has magnitude {abs(lu[p, k]):.3e}")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm


def lu_substitute(lu, perm, b):
    y = np.asarray(b, dtype=float)[perm].copy()
    m = len(y)
    for i in range(1, m):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(m - 1, -1, -1):
        y[i] = (y[i] - lu[i, i + 1:] @ y[i + 1:]) / lu[i, i]
    return y


def lu_solve(A, b):
    b = np.asarray(b, dtype=float)
    A = np.asarray(A, dtype=float)
    if b.shape != (A.shape[0],):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({A.shape[0]},)")
    lu, perm = lu_factor(A)
    x = lu_substitute(lu, perm, b)
    if log.isEnabledFor(logging.DEBUG):
        log.debug("solved %dx%d system, condition estimate %.3e",
                  len(b), len(b), _condition_from_lu(A, lu, perm))
    return x


def _condition_from_lu(A, lu, perm):
    probe = lu_substitute(lu, perm, np.ones(A.shape[0]))
    return np.max(np.sum(np.abs(A), axis=1)) * np.max(np.abs(probe))


def condition_estimate(A):
    """Cheap infinity-norm estimate ||A|| * ||A^-1 e|| with e = (1, ..., 1)."""
    lu, perm = lu_factor(A)
    return float(_condition_from_lu(np.asarray(A, dtype=float), lu, perm))
