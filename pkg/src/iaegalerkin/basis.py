"""Legendre polynomials and the orthonormal shifted Legendre basis on [0, T]."""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_EDGE_TOL = 1e-12


def _check_closed(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _EDGE_TOL):
        raise DomainError(f"Legendre argument outside [-1, 1]: {x!r}")
    return np.clip(x, -1.0, 1.0)


def _recurrence(degree, x):
    # returns (P_{degree-1}(x), P_degree(x)); P_{-1} is taken as 0
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    for k in range(degree):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p_prev, p


def legendre_eval(degree, x):
    """Classical Legendre polynomial P_degree(x) by the three-term recurrence.

    `x` may be a scalar or an array; tiny overshoot beyond [-1, 1] is clamped.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    xc = _check_closed(x)
    _, p = _recurrence(degree, xc)
    return p if np.ndim(p) else float(p)


def legendre_deriv(degree, x):
    """P'_degree(x) on the open interval, from (1-x^2) P'_k = k (P_{k-1} - x P_k)."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1.0):
        raise DomainError("legendre_deriv requires |x| < 1")
    p_prev, p = _recurrence(degree, x)
    d = degree * (p_prev - x * p) / (1.0 - x * x)
    return d if np.ndim(d) else float(d)


def legendre_table(count, x):
    """Stack P_0(x), ..., P_{count-1}(x) along a new leading axis."""
    xc = _check_closed(x)
    out = np.empty((count,) + xc.shape)
    p_prev = np.zeros_like(xc)
    p = np.ones_like(xc)
    for k in range(count):
        out[k] = p
        p_prev, p = p, ((2 * k + 1) * xc * p - k * p_prev) / (k + 1)
    return out


@dataclass(frozen=True)
class Basis:
    """First `n` orthonormal shifted Legendre functions on [0, T].

    Mode i (0-based) is sqrt((2i+1)/T) * P_i((2t - T)/T), a polynomial of
    exact degree i with unit L2[0, T] norm.
    """

    T: float
    n: int

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("T must be positive")
        if self.n < 1:
            raise ValueError("basis needs at least one function")

    def _reference(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < -_EDGE_TOL * self.T) or np.any(t > self.T * (1 + _EDGE_TOL)):
            raise DomainError(f"t outside [0, {self.T}]")
        return (2.0 * t - self.T) / self.T

    def scale(self, i):
        return np.sqrt((2 * i + 1) / self.T)

    def values(self, t):
        """Array of shape (n, *t.shape) holding every basis function at t."""
        table = legendre_table(self.n, self._reference(t))
        scales = np.sqrt((2 * np.arange(self.n) + 1) / self.T)
        return table * scales.reshape((-1,) + (1,) * (table.ndim - 1))


def shifted_basis_eval(basis, i, t):
    if not 0 <= i < basis.n:
        raise IndexError(f"basis index {i} out of range 0..{basis.n - 1}")
    v = basis.scale(i) * legendre_eval(i, basis._reference(t))
    return v if np.ndim(v) else float(v)
