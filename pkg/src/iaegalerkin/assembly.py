"""Assembly of the 2n x 2n Galerkin systems.

Unknowns are ordered [x_0..x_{n-1}, y_0..y_{n-1}], the shifted-Legendre
coefficients of the two unknown functions. Rows 0..n-1 always come from
the second-kind equation for x. Rows n..2n-1 come from the algebraic
(first-kind) equation in the direct method, and from its t-derivative
solved for y in the indirect method.
"""
from dataclasses import dataclass
import logging

import numpy as np

from .basis import Basis
from .errors import MissingDerivatives
from .quadrature import interval_points, sample, triangle_points

log = logging.getLogger(__name__)

DIRECT = "direct"
INDIRECT = "indirect"


@dataclass(frozen=True)
class GalerkinSystem:
    A: np.ndarray
    b: np.ndarray
    n: int
    method: str
    basis: Basis


class _Grid:
    """Basis values at the interval and triangle nodes of one rule."""

    def __init__(self, basis, rule):
        T = basis.T
        self.t, self.wt = interval_points(T, rule)
        self.tt, self.ss, self.ws = triangle_points(T, rule)
        self.Vt = basis.values(self.t)           # (n, m)
        self.Vs = basis.values(self.ss)          # (n, m, m)

    def double(self, kernel_values):
        """G[j, i] = int_0^T int_0^t K(t,s) V_i(s) V_j(t) ds dt."""
        return np.einsum("ab,ab,iab,ja->ji", self.ws, kernel_values, self.Vs, self.Vt)

    def single(self, weight_values):
        """M[j, i] = int_0^T w(t) V_i(t) V_j(t) dt."""
        return np.einsum("a,a,ia,ja->ji", self.wt, weight_values, self.Vt, self.Vt)

    def load(self, values):
        """<g, V_j> for g sampled at the interval nodes."""
        return self.Vt @ (self.wt * values)

    def kernel(self, k):
        return sample(k, self.tt, self.ss)


def _first_block(p, grid, n):
    A = np.zeros((2 * n, 2 * n))
    b = np.zeros(2 * n)
    A[:n, :n] = np.eye(n) - grid.double(grid.kernel(p.k11))
    A[:n, n:] = -grid.double(grid.kernel(p.k12))
    b[:n] = grid.load(sample(p.f1, grid.t))
    return A, b


def assemble_direct(p, n, rule):
    basis = Basis(p.T, n)
    grid = _Grid(basis, rule)
    A, b = _first_block(p, grid, n)
    A[n:, :n] = grid.double(grid.kernel(p.k21))
    A[n:, n:] = grid.double(grid.kernel(p.k22))
    b[n:] = -grid.load(sample(p.f2, grid.t))
    return GalerkinSystem(A, b, n, DIRECT, basis)


def fd_partial_t(f):
    """Central difference in t with step 1e-6 * max(1, |t|)."""
    def deriv(t, s=None):
        t = np.asarray(t, dtype=float)
        h = 1e-6 * np.maximum(1.0, np.abs(t))
        if s is None:
            return (sample(f, t + h) - sample(f, t - h)) / (2 * h)
        return (sample(f, t + h, s) - sample(f, t - h, s)) / (2 * h)
    return deriv


def derivative_fields(p, fd_fallback=False):
    """(dk21/dt, dk22/dt, f2') from the problem, or finite differences if allowed."""
    fields = (p.dk21_dt, p.dk22_dt, p.df2_dt)
    if None not in fields:
        return fields
    if not fd_fallback:
        raise MissingDerivatives(
            f"{p.name}: the indirect method needs dk21/dt, dk22/dt and f2'")
    log.warning("%s: derivatives by finite differences; indirect accuracy "
                "saturates near 1e-9", p.name)
    return tuple(d if d is not None else fd_partial_t(src)
                 for d, src in zip(fields, (p.k21, p.k22, p.f2)))


def assemble_indirect(p, n, rule, fd_fallback=False):
    dk21, dk22, df2 = derivative_fields(p, fd_fallback)
    basis = Basis(p.T, n)
    grid = _Grid(basis, rule)
    A, b = _first_block(p, grid, n)
    # 1/k22(t,t) at the outer node, shared by every term of the second row block
    inv_diag_tri = 1.0 / p.diagonal(p.k22, grid.tt)            # (m, 1)
    inv_diag = 1.0 / p.diagonal(p.k22, grid.t)                 # (m,)
    A[n:, :n] = (grid.single(p.diagonal(p.k21, grid.t) * inv_diag)
                 + grid.double(inv_diag_tri * grid.kernel(dk21)))
    A[n:, n:] = np.eye(n) + grid.double(inv_diag_tri * grid.kernel(dk22))
    b[n:] = -grid.load(sample(df2, grid.t) * inv_diag)
    return GalerkinSystem(A, b, n, INDIRECT, basis)


def assemble(p, n, rule, method, fd_fallback=False):
    if method == DIRECT:
        return assemble_direct(p, n, rule)
    if method == INDIRECT:
        return assemble_indirect(p, n, rule, fd_fallback)
    raise ValueError(f"unknown method {method!r}")
