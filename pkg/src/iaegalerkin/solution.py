"""Galerkin solutions: solving, evaluation, projection and max-norm errors."""
from dataclasses import dataclass

import numpy as np

from .assembly import DIRECT, INDIRECT, derivative_fields
from .basis import Basis
from .errors import MissingExactSolution
from .linalg import lu_solve
from .quadrature import interval_points, sample

DEFAULT_GRID = 1001


@dataclass(frozen=True)
class GalerkinSolution:
    coeff_x: np.ndarray
    coeff_y: np.ndarray
    basis: Basis
    method: str

    def __post_init__(self):
        for c in (self.coeff_x, self.coeff_y):
            if len(c) != self.basis.n:
                raise ValueError("coefficient count does not match the basis size")
            if not np.all(np.isfinite(c)):
                raise ValueError("non-finite coefficients")

    def __call__(self, t):
        return evaluate(self, t)


@dataclass(frozen=True)
class ErrorReport:
    n: int
    err_x: float
    err_y: float
    method: str
    grid: int


def solve_system(system):
    c = lu_solve(system.A, system.b)
    n = system.n
    return GalerkinSolution(c[:n], c[n:], system.basis, system.method)


def evaluate(sol, t):
    """(x_n(t), y_n(t)); `t` may be an array."""
    V = sol.basis.values(t)
    return np.tensordot(sol.coeff_x, V, 1), np.tensordot(sol.coeff_y, V, 1)


def project(f, basis, rule):
    """Coefficients <f, V_i> of the L2[0, T] orthogonal projection."""
    if rule.order < basis.n + 2:
        raise ValueError(f"projection needs a rule of order >= {basis.n + 2}")
    t, w = interval_points(basis.T, rule)
    return basis.values(t) @ (w * sample(f, t))


def reconstruct(coeffs, basis, t):
    return np.tensordot(np.asarray(coeffs, dtype=float), basis.values(t), 1)


def best_approximation_error(f, basis, rule, grid=DEFAULT_GRID):
    """max over the grid of |P_n f - f|."""
    c = project(f, basis, rule)
    t = np.linspace(0.0, basis.T, grid)
    return float(np.max(np.abs(reconstruct(c, basis, t) - sample(f, t))))


def max_norm_error(sol, exact_x, exact_y, grid=DEFAULT_GRID):
    if exact_x is None or exact_y is None:
        raise MissingExactSolution("no exact solution to compare against")
    if grid < 2:
        raise ValueError("grid must have at least 2 points")
    t = np.linspace(0.0, sol.basis.T, grid)
    x, y = evaluate(sol, t)
    return ErrorReport(
        n=sol.basis.n,
        err_x=float(np.max(np.abs(x - sample(exact_x, t)))),
        err_y=float(np.max(np.abs(y - sample(exact_y, t)))),
        method=sol.method,
        grid=grid,
    )


def _volterra(kernel, u, t, rule):
    """int_0^t kernel(t, s) u(s) ds at each point of `t`, with the rule mapped to [0, t]."""
    t = np.asarray(t, dtype=float)[:, None]
    s = t * (rule.nodes[None, :] + 1) / 2
    w = (t / 2) * rule.weights[None, :]
    return np.sum(w * sample(kernel, t, s) * u(s), axis=1)


def residual_check(sol, p, rule):
    """Projections of the equation residuals onto every basis function.

    Entry j is <r1, V_j> and entry n+j is <r2, V_j>, where r1 is the residual
    of the x-equation and r2 that of the algebraic equation (direct) or of its
    differentiated, second-kind form (indirect). Residuals are arranged like
    the assembled rows (unknowns minus data), so a zero guess returns
    (-<f1, V_j>, <f2, V_j>) for the direct method. Everything is recomputed
    pointwise from the problem functions, independently of the assembly.
    """
    basis = sol.basis
    xs = lambda s: reconstruct(sol.coeff_x, basis, s)
    ys = lambda s: reconstruct(sol.coeff_y, basis, s)
    t, w = interval_points(basis.T, rule)
    x_t, y_t = xs(t), ys(t)

    r1 = (x_t - _volterra(p.k11, xs, t, rule) - _volterra(p.k12, ys, t, rule)
          - sample(p.f1, t))
    if sol.method == DIRECT:
        r2 = (_volterra(p.k21, xs, t, rule) + _volterra(p.k22, ys, t, rule)
              + sample(p.f2, t))
    elif sol.method == INDIRECT:
        dk21, dk22, df2 = derivative_fields(p)
        d = sample(p.k22, t, t)
        r2 = (y_t + (sample(p.k21, t, t) * x_t + sample(df2, t)
                     + _volterra(dk21, xs, t, rule) + _volterra(dk22, ys, t, rule)) / d)
    else:
        raise ValueError(f"unknown method {sol.method!r}")

    V = basis.values(t)
    return np.concatenate([V @ (w * r1), V @ (w * r2)])
