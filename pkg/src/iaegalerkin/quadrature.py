"""Gauss-Legendre rules and mapped integration on [0, T] and on the triangle 0 <= s <= t <= T.

Integrands are called with numpy arrays of nodes. A callable that only
accepts scalars (``math.sin``) is detected and evaluated pointwise.
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .basis import legendre_deriv, legendre_eval
from .errors import ConvergenceError

_MAX_NEWTON = 100


@dataclass(frozen=True)
class QuadRule:
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.flags.writeable = False
        self.weights.flags.writeable = False


def _legendre_root(m, k):
    x = math.cos(math.pi * (k - 0.25) / (m + 0.5))
    for _ in range(_MAX_NEWTON):
        dx = legendre_eval(m, x) / legendre_deriv(m, x)
        x -= dx
        if abs(dx) <= 1e-15:
            return x
    raise ConvergenceError(f"Newton iteration for root {k} of P_{m} did not converge")


@lru_cache(maxsize=None)
def gauss_rule(m):
    """m-point Gauss-Legendre rule on [-1, 1], nodes increasing."""
    if m < 1:
        raise ValueError("quadrature order must be >= 1")
    half = m // 2
    # positive roots from the guesses k = 1..half; the rest follow by symmetry
    pos = np.array([_legendre_root(m, k) for k in range(1, half + 1)])
    mid = np.array([0.0]) if m % 2 else np.empty(0)
    nodes = np.concatenate([-pos, mid, pos[::-1]])
    d = np.array([legendre_deriv(m, x) for x in nodes])
    weights = 2.0 / ((1.0 - nodes**2) * d**2)
    return QuadRule(m, nodes, weights)


def sample(f, *args):
    """Evaluate f on broadcast array arguments, returning a float array."""
    args = np.broadcast_arrays(*[np.asarray(a, dtype=float) for a in args])
    try:
        out = f(*args)
    except TypeError:
        out = np.vectorize(f, otypes=[float])(*args)
    return np.broadcast_to(np.asarray(out, dtype=float), args[0].shape)


def interval_points(T, rule):
    """Nodes on [0, T] and their weights, Jacobian T/2 included."""
    return T * rule.nodes / 2 + T / 2, (T / 2) * rule.weights


def triangle_points(T, rule):
    """Nested-Gauss cubature on {0 <= s <= t <= T}.

    Returns (t, s, w) with t of shape (m, 1) and s, w of shape (m, m): the
    outer node is mapped to [0, T], the inner one to [0, t_i].
    """
    t, wt = interval_points(T, rule)
    t = t[:, None]
    s = t * rule.nodes[None, :] / 2 + t / 2
    w = wt[:, None] * (t / 2) * rule.weights[None, :]
    return t, s, w


def integrate_interval(f, T, rule):
    t, w = interval_points(T, rule)
    return float(np.sum(w * sample(f, t)))


def integrate_triangle(f, T, rule):
    t, s, w = triangle_points(T, rule)
    return float(np.sum(w * sample(f, t, s)))
