"""Linear index-1 integral-algebraic problems.

The model is the coupled pair

    x(t) = f1(t) + int_0^t k11(t,s) x(s) + k12(t,s) y(s) ds
       0 = f2(t) + int_0^t k21(t,s) x(s) + k22(t,s) y(s) ds

with f2(0) = 0 and k22(t,t) bounded away from zero on [0, T].
"""
from dataclasses import dataclass, field, replace
import logging
import re
from typing import Callable, Optional

import numpy as np

from .errors import (ConsistencyViolation, ExpressionSyntaxError, Index1Violation,
                     ProblemFormatError, UnknownProblem)
from .expr import differentiate, parse_expression
from .quadrature import sample

log = logging.getLogger(__name__)

DIAGONAL_TOL = 1e-8
CONSISTENCY_TOL = 1e-10

KERNEL_KEYS = ("k11", "k12", "k21", "k22")
DATA_KEYS = ("f1", "f2")
DERIVATIVE_KEYS = ("dk21_dt", "dk22_dt", "df2_dt")
OPTIONAL_EXPR_KEYS = ("exact_x", "exact_y") + DERIVATIVE_KEYS


@dataclass(frozen=True)
class IAEProblem:
    k11: Callable
    k12: Callable
    k21: Callable
    k22: Callable
    f1: Callable
    f2: Callable
    T: float = 1.0
    name: str = "problem"
    dk21_dt: Optional[Callable] = None
    dk22_dt: Optional[Callable] = None
    df2_dt: Optional[Callable] = None
    exact_x: Optional[Callable] = None
    exact_y: Optional[Callable] = None
    # expression text for every field that came from the DSL
    sources: dict = field(default_factory=dict, compare=False)

    @property
    def has_derivatives(self):
        return None not in (self.dk21_dt, self.dk22_dt, self.df2_dt)

    @property
    def has_exact(self):
        return self.exact_x is not None and self.exact_y is not None

    def with_horizon(self, T):
        if not T > 0:
            raise ProblemFormatError("T must be positive")
        return replace(self, T=float(T))

    def diagonal(self, kernel, t):
        """kernel(t, t) as an array."""
        return sample(kernel, t, t)


def from_expressions(*, T=1.0, name="problem", **texts):
    """Build a problem from DSL strings; missing derivatives are derived symbolically."""
    parsed = {}
    for key, text in texts.items():
        if text is None:
            continue
        parsed[key] = parse_expression(text)
    missing = [k for k in KERNEL_KEYS + DATA_KEYS if k not in parsed]
    if missing:
        raise ProblemFormatError(f"missing required key {missing[0]!r}")
    for key, source, var in (("dk21_dt", "k21", "t"), ("dk22_dt", "k22", "t"),
                             ("df2_dt", "f2", "t")):
        if key not in parsed:
            parsed[key] = differentiate(parsed[source], var)
    sources = {k: str(v) if k not in texts or texts[k] is None else texts[k]
               for k, v in parsed.items()}
    return IAEProblem(T=float(T), name=name, sources=sources, **parsed)


def validate_index1(p, grid_points=256):
    """Check the index-1 sufficient conditions; return min |k22(t,t)| on the grid."""
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    t = np.linspace(0.0, p.T, grid_points)
    k0 = float(np.min(np.abs(p.diagonal(p.k22, t))))
    if not k0 > DIAGONAL_TOL:
        raise Index1Violation(
            f"{p.name}: |k22(t,t)| drops to {k0:.3e} on [0, {p.T}]; the system is not index 1")
    f20 = float(sample(p.f2, np.array(0.0)))
    if abs(f20) > CONSISTENCY_TOL:
        raise ConsistencyViolation(f"{p.name}: f2(0) = {f20:.3e}, must vanish")
    return k0


# ---------------------------------------------------------------- built-ins

EXAMPLE1 = dict(
    k11="s+t",
    k12="s^2+t^2",
    k21="s-t^2",
    k22="s+t+1",
    f1="-t-2*sin(t)*t^2+2*sin(t)",
    f2="t^2-2*sin(t)+cos(t)*t-cos(t)*t^2+1-cos(t)-2*sin(t)*t",
    exact_x="sin(t)",
    exact_y="cos(t)",
)

# Same kernels as example1, data manufactured for x = t, y = 1 - t.
POLYNOMIAL = dict(
    EXAMPLE1,
    f1="3*t^4/4-13*t^3/6+t",
    f2="t^4/2+t^3/2-t^2-t",
    exact_x="t",
    exact_y="1-t",
)


def builtin_example1():
    return from_expressions(T=1.0, name="example1", **EXAMPLE1)


def builtin_polynomial():
    return from_expressions(T=1.0, name="polynomial", **POLYNOMIAL)


BUILTINS = {
    "example1": builtin_example1,
    "polynomial": builtin_polynomial,
}


def get_builtin(name):
    try:
        return BUILTINS[name]()
    except KeyError:
        raise UnknownProblem(
            f"unknown problem {name!r} (choose from {', '.join(sorted(BUILTINS))})") from None


# ------------------------------------------------------------ problem files

_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(.*?)\s*$")
_KNOWN = set(KERNEL_KEYS + DATA_KEYS + OPTIONAL_EXPR_KEYS + ("T", "name"))


def _strip_comment(line):
    # '#' inside a quoted value is kept
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


def parse_problem_text(text, default_name="problem"):
    """Parse the ``key = value`` problem format. Does not validate."""
    values, lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _LINE.match(line)
        if m is None:
            raise ProblemFormatError("expected 'key = value'", lineno)
        key, value = m.groups()
        if key not in _KNOWN:
            raise ProblemFormatError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ProblemFormatError(f"duplicate key {key!r}", lineno)
        values[key], lines[key] = value, lineno

    for key in KERNEL_KEYS + DATA_KEYS + ("T",):
        if key not in values:
            raise ProblemFormatError(f"missing required key {key!r}")

    try:
        T = float(values.pop("T"))
    except ValueError:
        raise ProblemFormatError("T must be a decimal number", lines["T"]) from None
    if not (np.isfinite(T) and T > 0):
        raise ProblemFormatError("T must be positive", lines["T"])

    name = values.pop("name", default_name)
    if len(name) >= 2 and name[0] == name[-1] == '"':
        name = name[1:-1]

    texts = {}
    for key, value in values.items():
        if not (len(value) >= 2 and value[0] == value[-1] == '"'):
            raise ProblemFormatError(f"value of {key!r} must be a double-quoted expression",
                                     lines[key])
        expr_text = value[1:-1]
        try:
            parse_expression(expr_text)
        except ExpressionSyntaxError as exc:
            raise ProblemFormatError(f"bad expression for {key!r}: {exc}", lines[key]) from None
        texts[key] = expr_text
    return from_expressions(T=T, name=name, **texts)


def load_problem(path):
    """Read, parse and validate a problem file. OSError propagates."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stem = re.sub(r"\.[^.]*$", "", str(path).replace("\\", "/").rsplit("/", 1)[-1])
    p = parse_problem_text(text, default_name=stem)
    k0 = validate_index1(p)
    log.debug("loaded %s from %s, k0 = %.6g", p.name, path, k0)
    return p
