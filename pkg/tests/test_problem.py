import numpy as np
import pytest
import sympy as sp

from iaegalerkin.errors import (ConsistencyViolation, Index1Violation, ProblemFormatError,
                                UnknownProblem)
from iaegalerkin.problem import (EXAMPLE1, POLYNOMIAL, builtin_example1, from_expressions,
                                 get_builtin, load_problem, parse_problem_text,
                                 validate_index1)
from iaegalerkin.quadrature import gauss_rule, integrate_interval

t, s = sp.symbols("t s")


def _sym(text):
    return sp.sympify(text.replace("^", "**"))


def _data_from_solution(fields, x, y):
    """Brute-force substitution: the data that makes (x, y) an exact solution."""
    xs, ys = x.subs(t, s), y.subs(t, s)
    k = {key: _sym(fields[key]) for key in ("k11", "k12", "k21", "k22")}
    f1 = x - sp.integrate(k["k11"] * xs + k["k12"] * ys, (s, 0, t))
    f2 = -sp.integrate(k["k21"] * xs + k["k22"] * ys, (s, 0, t))
    return f1, f2


@pytest.mark.parametrize("fields", [EXAMPLE1, POLYNOMIAL], ids=["example1", "polynomial"])
def test_builtin_data_reproduce_exact_solution(fields):
    f1, f2 = _data_from_solution(fields, _sym(fields["exact_x"]), _sym(fields["exact_y"]))
    assert sp.simplify(f1 - _sym(fields["f1"])) == 0
    assert sp.simplify(f2 - _sym(fields["f2"])) == 0


def test_printed_k31_is_k22():
    # the second-equation kernel printed as "k31" must be k22 = s+t+1: with that
    # reading the printed f2 is reproduced exactly, with any other constant it is not
    c = sp.Symbol("c")
    fields = dict(EXAMPLE1, k22=f"s+t+c")
    _, f2 = _data_from_solution(fields, sp.sin(t), sp.cos(t))
    solutions = sp.solve(sp.expand(sp.simplify(f2 - _sym(EXAMPLE1["f2"]))).subs(t, 1), c)
    assert solutions == [1]


def test_example1_fields():
    p = builtin_example1()
    assert p.T == 1.0 and p.name == "example1"
    assert p.f2(0.0) == 0.0
    assert p.k22(0.3, 0.2) == pytest.approx(1.5)
    assert p.exact_x(0.4) == pytest.approx(np.sin(0.4))
    assert p.has_derivatives and p.has_exact
    assert p.dk21_dt(0.5, 0.3) == pytest.approx(-1.0)
    assert p.dk22_dt(0.5, 0.3) == pytest.approx(1.0)
    df2 = sp.lambdify(t, sp.diff(_sym(EXAMPLE1["f2"]), t))
    assert p.df2_dt(0.7) == pytest.approx(df2(0.7), rel=1e-14)


@pytest.mark.parametrize("t0, row", [(0.5, 1), (0.7, 2)])
def test_example1_residuals_vanish(example1, t0, row):
    rule = gauss_rule(30)
    p = example1

    def vol(kx, ky):
        return integrate_interval(lambda r: kx(t0, r) * np.sin(r) + ky(t0, r) * np.cos(r),
                                  t0, rule)

    if row == 1:
        res = np.sin(t0) - p.f1(t0) - vol(p.k11, p.k12)
    else:
        res = p.f2(t0) + vol(p.k21, p.k22)
    assert abs(res) <= 1e-12


def test_validate_example1(example1):
    k0 = validate_index1(example1)
    assert k0 == pytest.approx(1.0)
    assert k0 >= 0.999


def test_validate_consistency_violation():
    p = from_expressions(**dict(EXAMPLE1, f2=EXAMPLE1["f2"] + "+1"))
    with pytest.raises(ConsistencyViolation):
        validate_index1(p)


def test_validate_index1_violation():
    p = from_expressions(**dict(EXAMPLE1, k22="s-t"))
    with pytest.raises(Index1Violation):
        validate_index1(p)


def test_validate_grid_points():
    with pytest.raises(ValueError):
        validate_index1(builtin_example1(), grid_points=1)


def test_index1_violation_inside_interval():
    # k22(t,t) = 1 - 2t vanishes at t = 1/2: a 257-point grid lands on it, 256 does not
    p = from_expressions(**dict(EXAMPLE1, k22="1-2*t"))
    assert validate_index1(p, grid_points=256) < 1e-2
    with pytest.raises(Index1Violation):
        validate_index1(p, grid_points=257)


def test_registry():
    assert get_builtin("example1").name == "example1"
    assert get_builtin("polynomial").exact_x(0.3) == pytest.approx(0.3)
    with pytest.raises(UnknownProblem, match="unknown problem"):
        get_builtin("nosuch")


def _file_text(**overrides):
    fields = dict(EXAMPLE1, **overrides)
    lines = ["# example 1", 'name = "example1"', "T = 1"]
    for key, value in fields.items():
        if value is not None:
            lines.append(f'{key} = "{value}"  # comment')
    return "\n".join(lines) + "\n"


def test_load_round_trip(tmp_path):
    path = tmp_path / "ex1.iae"
    path.write_text(_file_text(), encoding="utf-8")
    p = load_problem(path)
    q = builtin_example1()
    tt = np.linspace(0, 1, 17)
    ts, ss = np.meshgrid(tt, tt, indexing="ij")
    for key in ("k11", "k12", "k21", "k22", "dk21_dt", "dk22_dt"):
        np.testing.assert_allclose(getattr(p, key)(ts, ss), getattr(q, key)(ts, ss),
                                   rtol=0, atol=1e-14)
    for key in ("f1", "f2", "df2_dt", "exact_x", "exact_y"):
        np.testing.assert_allclose(getattr(p, key)(tt), getattr(q, key)(tt), rtol=0, atol=1e-14)
    assert p.name == "example1" and p.T == 1.0


def test_load_missing_key(tmp_path):
    path = tmp_path / "bad.iae"
    path.write_text(_file_text(k22=None))
    with pytest.raises(ProblemFormatError, match="k22"):
        load_problem(path)


def test_load_negative_horizon(tmp_path):
    path = tmp_path / "bad.iae"
    path.write_text(_file_text().replace("T = 1", "T = -1"))
    with pytest.raises(ProblemFormatError, match="T must be positive") as exc:
        load_problem(path)
    assert exc.value.line == 3


def test_load_bad_expression_reports_line():
    text = _file_text().replace('k12 = "s^2+t^2"', 'k12 = "s^^2"')
    with pytest.raises(ProblemFormatError, match="k12") as exc:
        parse_problem_text(text)
    assert exc.value.line == 5


@pytest.mark.parametrize("old, bad, message", [
    ('k11 = "s+t"  # comment', "k11 = s+t", "double-quoted"),
    ('k11 = "s+t"  # comment', "colour = \"red\"", "unknown key"),
    ('k11 = "s+t"  # comment', "k11 \"s\"", "key = value"),
    ("T = 1", "T = abc", "decimal"),
])
def test_load_format_errors(old, bad, message):
    text = _file_text().replace(old, bad)
    with pytest.raises(ProblemFormatError, match=message):
        parse_problem_text(text)


def test_duplicate_key():
    with pytest.raises(ProblemFormatError, match="duplicate"):
        parse_problem_text(_file_text() + 'k11 = "t"\n')


def test_load_runs_validation(tmp_path):
    path = tmp_path / "bad.iae"
    path.write_text(_file_text(k22="s-t"))
    with pytest.raises(Index1Violation):
        load_problem(path)


def test_explicit_derivative_keys_are_used():
    p = parse_problem_text(_file_text(dk22_dt="7"))
    assert p.dk22_dt(0.2, 0.1) == 7.0


def test_with_horizon(example1):
    assert example1.with_horizon(2.0).T == 2.0
    with pytest.raises(ProblemFormatError):
        example1.with_horizon(0.0)
