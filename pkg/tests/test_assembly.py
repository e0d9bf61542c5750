import numpy as np
import pytest
from scipy.integrate import dblquad

from conftest import auto_rule
from iaegalerkin.assembly import (assemble, assemble_direct, assemble_indirect,
                                  derivative_fields, fd_partial_t)
from iaegalerkin.basis import Basis, shifted_basis_eval
from iaegalerkin.errors import MissingDerivatives, SingularMatrix
from iaegalerkin.problem import EXAMPLE1, IAEProblem, from_expressions
from iaegalerkin.quadrature import gauss_rule
from iaegalerkin.solution import max_norm_error, project, solve_system


def _dbl(f, T=1.0):
    val, _ = dblquad(lambda s, t: f(t, s), 0, T, 0, lambda t: t, epsabs=1e-13, epsrel=1e-13)
    return val


def test_direct_entries_match_adaptive_quadrature(example1):
    n = 3
    sysd = assemble_direct(example1, n, gauss_rule(12))
    b = Basis(1.0, n)
    V = lambda i, x: shifted_basis_eval(b, i, x)
    for j in range(n):
        for i in range(n):
            g11 = _dbl(lambda t, s: (s + t) * V(i, s) * V(j, t))
            g21 = _dbl(lambda t, s: (s - t**2) * V(i, s) * V(j, t))
            g22 = _dbl(lambda t, s: (s + t + 1) * V(i, s) * V(j, t))
            assert sysd.A[j, i] == pytest.approx((i == j) - g11, abs=1e-12)
            assert sysd.A[n + j, i] == pytest.approx(g21, abs=1e-12)
            assert sysd.A[n + j, n + i] == pytest.approx(g22, abs=1e-12)


def test_indirect_entries_match_adaptive_quadrature(example1):
    from scipy.integrate import quad
    n = 3
    sysi = assemble_indirect(example1, n, gauss_rule(14))
    b = Basis(1.0, n)
    V = lambda i, x: shifted_basis_eval(b, i, x)
    for j in range(n):
        rhs, _ = quad(lambda t: -example1.df2_dt(t) / (2 * t + 1) * V(j, t), 0, 1, epsabs=1e-14)
        assert sysi.b[n + j] == pytest.approx(rhs, abs=1e-12)
        for i in range(n):
            d, _ = quad(lambda t: (t - t**2) / (2 * t + 1) * V(i, t) * V(j, t), 0, 1,
                        epsabs=1e-14)
            h21 = _dbl(lambda t, s: -2 * t / (2 * t + 1) * V(i, s) * V(j, t))
            h22 = _dbl(lambda t, s: 1 / (2 * t + 1) * V(i, s) * V(j, t))
            assert sysi.A[n + j, i] == pytest.approx(d + h21, abs=1e-12)
            assert sysi.A[n + j, n + i] == pytest.approx((i == j) + h22, abs=1e-12)


def test_layout_and_finiteness(example1):
    for method in ("direct", "indirect"):
        s = assemble(example1, 5, auto_rule(5), method)
        assert s.A.shape == (10, 10) and s.b.shape == (10,)
        assert s.n == 5 and s.method == method and s.basis == Basis(1.0, 5)
        assert np.all(np.isfinite(s.A)) and np.all(np.isfinite(s.b))


def test_first_row_block_is_shared_bitwise(example1):
    rule = auto_rule(6)
    d = assemble_direct(example1, 6, rule)
    i = assemble_indirect(example1, 6, rule)
    assert d.A[:6].tobytes() == i.A[:6].tobytes()
    assert d.b[:6].tobytes() == i.b[:6].tobytes()


def test_assembly_is_deterministic(example1):
    rule = auto_rule(7)
    for method in ("direct", "indirect"):
        a = assemble(example1, 7, rule, method)
        b = assemble(example1, 7, rule, method)
        assert a.A.tobytes() == b.A.tobytes() and a.b.tobytes() == b.b.tobytes()


def test_projection_degenerate_case():
    # k11 = k12 = 0: the x rows reduce to the projection of f1
    p = from_expressions(**dict(EXAMPLE1, k11="0", k12="0", f1="sin(t)"))
    n = 6
    rule = auto_rule(n)
    sol = solve_system(assemble_direct(p, n, rule))
    np.testing.assert_allclose(sol.coeff_x, project(np.sin, Basis(1.0, n), rule), atol=1e-14)


def test_indirect_trivial_coupling():
    # k21 = 0, k22 = 1: the y rows reduce to the projection of -f2'
    p = from_expressions(**dict(EXAMPLE1, k21="0", k22="1", f2="sin(t)^2"))
    n = 6
    rule = auto_rule(n)
    sol = solve_system(assemble_indirect(p, n, rule))
    expected = project(lambda t: -2 * np.sin(t) * np.cos(t), Basis(1.0, n), rule)
    np.testing.assert_allclose(sol.coeff_y, expected, atol=1e-14)


@pytest.mark.parametrize("n, err_x, err_y", [(2, 4.0e-2, 1.6e-1), (10, 7.6e-13, 1.4e-11)])
def test_direct_table_values_paper_quadrature(example1, n, err_x, err_y):
    r = max_norm_error(solve_system(assemble_direct(example1, n, gauss_rule(n))),
                       example1.exact_x, example1.exact_y)
    assert r.err_x == pytest.approx(err_x, rel=0.1)
    assert r.err_y == pytest.approx(err_y, rel=0.1)


@pytest.mark.parametrize("n, err_x, err_y", [(4, 2.6e-4, 5.1e-4), (10, 6.8e-13, 1.3e-12)])
def test_indirect_table_values_paper_quadrature(example1, n, err_x, err_y):
    r = max_norm_error(solve_system(assemble_indirect(example1, n, gauss_rule(n))),
                       example1.exact_x, example1.exact_y)
    assert r.err_x == pytest.approx(err_x, rel=0.1)
    assert r.err_y == pytest.approx(err_y, rel=0.1)


def test_direct_and_indirect_agree(example1):
    for n in (2, 4, 6, 8, 10):
        rule = auto_rule(n)
        sd = solve_system(assemble_direct(example1, n, rule))
        si = solve_system(assemble_indirect(example1, n, rule))
        rd = max_norm_error(sd, np.sin, np.cos)
        ri = max_norm_error(si, np.sin, np.cos)
        t = np.linspace(0, 1, 1001)
        gap = np.max(np.abs(sd(t)[0] - si(t)[0]))
        assert gap <= rd.err_x + ri.err_x


def _native_example1():
    return IAEProblem(
        k11=lambda t, s: s + t, k12=lambda t, s: s**2 + t**2,
        k21=lambda t, s: s - t**2, k22=lambda t, s: s + t + 1,
        f1=lambda t: -t - 2 * np.sin(t) * t**2 + 2 * np.sin(t),
        f2=lambda t: (t**2 - 2 * np.sin(t) + np.cos(t) * t - np.cos(t) * t**2 + 1
                      - np.cos(t) - 2 * np.sin(t) * t),
        exact_x=np.sin, exact_y=np.cos, name="native")


def test_missing_derivatives():
    p = _native_example1()
    with pytest.raises(MissingDerivatives):
        assemble_indirect(p, 4, auto_rule(4))


def test_finite_difference_fallback(example1, caplog):
    p = _native_example1()
    with caplog.at_level("WARNING"):
        sys_fd = assemble_indirect(p, 8, auto_rule(8), fd_fallback=True)
    assert "finite differences" in caplog.text
    sys_sym = assemble_indirect(example1, 8, auto_rule(8))
    np.testing.assert_allclose(sys_fd.A, sys_sym.A, atol=1e-8)
    np.testing.assert_allclose(sys_fd.b, sys_sym.b, atol=1e-8)


def test_fd_partial_t():
    d = fd_partial_t(lambda t, s: np.sin(t) * s)
    assert d(0.4, 2.0) == pytest.approx(2 * np.cos(0.4), abs=1e-9)
    d1 = fd_partial_t(np.exp)
    assert d1(1.5) == pytest.approx(np.exp(1.5), rel=1e-9)


def test_derivative_fields_prefers_supplied(example1):
    assert derivative_fields(example1) == (example1.dk21_dt, example1.dk22_dt,
                                           example1.df2_dt)


def test_underresolved_quadrature_gives_singular_system(example1):
    # a 1-point rule makes every double-integral block rank one
    with pytest.raises(SingularMatrix):
        solve_system(assemble_direct(example1, 3, gauss_rule(1)))


def test_unknown_method(example1):
    with pytest.raises(ValueError):
        assemble(example1, 2, auto_rule(2), "sideways")
