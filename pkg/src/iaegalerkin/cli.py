"""Command-line front end: ``solve``, ``study`` and ``bestapprox``.

Exit codes: 0 success, 1 domain or validation error, 2 I/O error.
"""
import argparse
from dataclasses import dataclass
import logging
import sys
from typing import Optional

import numpy as np

from . import report
from .assembly import DIRECT, INDIRECT, assemble
from .basis import Basis
from .errors import IAEError
from .expr import parse_expression
from .problem import get_builtin, load_problem, validate_index1
from .quadrature import gauss_rule, sample
from .solution import (DEFAULT_GRID, best_approximation_error, evaluate, max_norm_error,
                       solve_system)

log = logging.getLogger("iaegalerkin")

DEFAULT_N_LIST = (2, 4, 6, 8, 10)


class UsageError(Exception):
    pass


@dataclass
class StudyConfig:
    problem: Optional[str] = "example1"
    problem_file: Optional[str] = None
    methods: tuple = (DIRECT, INDIRECT)
    n_list: tuple = DEFAULT_N_LIST
    quad: str = "auto"                 # auto | fixed | paper
    quad_order: Optional[int] = None
    T: Optional[float] = None
    grid: int = DEFAULT_GRID
    csv: Optional[str] = None
    svg: Optional[str] = None
    png: Optional[str] = None

    def __post_init__(self):
        if not self.n_list:
            raise UsageError("n-list must not be empty")
        if any(n < 1 for n in self.n_list):
            raise UsageError("basis sizes must be >= 1")
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise UsageError("n-list must be increasing")
        if self.quad == "fixed" and self.quad_order < max(self.n_list):
            raise UsageError(f"--quad-order must be >= {max(self.n_list)}")
        if self.grid < 2:
            raise UsageError("--grid must be >= 2")
        if self.T is not None and not self.T > 0:
            raise UsageError("--T must be positive")

    def order_for(self, n):
        if self.quad == "fixed":
            return self.quad_order
        if self.quad == "paper":
            return n
        return max(2 * n, 10)


def _load(cfg):
    p = load_problem(cfg.problem_file) if cfg.problem_file else get_builtin(cfg.problem)
    if cfg.T is not None:
        p = p.with_horizon(cfg.T)
    k0 = validate_index1(p)
    log.info("problem %s on [0, %g], min |k22(t,t)| = %.4g", p.name, p.T, k0)
    return p


def _solve(p, n, method, cfg):
    rule = gauss_rule(cfg.order_for(n))
    system = assemble(p, n, rule, method)
    log.debug("assembled %s system n=%d with %d-point rule", method, n, rule.order)
    return solve_system(system)


def _write_plot(cfg, series, title):
    if cfg.svg:
        report.write_svg(cfg.svg, series, title=title)
    if cfg.png:
        report.write_png(cfg.png, series, title=title)


def cmd_solve(cfg, out=sys.stdout):
    p = _load(cfg)
    n = cfg.n_list[0]
    for method in cfg.methods:
        sol = _solve(p, n, method, cfg)
        print(f"{p.name}: {method} Galerkin, n = {n}, quadrature order {cfg.order_for(n)}",
              file=out)
        print(f"{'i':>3}  {'x_i':>24}  {'y_i':>24}", file=out)
        for i, (cx, cy) in enumerate(zip(sol.coeff_x, sol.coeff_y)):
            print(f"{i:>3}  {cx:>24.16e}  {cy:>24.16e}", file=out)
        if p.has_exact:
            r = max_norm_error(sol, p.exact_x, p.exact_y, cfg.grid)
            print(f"max |x_n - x| = {r.err_x:.3e}", file=out)
            print(f"max |y_n - y| = {r.err_y:.3e}", file=out)

        if cfg.csv:
            t = np.linspace(0.0, p.T, cfg.grid)
            x, y = evaluate(sol, t)
            header = ["t", "x_n", "y_n"]
            cols = [t, x, y]
            if p.has_exact:
                ex, ey = sample(p.exact_x, t), sample(p.exact_y, t)
                header += ["exact_x", "exact_y", "err_x", "err_y"]
                cols += [ex, ey, np.abs(x - ex), np.abs(y - ey)]
            path = cfg.csv if len(cfg.methods) == 1 else _suffixed(cfg.csv, method)
            report.write_csv(path, header, ([float(v) for v in row] for row in zip(*cols)))
    return 0


def _suffixed(path, tag):
    stem, dot, ext = path.rpartition(".")
    return f"{stem}_{tag}.{ext}" if dot else f"{path}_{tag}"


def cmd_study(cfg, out=sys.stdout):
    p = _load(cfg)
    if not p.has_exact:
        raise UsageError(f"{p.name} has no exact solution; study needs exact_x and exact_y")
    results = []
    for method in cfg.methods:
        reports = [max_norm_error(_solve(p, n, method, cfg), p.exact_x, p.exact_y, cfg.grid)
                   for n in cfg.n_list]
        results.append((method, reports))
        print(f"\n{p.name}: {method} Galerkin method", file=out)
        print(report.error_table(cfg.n_list, [
            ("||x_n-x||", [r.err_x for r in reports]),
            ("||y_n-y||", [r.err_y for r in reports]),
        ]), file=out)

    if cfg.csv:
        rows = [(m, r.n, r.err_x, r.err_y) for m, reports in results for r in reports]
        report.write_csv(cfg.csv, ["method", "n", "err_x", "err_y"], rows)
    series = []
    for method, reports in results:
        ns = [r.n for r in reports]
        series.append((f"{method} x", ns, [r.err_x for r in reports]))
        series.append((f"{method} y", ns, [r.err_y for r in reports]))
    _write_plot(cfg, series, f"{p.name}: convergence")
    return 0


def cmd_bestapprox(cfg, text, out=sys.stdout):
    f = parse_expression(text)
    if "s" in f.variables():
        raise UsageError("best approximation needs a function of t only")
    T = cfg.T if cfg.T is not None else 1.0
    errs = []
    for n in cfg.n_list:
        # a projection needs at least n+2 points, also in paper mode
        rule = gauss_rule(max(cfg.order_for(n), n + 2))
        errs.append(best_approximation_error(f, Basis(T, n), rule, cfg.grid))
    print(f"best approximation of {f} on [0, {T:g}]", file=out)
    print(report.error_table(cfg.n_list, [("||P_n f-f||", errs)]), file=out)
    if cfg.csv:
        report.write_csv(cfg.csv, ["n", "error"], zip(cfg.n_list, errs))
    _write_plot(cfg, [(str(f), list(cfg.n_list), errs)], "best approximation")
    return 0


def _int_list(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="iae-galerkin",
                     description="Galerkin solvers for index-1 integral-algebraic equations")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--problem", default="example1", metavar="NAME")
    src.add_argument("--problem-file", metavar="PATH")
    common.add_argument("--method", choices=["direct", "indirect", "both"])
    common.add_argument("--T", type=float, dest="T")
    quad = common.add_mutually_exclusive_group()
    quad.add_argument("--quad-order", type=int, metavar="M")
    quad.add_argument("--paper-quad", action="store_true",
                      help="use as many quadrature points as basis functions")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID)
    common.add_argument("--csv", metavar="PATH")
    common.add_argument("--svg", metavar="PATH")
    common.add_argument("--png", metavar="PATH", help="matplotlib rendering of the plot")
    common.add_argument("--verbose", "-v", action="store_true")

    p_solve = sub.add_parser("solve", parents=[common], help="solve one problem")
    p_solve.add_argument("--n", type=int, default=10)

    p_study = sub.add_parser("study", parents=[common], help="convergence study")
    p_study.add_argument("--n-list", default=",".join(map(str, DEFAULT_N_LIST)))

    p_best = sub.add_parser("bestapprox", parents=[common],
                            help="best-approximation errors of a function of t")
    p_best.add_argument("expr")
    p_best.add_argument("--n-list", default=",".join(map(str, DEFAULT_N_LIST)))
    return parser


def config_from_args(args):
    method = args.method or ("indirect" if args.command == "solve" else "both")
    methods = (DIRECT, INDIRECT) if method == "both" else (method,)
    n_list = (args.n,) if args.command == "solve" else _int_list(args.n_list)
    if args.quad_order is not None:
        quad = "fixed"
    else:
        quad = "paper" if args.paper_quad else "auto"
    return StudyConfig(
        problem=args.problem, problem_file=args.problem_file, methods=methods,
        n_list=n_list, quad=quad, quad_order=args.quad_order, T=args.T, grid=args.grid,
        csv=args.csv, svg=args.svg, png=args.png,
    )


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        cfg = config_from_args(args)
        if args.command == "solve":
            return cmd_solve(cfg, out)
        if args.command == "study":
            return cmd_study(cfg, out)
        return cmd_bestapprox(cfg, args.expr, out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, IAEError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
