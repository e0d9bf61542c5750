"""Direct and indirect Galerkin methods for linear index-1 integral-algebraic equations."""
from .assembly import GalerkinSystem, assemble, assemble_direct, assemble_indirect
from .basis import Basis, legendre_deriv, legendre_eval, shifted_basis_eval
from .errors import (ConsistencyViolation, DomainError, ExpressionSyntaxError, IAEError,
                     Index1Violation, MissingDerivatives, MissingExactSolution,
                     ProblemFormatError, SingularMatrix, UnboundVariable, UnknownProblem)
from .expr import differentiate, eval_expression, parse_expression
from .linalg import lu_solve
from .problem import (IAEProblem, builtin_example1, builtin_polynomial, from_expressions,
                      get_builtin, load_problem, validate_index1)
from .quadrature import QuadRule, gauss_rule, integrate_interval, integrate_triangle
from .solution import (ErrorReport, GalerkinSolution, evaluate, max_norm_error, project,
                       residual_check, solve_system)

__version__ = "0.1.0"
