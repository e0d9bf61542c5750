"""Exception types raised across the package."""


class IAEError(Exception):
    """Base class for all solver errors."""


class DomainError(IAEError, ValueError):
    """An argument lies outside the domain of a function."""


class ExpressionSyntaxError(IAEError, ValueError):
    def __init__(self, message, offset, text=""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnboundVariable(IAEError, ValueError):
    pass


class ProblemFormatError(IAEError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownProblem(IAEError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown problem"


class Index1Violation(IAEError, ValueError):
    """k22 vanishes (numerically) on the diagonal t = s."""


class ConsistencyViolation(IAEError, ValueError):
    """The algebraic equation's data does not vanish at t = 0."""


class MissingDerivatives(IAEError, ValueError):
    pass


class MissingExactSolution(IAEError, ValueError):
    pass


class SingularMatrix(IAEError, ArithmeticError):
    pass


class ConvergenceError(IAEError, RuntimeError):
    pass
