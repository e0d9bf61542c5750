"""A small expression language for kernels and data functions.

Grammar (standard precedence, ``^`` binds tighter than unary minus)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' '-'? integer)?
    atom   := number | 't' | 's' | 'pi' | func '(' expr ')' | '(' expr ')'

Expressions evaluate elementwise on numpy arrays, so a parsed kernel can be
sampled on a whole quadrature grid in one call.
"""
from dataclasses import dataclass
import math
import re

import numpy as np

from .errors import DomainError, ExpressionSyntaxError, UnboundVariable

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt")
VARIABLES = ("t", "s")


class Expression:
    """Base node. Calling an expression evaluates it."""

    def __call__(self, t, s=None):
        return eval_expression(self, t, s)

    def __str__(self):
        return to_string(self)

    def variables(self):
        return _variables(self)


@dataclass(frozen=True, eq=True)
class Num(Expression):
    value: float


@dataclass(frozen=True, eq=True)
class Const(Expression):
    name: str  # only "pi"


@dataclass(frozen=True, eq=True)
class Var(Expression):
    name: str


@dataclass(frozen=True, eq=True)
class Neg(Expression):
    operand: Expression


@dataclass(frozen=True, eq=True)
class BinOp(Expression):
    op: str
    left: Expression
    right: Expression


@dataclass(frozen=True, eq=True)
class Pow(Expression):
    base: Expression
    exponent: int


@dataclass(frozen=True, eq=True)
class Call(Expression):
    func: str
    arg: Expression


def Add(a, b):
    return BinOp("+", a, b)


def Sub(a, b):
    return BinOp("-", a, b)


def Mul(a, b):
    return BinOp("*", a, b)


def Div(a, b):
    return BinOp("/", a, b)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            pos = len(text)
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.lastgroup is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(
                f"unexpected character {text[start]!r}", _byte_offset(text, start), text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _byte_offset(text, index):
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, expected, tok=None):
        kind, value, pos = tok or self.peek()
        found = "end of input" if kind == "end" else repr(value)
        raise ExpressionSyntaxError(
            f"expected {expected}, found {found}", _byte_offset(self.text, pos), self.text)

    def expect_op(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            self.error(repr(op))
        self.advance()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.error("operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] != ("op", "^"):
            return base
        self.advance()
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            sign = -1
        kind, value, _ = self.peek()
        if kind != "num" or not value.isdigit():
            self.error("integer exponent")
        self.advance()
        return Pow(base, sign * int(value))

    def atom(self):
        kind, value, _ = tok = self.peek()
        if kind == "num":
            self.advance()
            return Num(float(value))
        if kind == "name":
            self.advance()
            if value in VARIABLES:
                return Var(value)
            if value == "pi":
                return Const("pi")
            if value in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(value, arg)
            self.error("variable, number or function", tok)
        if (kind, value) == ("op", "("):
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        self.error("expression")


def parse_expression(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(text).parse()


# ------------------------------------------------------------- evaluation

def _check(cond, message):
    if np.any(cond):
        raise DomainError(message)


def _apply(func, x):
    if func == "log":
        _check(x <= 0, "log of non-positive argument")
        return np.log(x)
    if func == "sqrt":
        _check(x < 0, "sqrt of negative argument")
        return np.sqrt(x)
    return getattr(np, func)(x)


def _eval(node, env):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return math.pi
    if isinstance(node, Var):
        value = env.get(node.name)
        if value is None:
            raise UnboundVariable(f"variable {node.name!r} is not bound")
        return value
    if isinstance(node, Neg):
        return -_eval(node.operand, env)
    if isinstance(node, BinOp):
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        _check(np.asarray(b) == 0, "division by zero")
        return a / b
    if isinstance(node, Pow):
        base = _eval(node.base, env)
        if node.exponent < 0:
            _check(np.asarray(base) == 0, "division by zero")
            return 1.0 / base ** (-node.exponent)
        return base ** node.exponent
    if isinstance(node, Call):
        return _apply(node.func, np.asarray(_eval(node.arg, env), dtype=float))
    raise TypeError(f"not an expression node: {node!r}")


def eval_expression(e, t, s=None):
    """Evaluate `e` at (t, s); arrays broadcast elementwise."""
    env = {"t": None if t is None else np.asarray(t, dtype=float),
           "s": None if s is None else np.asarray(s, dtype=float)}
    out = _eval(e, env)
    shapes = [v.shape for v in env.values() if v is not None]
    shape = np.broadcast_shapes(*shapes) if shapes else ()
    out = np.broadcast_to(np.asarray(out, dtype=float), shape)
    return float(out) if out.ndim == 0 else np.array(out)


def _variables(node):
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, (Num, Const)):
        return set()
    if isinstance(node, Neg):
        return _variables(node.operand)
    if isinstance(node, BinOp):
        return _variables(node.left) | _variables(node.right)
    if isinstance(node, Pow):
        return _variables(node.base)
    return _variables(node.arg)


# ---------------------------------------------------------------- printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_num(v):
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _str(node, prec):
    # prec: binding strength required by the context
    if isinstance(node, Num):
        text = _fmt_num(node.value)
        return f"({text})" if node.value < 0 and prec > 0 else text
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        text = "-" + _str(node.operand, 3)
        return f"({text})" if prec > 1 else text
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        text = f"{_str(node.left, p)}{node.op}{_str(node.right, p + 1)}"
        return f"({text})" if p < prec else text
    if isinstance(node, Pow):
        text = f"{_str(node.base, 5)}^{node.exponent}"
        return f"({text})" if prec > 4 else text
    if isinstance(node, Call):
        return f"{node.func}({_str(node.arg, 0)})"
    raise TypeError(f"not an expression node: {node!r}")


def to_string(e):
    return _str(e, 0)


# ---------------------------------------------------------- differentiation

ZERO = Num(0.0)
ONE = Num(1.0)


def _is(node, value):
    return isinstance(node, Num) and node.value == value


def simplify(node):
    """Fold literal subtrees and drop neutral elements. Not a CAS."""
    if isinstance(node, Neg):
        a = simplify(node.operand)
        if isinstance(a, Num):
            return Num(-a.value)
        if isinstance(a, Neg):
            return a.operand
        return Neg(a)
    if isinstance(node, Pow):
        b = simplify(node.base)
        if node.exponent == 0:
            return ONE
        if node.exponent == 1:
            return b
        if isinstance(b, Num) and not (b.value == 0 and node.exponent < 0):
            return Num(b.value ** node.exponent)
        return Pow(b, node.exponent)
    if isinstance(node, Call):
        return Call(node.func, simplify(node.arg))
    if not isinstance(node, BinOp):
        return node
    a, b, op = simplify(node.left), simplify(node.right), node.op
    if isinstance(a, Num) and isinstance(b, Num) and not (op == "/" and b.value == 0):
        return Num({"+": a.value + b.value, "-": a.value - b.value,
                    "*": a.value * b.value, "/": a.value / b.value if op == "/" else 0}[op])
    if op == "+":
        if _is(a, 0):
            return b
        if _is(b, 0):
            return a
    elif op == "-":
        if _is(b, 0):
            return a
        if _is(a, 0):
            return simplify(Neg(b))
    elif op == "*":
        if _is(a, 0) or _is(b, 0):
            return ZERO
        if _is(a, 1):
            return b
        if _is(b, 1):
            return a
        if _is(a, -1):
            return simplify(Neg(b))
        if _is(b, -1):
            return simplify(Neg(a))
    elif op == "/":
        if _is(b, 1):
            return a
        if _is(a, 0) and not _is(b, 0):
            return ZERO
    return BinOp(op, a, b)


def _d(node, var):
    if isinstance(node, (Num, Const)):
        return ZERO
    if isinstance(node, Var):
        return ONE if node.name == var else ZERO
    if isinstance(node, Neg):
        return Neg(_d(node.operand, var))
    if isinstance(node, BinOp):
        a, b = node.left, node.right
        da, db = _d(a, var), _d(b, var)
        if node.op in "+-":
            return BinOp(node.op, da, db)
        if node.op == "*":
            return Add(Mul(da, b), Mul(a, db))
        return Div(Sub(Mul(da, b), Mul(a, db)), Pow(b, 2))
    if isinstance(node, Pow):
        k = node.exponent
        return Mul(Mul(Num(float(k)), Pow(node.base, k - 1)), _d(node.base, var))
    if isinstance(node, Call):
        u = node.arg
        du = _d(u, var)
        outer = {
            "sin": lambda: Call("cos", u),
            "cos": lambda: Neg(Call("sin", u)),
            "tan": lambda: Add(ONE, Pow(Call("tan", u), 2)),
            "exp": lambda: Call("exp", u),
            "log": lambda: Div(ONE, u),
            "sqrt": lambda: Div(ONE, Mul(Num(2.0), Call("sqrt", u))),
        }[node.func]()
        return Mul(outer, du)
    raise TypeError(f"not an expression node: {node!r}")


def differentiate(e, var):
    if var not in VARIABLES:
        raise ValueError(f"can only differentiate with respect to t or s, not {var!r}")
    return simplify(_d(e, var))
