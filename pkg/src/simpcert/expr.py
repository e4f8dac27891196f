"""Expression front end: parsing, evaluation and exact differentiation.

Grammar (lowest to highest precedence)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := atom ("^" exponent)*
    exponent:= ["-" | "+"] NUMBER | "(" ["-" | "+"] NUMBER ")"
    atom    := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"

``FUNC`` is one of sin, cos, exp, log, abs, sqrt.  ``NAME`` is the free
variable or one of the constants ``pi`` and ``e``.  Exponents must be numeric
literals, so ``x^y`` is rejected.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

__all__ = [
    "Expr", "Num", "Var", "Neg", "BinOp", "Pow", "Call",
    "ExprError", "ExprSyntaxError", "DomainError", "NonDifferentiableError",
    "parse_expr", "differentiate", "evaluate", "to_source", "node_count",
    "free_symbols", "FunctionModel", "FUNCTIONS",
]


class ExprError(ValueError):
    """Base class for expression errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int, source: str = ""):
        self.offset = offset
        self.source = source
        super().__init__(f"{message} at offset {offset}")


class DomainError(ExprError, ArithmeticError):
    """Evaluation left the real domain of an expression."""

    def __init__(self, message: str, point=None):
        self.point = point
        if point is not None:
            message = f"{message} (at {point!r})"
        super().__init__(message)


class NonDifferentiableError(ExprError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ExprError(f"numeric literal must be finite, got {self.value!r}")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: float


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Pow, Call]

FUNCTIONS = ("sin", "cos", "exp", "log", "abs", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^(),])
    """,
    re.VERBOSE,
)


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos), source)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if text == "**":
                text = "^"
            tokens.append((kind, text, pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


def _byte_offset(source: str, pos: int) -> int:
    return len(source[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, source: str, free_var: str):
        self.source = source
        self.free_var = free_var
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ExprSyntaxError(message, _byte_offset(self.source, tok[2]), self.source)

    def expect(self, text):
        tok = self.take()
        if tok[1] != text:
            self.fail(f"expected {text!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def parse(self) -> Expr:
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        while self.peek()[1] == "^":
            self.take()
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> float:
        paren = self.peek()[1] == "("
        if paren:
            self.take()
        sign = 1.0
        if self.peek()[1] in ("-", "+"):
            sign = -1.0 if self.take()[1] == "-" else 1.0
        tok = self.peek()
        if tok[0] != "num":
            self.fail("exponent must be a numeric literal")
        self.take()
        if paren:
            self.expect(")")
        return sign * self._number(tok)

    def _number(self, tok) -> float:
        value = float(tok[1])
        if not math.isfinite(value):
            self.fail(f"numeric literal {tok[1]!r} is not finite", tok)
        return value

    def atom(self):
        tok = self.take()
        kind, text, _ = tok
        if kind == "num":
            return Num(self._number(tok))
        if kind == "name":
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text == self.free_var:
                return Var(text)
            if text in CONSTANTS:
                return Num(CONSTANTS[text])
            if len(text) == 1 and text.isalpha():
                self.fail(f"wrong free variable {text!r} (expected {self.free_var!r})", tok)
            self.fail(f"unknown identifier {text!r}", tok)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        self.fail(f"unexpected token {text or 'end of input'!r}", tok)


def parse_expr(source: str, free_var: str = "x") -> Expr:
    """Parse ``source`` into an expression tree in the variable ``free_var``."""
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0, source)
    return _Parser(source, free_var).parse()


# ---------------------------------------------------------------------------
# inspection / printing


def node_count(e: Expr) -> int:
    if isinstance(e, (Num, Var)):
        return 1
    if isinstance(e, (Neg, Call)):
        return 1 + node_count(e.arg)
    if isinstance(e, Pow):
        return 1 + node_count(e.base)
    return 1 + node_count(e.left) + node_count(e.right)


def free_symbols(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, (Neg, Call)):
        return free_symbols(e.arg)
    if isinstance(e, Pow):
        return free_symbols(e.base)
    return free_symbols(e.left) | free_symbols(e.right)


def _fmt_num(v: float) -> str:
    s = repr(float(v))
    return f"({s})" if v < 0 else s


def to_source(e: Expr) -> str:
    """Render ``e`` as parseable text (fully parenthesised)."""
    if isinstance(e, Num):
        return _fmt_num(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_source(e.arg)})"
    if isinstance(e, Call):
        return f"{e.func}({to_source(e.arg)})"
    if isinstance(e, Pow):
        return f"({to_source(e.base)})^{_fmt_num(e.exponent)}"
    return f"({to_source(e.left)} {e.op} {to_source(e.right)})"


# ---------------------------------------------------------------------------
# differentiation

_ZERO = Num(0.0)
_ONE = Num(1.0)


def _is_num(e, v=None):
    return isinstance(e, Num) and (v is None or e.value == v)


def _add(u, v):
    if _is_num(u, 0.0):
        return v
    if _is_num(v, 0.0):
        return u
    return BinOp("+", u, v)


def _sub(u, v):
    if _is_num(v, 0.0):
        return u
    if _is_num(u, 0.0):
        return _neg(v)
    return BinOp("-", u, v)


def _mul(u, v):
    if _is_num(u, 0.0) or _is_num(v, 0.0):
        return _ZERO
    if _is_num(u, 1.0):
        return v
    if _is_num(v, 1.0):
        return u
    return BinOp("*", u, v)


def _div(u, v):
    if _is_num(u, 0.0):
        return _ZERO
    if _is_num(v, 1.0):
        return u
    return BinOp("/", u, v)


def _neg(u):
    if _is_num(u):
        return Num(-u.value)
    return Neg(u)


def _pow(u, c):
    if c == 0.0:
        return _ONE
    if c == 1.0:
        return u
    return Pow(u, c)


def _d(e: Expr, var: str) -> Expr:
    if isinstance(e, Num):
        return _ZERO
    if isinstance(e, Var):
        return _ONE if e.name == var else _ZERO
    if isinstance(e, Neg):
        return _neg(_d(e.arg, var))
    if isinstance(e, BinOp):
        du, dv = _d(e.left, var), _d(e.right, var)
        if e.op == "+":
            return _add(du, dv)
        if e.op == "-":
            return _sub(du, dv)
        if e.op == "*":
            return _add(_mul(du, e.right), _mul(e.left, dv))
        # quotient rule
        return _div(_sub(_mul(du, e.right), _mul(e.left, dv)), _pow(e.right, 2.0))
    if isinstance(e, Pow):
        du = _d(e.base, var)
        return _mul(_mul(Num(e.exponent), _pow(e.base, e.exponent - 1.0)), du)
    if isinstance(e, Call):
        u = e.arg
        du = _d(u, var)
        if _is_num(du, 0.0):
            if e.func == "abs" and free_symbols(u):
                raise NonDifferentiableError("abs is not differentiable")
            return _ZERO
        if e.func == "sin":
            outer = Call("cos", u)
        elif e.func == "cos":
            outer = _neg(Call("sin", u))
        elif e.func == "exp":
            outer = e
        elif e.func == "log":
            outer = _div(_ONE, u)
        elif e.func == "sqrt":
            outer = _div(Num(0.5), e)
        else:
            raise NonDifferentiableError("abs is not differentiable")
        return _mul(outer, du)
    raise TypeError(f"not an expression node: {e!r}")


def differentiate(e: Expr, order: int = 1, var: str | None = None) -> Expr:
    """Exact symbolic derivative of ``e`` of the given order (1 to 4).

    Only trivial zero/one folding is applied; results are meant to be
    evaluated, not read.
    """
    if not isinstance(order, int) or not 1 <= order <= 4:
        raise ValueError(f"order must be an integer in 1..4, got {order!r}")
    if var is None:
        syms = free_symbols(e)
        var = next(iter(syms)) if syms else "x"
    for _ in range(order):
        e = _d(e, var)
    return e


# ---------------------------------------------------------------------------
# evaluation


def _eval(e: Expr, x):
    # Works for python floats and numpy arrays alike; domain checks happen in
    # the callers so the array path can report the offending point.
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_eval(e.arg, x)
    if isinstance(e, BinOp):
        u, v = _eval(e.left, x), _eval(e.right, x)
        if e.op == "+":
            return u + v
        if e.op == "-":
            return u - v
        if e.op == "*":
            return u * v
        return u / v
    if isinstance(e, Pow):
        return np.power(_eval(e.base, x), e.exponent)
    u = _eval(e.arg, x)
    if e.func == "abs":
        return np.abs(u)
    return _NP_FUNCS[e.func](u)


_NP_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "log": np.log, "sqrt": np.sqrt}


def _eval_scalar(e: Expr, x: float) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_eval_scalar(e.arg, x)
    if isinstance(e, BinOp):
        u, v = _eval_scalar(e.left, x), _eval_scalar(e.right, x)
        if e.op == "+":
            return u + v
        if e.op == "-":
            return u - v
        if e.op == "*":
            return u * v
        if v == 0.0:
            raise DomainError("division by zero", x)
        return u / v
    if isinstance(e, Pow):
        u = _eval_scalar(e.base, x)
        c = e.exponent
        if u == 0.0 and c < 0:
            raise DomainError("division by zero", x)
        if u < 0.0 and not c.is_integer():
            raise DomainError("negative base with fractional exponent", x)
        try:
            return math.pow(u, c)
        except OverflowError:
            raise DomainError("overflow", x) from None
    u = _eval_scalar(e.arg, x)
    f = e.func
    if f == "log":
        if u <= 0.0:
            raise DomainError("log of non-positive value", x)
        return math.log(u)
    if f == "sqrt":
        if u < 0.0:
            raise DomainError("sqrt of negative value", x)
        return math.sqrt(u)
    if f == "abs":
        return abs(u)
    if f == "exp":
        try:
            return math.exp(u)
        except OverflowError:
            raise DomainError("overflow", x) from None
    return getattr(math, f)(u)


def evaluate(e: Expr, x):
    """Evaluate ``e`` at a float or at every entry of an array.

    Raises :class:`DomainError` if any result is not a finite real.
    """
    if np.ndim(x) == 0 and not isinstance(x, np.ndarray):
        value = _eval_scalar(e, float(x))
        if not math.isfinite(value):
            raise DomainError("non-finite result", x)
        return value
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = np.broadcast_to(np.asarray(_eval(e, x), dtype=float), x.shape)
    bad = ~np.isfinite(out)
    if bad.any():
        point = float(x[np.unravel_index(np.argmax(bad), bad.shape)])
        # re-run the scalar path for a precise message
        _eval_scalar(e, point)
        raise DomainError("non-finite result", point)
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionModel:
    """A real function of one variable with cached exact derivatives."""

    expr: Expr
    var: str = "x"
    domain_hint: tuple[float, float] | None = None
    source: str | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def parse(cls, source: str, var: str = "x", domain_hint=None) -> "FunctionModel":
        return cls(parse_expr(source, var), var, domain_hint, source)

    def derivative(self, order: int) -> Expr:
        if order == 0:
            return self.expr
        if order not in self._cache:
            prev = self.derivative(order - 1) if order > 1 else self.expr
            if not 1 <= order <= 4:
                raise ValueError(f"order must be in 0..4, got {order}")
            self._cache[order] = _d(prev, self.var)
        return self._cache[order]

    def abs_derivative(self, order: int, power: float = 1.0) -> Expr:
        """Expression for ``|f^(order)|**power`` (evaluable, not differentiable)."""
        return _pow(Call("abs", self.derivative(order)), power)

    def __call__(self, x):
        return evaluate(self.expr, x)

    def d(self, order: int) -> Callable:
        e = self.derivative(order)
        return lambda x: evaluate(e, x)

    def __str__(self):
        return self.source if self.source is not None else to_source(self.expr)
