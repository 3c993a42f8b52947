"""A tiny expression language for time-dependent coefficients.

Expressions are built from numbers, the variable ``t``, the constant ``pi``,
the binary operators ``+ - * / ^``, parentheses and a fixed set of unary
functions.  Parsed trees evaluate vectorised over numpy arrays and can be
differentiated analytically.

>>> f = parse_time_expression("sin(t)^2 - cos(t)")
>>> float(f(0.0))
-1.0
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "ExpressionError",
    "Node",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "TimeFunction",
    "parse_time_expression",
    "FUNCTIONS",
]


class ExpressionError(ValueError):
    """Raised for syntax errors, unknown identifiers and arity mismatches.

    ``offset`` is the byte offset in the source where the problem was found.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def _coth(x):
    return np.cosh(x) / np.sinh(x)


def _csch(x):
    return 1.0 / np.sinh(x)


def _sech(x):
    return 1.0 / np.cosh(x)


FUNCTIONS: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "coth": _coth,
    "csch": _csch,
    "sech": _sech,
    "exp": np.exp,
    "ln": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}

CONSTANTS = {"pi": np.pi}


# --------------------------------------------------------------------------
# tree


class Node:
    def evaluate(self, t):
        raise NotImplementedError

    def diff(self) -> "Node":
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError

    def is_zero(self) -> bool:
        return False

    def is_constant(self) -> bool:
        return False


@dataclass(frozen=True)
class Num(Node):
    value: float

    def evaluate(self, t):
        return np.full(np.shape(t), float(self.value)) if np.ndim(t) else float(self.value)

    def diff(self):
        return Num(0.0)

    def render(self):
        return repr(float(self.value)) if self.value >= 0 else f"({float(self.value)!r})"

    def is_zero(self):
        return self.value == 0.0

    def is_constant(self):
        return True


@dataclass(frozen=True)
class Var(Node):
    def evaluate(self, t):
        return np.asarray(t, dtype=float) if np.ndim(t) else float(t)

    def diff(self):
        return Num(1.0)

    def render(self):
        return "t"


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    def evaluate(self, t):
        return -self.arg.evaluate(t)

    def diff(self):
        return neg(self.arg.diff())

    def render(self):
        return f"(-{self.arg.render()})"

    def is_zero(self):
        return self.arg.is_zero()

    def is_constant(self):
        return self.arg.is_constant()


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    def evaluate(self, t):
        a = self.left.evaluate(t)
        b = self.right.evaluate(t)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            return np.divide(a, b)
        return np.power(a, b)

    def diff(self):
        u, v = self.left, self.right
        du, dv = u.diff(), v.diff()
        if self.op == "+":
            return add(du, dv)
        if self.op == "-":
            return sub(du, dv)
        if self.op == "*":
            return add(mul(du, v), mul(u, dv))
        if self.op == "/":
            return div(sub(mul(du, v), mul(u, dv)), pow_(v, Num(2.0)))
        # power rule; general exponent uses u^v * (v' ln u + v u'/u)
        if v.is_constant():
            return mul(mul(v, pow_(u, sub(v, Num(1.0)))), du)
        return mul(self, add(mul(dv, Call("ln", u)), div(mul(v, du), u)))

    def render(self):
        return f"({self.left.render()} {self.op} {self.right.render()})"

    def is_constant(self):
        return self.left.is_constant() and self.right.is_constant()

    def is_zero(self):
        if self.op == "*":
            return self.left.is_zero() or self.right.is_zero()
        if self.op in "+-":
            return self.left.is_zero() and self.right.is_zero()
        if self.op == "/":
            return self.left.is_zero()
        return False


@dataclass(frozen=True)
class Call(Node):
    name: str
    arg: Node

    def evaluate(self, t):
        return FUNCTIONS[self.name](self.arg.evaluate(t))

    def diff(self):
        u = self.arg
        n = self.name
        if n == "sin":
            outer = Call("cos", u)
        elif n == "cos":
            outer = neg(Call("sin", u))
        elif n == "tan":
            outer = pow_(Call("cos", u), Num(-2.0))
        elif n == "sinh":
            outer = Call("cosh", u)
        elif n == "cosh":
            outer = Call("sinh", u)
        elif n == "tanh":
            outer = pow_(Call("sech", u), Num(2.0))
        elif n == "coth":
            outer = neg(pow_(Call("csch", u), Num(2.0)))
        elif n == "csch":
            outer = neg(mul(Call("csch", u), Call("coth", u)))
        elif n == "sech":
            outer = neg(mul(Call("sech", u), Call("tanh", u)))
        elif n == "exp":
            outer = self
        elif n == "ln":
            outer = div(Num(1.0), u)
        elif n == "sqrt":
            outer = div(Num(0.5), self)
        else:  # abs
            outer = div(u, self)
        return mul(outer, u.diff())

    def render(self):
        return f"{self.name}({self.arg.render()})"

    def is_constant(self):
        return self.arg.is_constant()


# light constant folding keeps derivative trees from exploding


def neg(a: Node) -> Node:
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def add(a: Node, b: Node) -> Node:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return BinOp("+", a, b)


def sub(a: Node, b: Node) -> Node:
    if b.is_zero():
        return a
    if a.is_zero():
        return neg(b)
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return BinOp("-", a, b)


def mul(a: Node, b: Node) -> Node:
    if a.is_zero() or b.is_zero():
        return Num(0.0)
    if isinstance(a, Num) and a.value == 1.0:
        return b
    if isinstance(b, Num) and b.value == 1.0:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return BinOp("*", a, b)


def div(a: Node, b: Node) -> Node:
    if a.is_zero():
        return Num(0.0)
    if isinstance(b, Num) and b.value == 1.0:
        return a
    return BinOp("/", a, b)


def pow_(a: Node, b: Node) -> Node:
    if isinstance(b, Num) and b.value == 1.0:
        return a
    if isinstance(b, Num) and b.value == 0.0:
        return Num(1.0)
    return BinOp("^", a, b)


# --------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(src: str):
    pos = 0
    toks = []
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m:
            # skip leading whitespace to report the offending character
            off = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ExpressionError(f"unexpected character {src[off]!r}", off)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, off = self.take()
        if text != value or kind == "end":
            what = "end of input" if kind == "end" else repr(text)
            raise ExpressionError(f"expected {value!r}, found {what}", off)

    def parse(self) -> Node:
        node = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected {text!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = BinOp(op, node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            node = BinOp(op, node, rhs)
        return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text in ("-", "+"):
            self.take()
            arg = self.unary()
            return Neg(arg) if text == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            # right associative, binds tighter than unary minus on the left
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, text, off = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text == "t":
                return Var()
            if text in CONSTANTS:
                return Num(CONSTANTS[text])
            if text in FUNCTIONS:
                args = self.arglist(text, off)
                if len(args) != 1:
                    raise ExpressionError(
                        f"function {text!r} takes 1 argument, got {len(args)}", off
                    )
                return Call(text, args[0])
            raise ExpressionError(f"unknown identifier {text!r}", off)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(text)
        raise ExpressionError(f"unexpected {what}", off)

    def arglist(self, name, off):
        self.expect("(")
        if self.peek()[1] == ")" and self.peek()[0] == "op":
            self.take()
            return []
        args = [self.expr()]
        while self.peek()[1] == "," and self.peek()[0] == "op":
            self.take()
            args.append(self.expr())
        self.expect(")")
        return args


class TimeFunction:
    """A scalar function of time backed by an expression tree.

    Calling the object evaluates it; :meth:`derivative` returns a new
    ``TimeFunction`` for the analytic derivative.  Poles evaluate to signed
    infinities (numpy semantics) instead of raising.
    """

    __slots__ = ("tree", "source", "_d")

    def __init__(self, tree: Node, source: str | None = None):
        self.tree = tree
        self.source = source if source is not None else tree.render()
        self._d = None

    def __call__(self, t):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self.tree.evaluate(t)

    def derivative(self, order: int = 1) -> "TimeFunction":
        f = self
        for _ in range(order):
            if f._d is None:
                f._d = TimeFunction(f.tree.diff())
            f = f._d
        return f

    def render(self) -> str:
        return self.tree.render()

    @property
    def is_zero(self) -> bool:
        return self.tree.is_zero()

    @property
    def is_constant(self) -> bool:
        return self.tree.is_constant()

    @classmethod
    def constant(cls, value: float) -> "TimeFunction":
        return cls(Num(float(value)), repr(float(value)))

    def __repr__(self):
        return f"TimeFunction({self.source!r})"


def parse_time_expression(source: str) -> TimeFunction:
    """Parse ``source`` into a :class:`TimeFunction`.

    Raises :class:`ExpressionError` with the byte offset of the problem.
    """
    try:
        source.encode("ascii")
    except UnicodeEncodeError as exc:
        raise ExpressionError("non-ASCII character", exc.start) from None
    return TimeFunction(_Parser(source).parse(), source)
