"""A small real-analytic expression language.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' signed_number)?
    atom   := number | ident | ident '(' expr ')' | '(' expr ')'

Numbers are decimals (``0.25``) or rational literals written without
spaces (``1/4``). Unary minus sits above ``^``, so ``-x^2`` is ``-(x^2)``.
Exponents must be number literals; a non-integer exponent means
``pow_rational``.

The same tree evaluates over exact rationals, over Q(x), or over
truncated superreal series, depending on the backend.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .errors import (
    DivisionByZero,
    DomainError,
    ModeError,
    NonDifferentiableNode,
    NonIntegerExponent,
    NotAvailable,
    ParseError,
    UnboundVariable,
    UnknownFunction,
)
from .ratfunc import RatFunc
from .series import (
    DEFAULT_DIGITS,
    DEFAULT_WINDOW,
    Series,
    embed_ratfunc,
    extend_analytic,
    rational_power,
)

FUNCTIONS = frozenset({"exp", "sin", "cos", "log", "sqrt", "atan", "abs"})


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Literal:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    child: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fname: str
    arg: "Expr"


Expr = Union[Literal, Var, Unary, Binary, Call]


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+/\d+|\d+\.\d*|\.\d+|\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    offset: int


def _tokenize(src: str) -> list[_Tok]:
    def boff(i):
        return len(src[:i].encode("utf-8"))

    toks = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", boff(pos),
                             {"number", "identifier", "(", "-"})
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), boff(m.start(kind))))
        pos = m.end()
    toks.append(_Tok("eof", "", boff(len(src))))
    return toks


def _number(text: str, offset: int) -> Fraction:
    if "/" in text:
        p, q = text.split("/")
        if int(q) == 0:
            raise ParseError("zero denominator in rational literal", offset)
        return Fraction(int(p), int(q))
    return Fraction(text)


class _Parser:
    def __init__(self, src: str, functions: frozenset):
        self.toks = _tokenize(src)
        self.i = 0
        self.functions = functions

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.offset, expected)

    def expect(self, text):
        if self.tok.text != text or self.tok.kind != "op":
            self.fail({text})
        return self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "eof":
            self.fail({"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = "add" if self.advance().text == "+" else "sub"
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = "mul" if self.advance().text == "*" else "div"
            node = Binary(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Unary("neg", self.factor())
        node = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            node = Binary("pow", node, Literal(self.signed_number()))
        return node

    def signed_number(self) -> Fraction:
        neg = False
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            neg = True
        t = self.tok
        if t.kind == "num":
            self.advance()
            value = _number(t.text, t.offset)
            return -value if neg else value
        if t.kind == "ident" or t.text == "(":
            raise NonIntegerExponent("exponent must be a number literal", t.offset, {"number"})
        self.fail({"number"} if neg else {"number", "-"})

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Literal(_number(t.text, t.offset))
        if t.kind == "ident":
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "(":
                if t.text not in self.functions:
                    raise UnknownFunction(f"unknown function {t.text!r}", t.offset,
                                          set(self.functions))
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            return Var(t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail({"number", "identifier", "(", "-"})


def parse(src: str) -> Expr:
    return _Parser(src, FUNCTIONS).parse()


# -- canonical printer -------------------------------------------------------

def _prec(node: Expr) -> int:
    if isinstance(node, Binary):
        return {"add": 1, "sub": 1, "mul": 2, "div": 2, "pow": 4}[node.op]
    if isinstance(node, Unary):
        return 3
    if isinstance(node, Literal) and node.value < 0:
        return 3
    return 5


def _wrap(node: Expr, min_prec: int) -> str:
    text = render(node)
    if isinstance(node, Literal) and node.value < 0:
        return text
    return f"({text})" if _prec(node) < min_prec else text


def render(node: Expr) -> str:
    """Print an AST so that ``parse(render(ast)) == ast``."""
    if isinstance(node, Literal):
        return str(node.value) if node.value >= 0 else f"(-{-node.value})"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.fname}({render(node.arg)})"
    if isinstance(node, Unary):
        return "-" + _wrap(node.child, 3)
    op = node.op
    if op == "pow":
        base = _wrap(node.left, 5)
        if isinstance(node.left, Literal) and "/" in base:
            base = f"({base})"
        exp = node.right.value if isinstance(node.right, Literal) else None
        if exp is None:
            raise NonIntegerExponent("exponent must be a number literal", 0)
        return f"{base}^{exp}"
    if op in ("add", "sub"):
        sym = " + " if op == "add" else " - "
        return _wrap(node.left, 1) + sym + _wrap(node.right, 2)
    left = _wrap(node.left, 2)
    right = _wrap(node.right, 3)
    if op == "mul":
        return f"{left}*{right}"
    sep = " / " if left[-1].isdigit() and right[0].isdigit() else "/"
    return f"{left}{sep}{right}"


# -- backends ----------------------------------------------------------------

def exact_value(fname: str, c: Fraction) -> Fraction | None:
    """fname(c) when it is rational, else None."""
    if fname == "abs":
        return abs(c)
    if fname == "sqrt":
        if c < 0:
            raise DomainError(f"sqrt of negative number {c}")
        return rational_power(c, Fraction(1, 2))
    if fname == "log" and c <= 0:
        raise DomainError(f"log of non-positive number {c}")
    table = {
        "exp": {0: Fraction(1)},
        "sin": {0: Fraction(0)},
        "cos": {0: Fraction(1)},
        "atan": {0: Fraction(0)},
        "log": {1: Fraction(0)},
    }
    return table[fname].get(c)


class Backend:
    """Evaluation target. Subclasses supply lifting, calls and powers."""

    name = "abstract"

    def lift(self, value):
        raise NotImplementedError

    def call(self, fname, value):
        raise NotImplementedError

    def power(self, base, exponent: Fraction):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"


class RealExact(Backend):
    name = "real"

    def lift(self, value):
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise TypeError(f"real backend cannot hold {type(value).__name__}")

    def call(self, fname, value):
        out = exact_value(fname, value)
        if out is None:
            raise ModeError(f"{fname}({value}) is irrational and has no exact value")
        return out

    def power(self, base, exponent):
        if exponent.denominator == 1:
            try:
                return base ** exponent.numerator
            except ZeroDivisionError:
                raise DivisionByZero(f"0 raised to negative power {exponent}") from None
        if base < 0:
            raise DomainError(f"non-integer power of negative number {base}")
        out = rational_power(base, exponent)
        if out is None:
            raise ModeError(f"{base}^({exponent}) is irrational and has no exact value")
        return out


class RatFuncBackend(Backend):
    name = "ratfunc"

    def lift(self, value):
        return RatFunc.coerce(value)

    def call(self, fname, value):
        raise NotAvailable(f"{fname} is not available in Q(x): only rational operations "
                           "extend to the field of rational functions; use the series backend")

    def power(self, base, exponent):
        if exponent.denominator != 1:
            raise NotAvailable(f"non-integer power {exponent} is not available in Q(x)")
        return base ** exponent.numerator


class SeriesBackend(Backend):
    name = "series"

    def __init__(self, mode: str = "exact", window: int = DEFAULT_WINDOW,
                 digits: int = DEFAULT_DIGITS):
        if mode not in ("exact", "approx"):
            raise ValueError(f"unknown series mode {mode!r}")
        self.mode = mode
        self.window = window
        self.digits = None if mode == "exact" else digits

    def __repr__(self):
        return f"SeriesBackend(mode={self.mode!r}, window={self.window}, digits={self.digits})"

    def lift(self, value):
        if isinstance(value, Series):
            if value.digits == self.digits:
                return value
            if value.digits is None:
                return value.to_approx(self.digits)
            raise ModeError("binding precision does not match the backend")
        if isinstance(value, RatFunc):
            return embed_ratfunc(value, self.window, self.digits)
        return Series.constant(value, digits=self.digits, window=self.window)

    def epsilon(self) -> Series:
        return Series.epsilon(digits=self.digits, window=self.window)

    def call(self, fname, value):
        if fname == "abs":
            raise NotAvailable("abs is not analytic at 0 and is rejected by the series backend")
        if fname == "O":
            terms = list(value.items())
            if not value.is_exact() or len(terms) != 1 or terms[0][1] != 1:
                raise DomainError("O(...) takes a single monomial e^k")
            return Series.big_o(terms[0][0], digits=self.digits, window=self.window)
        return extend_analytic(fname, value)

    def power(self, base, exponent):
        if exponent.denominator == 1:
            return base ** exponent.numerator
        return extend_analytic("pow_rational", base, exponent)


def backend_from_tag(tag: str, mode: str = "exact", window: int = DEFAULT_WINDOW,
                     digits: int = DEFAULT_DIGITS) -> Backend:
    if tag == "real":
        return RealExact()
    if tag == "ratfunc":
        return RatFuncBackend()
    if tag == "series":
        return SeriesBackend(mode, window, digits)
    raise ValueError(f"unknown backend {tag!r}")


def evaluate(node: Expr, backend: Backend, bindings: Mapping[str, object] | None = None):
    """Evaluate by structural recursion using the backend's operations."""
    bindings = bindings or {}

    def go(n):
        if isinstance(n, Literal):
            return backend.lift(n.value)
        if isinstance(n, Var):
            if n.name not in bindings:
                raise UnboundVariable(f"variable {n.name!r} is not bound")
            return backend.lift(bindings[n.name])
        if isinstance(n, Unary):
            return -go(n.child)
        if isinstance(n, Call):
            return backend.call(n.fname, go(n.arg))
        if n.op == "pow":
            if not isinstance(n.right, Literal):
                raise NonIntegerExponent("exponent must be a number literal", 0)
            return backend.power(go(n.left), n.right.value)
        a, b = go(n.left), go(n.right)
        try:
            if n.op == "add":
                return a + b
            if n.op == "sub":
                return a - b
            if n.op == "mul":
                return a * b
            return a / b
        except DivisionByZero:
            raise
        except ZeroDivisionError:
            raise DivisionByZero(f"division by zero in {render(n)}") from None

    return go(node)


def eval_expr(src: str | Expr, backend: Backend, bindings=None):
    node = parse(src) if isinstance(src, str) else src
    return evaluate(node, backend, bindings)


def free_variables(node: Expr) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Literal):
        return set()
    if isinstance(node, (Unary,)):
        return free_variables(node.child)
    if isinstance(node, Call):
        return free_variables(node.arg)
    return free_variables(node.left) | free_variables(node.right)


def is_rational_expr(node: Expr) -> bool:
    """True when the tree uses only field operations and integer powers."""
    if isinstance(node, (Literal, Var)):
        return True
    if isinstance(node, Call):
        return False
    if isinstance(node, Unary):
        return is_rational_expr(node.child)
    if node.op == "pow" and node.right.value.denominator != 1:
        return False
    return is_rational_expr(node.left) and is_rational_expr(node.right)


# -- series literals ---------------------------------------------------------

def parse_series(src: str, digits: int | None = None, window: int = DEFAULT_WINDOW) -> Series:
    """Read the printed form of a series, e.g. ``2 - 1*e^1 + O(e^16)``."""
    node = _Parser(src, FUNCTIONS | {"O"}).parse()
    out = evaluate(node, SeriesBackend("exact", window), {"e": Series.epsilon(window=window)})
    return out if digits is None else out.to_approx(digits)


# -- symbolic differentiation (test oracle) ----------------------------------

_ZERO, _ONE = Literal(Fraction(0)), Literal(Fraction(1))


def _is(node, v):
    return isinstance(node, Literal) and node.value == v


def _add(a, b):
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    if isinstance(a, Literal) and isinstance(b, Literal):
        return Literal(a.value + b.value)
    return Binary("add", a, b)


def _neg(a):
    if isinstance(a, Literal):
        return Literal(-a.value)
    if isinstance(a, Unary):
        return a.child
    return Unary("neg", a)


def _sub(a, b):
    if _is(b, 0):
        return a
    if _is(a, 0):
        return _neg(b)
    if isinstance(a, Literal) and isinstance(b, Literal):
        return Literal(a.value - b.value)
    return Binary("sub", a, b)


def _mul(a, b):
    if _is(a, 0) or _is(b, 0):
        return _ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    if isinstance(a, Literal) and isinstance(b, Literal):
        return Literal(a.value * b.value)
    return Binary("mul", a, b)


def _div(a, b):
    if _is(a, 0):
        return _ZERO
    if _is(b, 1):
        return a
    if isinstance(a, Literal) and isinstance(b, Literal) and b.value != 0:
        return Literal(a.value / b.value)
    return Binary("div", a, b)


def _pow(a, n: Fraction):
    if n == 0:
        return _ONE
    if n == 1:
        return a
    if isinstance(a, Literal) and n.denominator == 1 and (a.value != 0 or n > 0):
        return Literal(a.value ** int(n))
    return Binary("pow", a, Literal(n))


def symbolic_diff(node: Expr, var: str) -> Expr:
    """Derivative by the usual rules, with constant folding only."""
    d = lambda n: symbolic_diff(n, var)  # noqa: E731
    if isinstance(node, Literal):
        return _ZERO
    if isinstance(node, Var):
        return _ONE if node.name == var else _ZERO
    if isinstance(node, Unary):
        return _neg(d(node.child))
    if isinstance(node, Call):
        u, du = node.arg, d(node.arg)
        f = node.fname
        if f == "abs":
            raise NonDifferentiableNode("abs has no derivative rule (not differentiable at 0)")
        if f == "exp":
            return _mul(node, du)
        if f == "sin":
            return _mul(Call("cos", u), du)
        if f == "cos":
            return _mul(_neg(Call("sin", u)), du)
        if f == "log":
            return _div(du, u)
        if f == "sqrt":
            return _div(du, _mul(Literal(Fraction(2)), node))
        if f == "atan":
            return _div(du, _add(_ONE, _pow(u, Fraction(2))))
        raise NonDifferentiableNode(f"no derivative rule for {f}")
    u, v = node.left, node.right
    if node.op == "add":
        return _add(d(u), d(v))
    if node.op == "sub":
        return _sub(d(u), d(v))
    if node.op == "mul":
        return _add(_mul(d(u), v), _mul(u, d(v)))
    if node.op == "div":
        return _div(_sub(_mul(d(u), v), _mul(u, d(v))), _pow(v, Fraction(2)))
    n = v.value
    return _mul(_mul(Literal(n), _pow(u, n - 1)), d(u))
