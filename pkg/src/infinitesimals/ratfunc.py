"""The ordered field Q(x) of rational functions, x a positive infinitesimal.

A rational function is positive when it is positive on some interval
(0, a). Because a nonzero rational function has finitely many roots, this
is decided exactly by the sign of the lowest-order coefficients of its
numerator and denominator.

Elements are kept in canonical form: numerator and denominator coprime,
and the lowest nonzero coefficient of the denominator equal to 1. Two
elements are equal iff they are structurally equal.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Union

from .errors import DivisionByZero, NotFinite, PoleAtPoint
from .poly import Poly, poly_gcd


class Sign(enum.Enum):
    NEGATIVE = "Negative"
    ZERO = "Zero"
    POSITIVE = "Positive"

    @classmethod
    def of(cls, value) -> Sign:
        if value > 0:
            return cls.POSITIVE
        if value < 0:
            return cls.NEGATIVE
        return cls.ZERO

    def __int__(self):
        return {"Negative": -1, "Zero": 0, "Positive": 1}[self.value]

    def __str__(self):
        return self.value


class Ordering(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    UNKNOWN = "Unknown"

    @classmethod
    def from_sign(cls, sign: Sign) -> Ordering:
        return {Sign.NEGATIVE: cls.LESS, Sign.ZERO: cls.EQUAL, Sign.POSITIVE: cls.GREATER}[sign]

    def __str__(self):
        return self.value


class Classification(enum.Enum):
    ZERO = "Zero"
    POSITIVE_INFINITESIMAL = "PositiveInfinitesimal"
    NEGATIVE_INFINITESIMAL = "NegativeInfinitesimal"
    FINITE = "FiniteNonInfinitesimal"
    POSITIVE_INFINITE = "PositiveInfinite"
    NEGATIVE_INFINITE = "NegativeInfinite"

    @classmethod
    def from_order(cls, order: int | None, sign: Sign) -> Classification:
        """Tag from the order at zero (None for the zero element) and sign."""
        if order is None or sign is Sign.ZERO:
            return cls.ZERO
        if order > 0:
            return cls.POSITIVE_INFINITESIMAL if sign is Sign.POSITIVE else cls.NEGATIVE_INFINITESIMAL
        if order < 0:
            return cls.POSITIVE_INFINITE if sign is Sign.POSITIVE else cls.NEGATIVE_INFINITE
        return cls.FINITE

    @property
    def is_finite(self) -> bool:
        return self not in (Classification.POSITIVE_INFINITE, Classification.NEGATIVE_INFINITE)

    @property
    def is_infinitesimal(self) -> bool:
        return self in (Classification.POSITIVE_INFINITESIMAL, Classification.NEGATIVE_INFINITESIMAL)

    def __str__(self):
        return self.value


Scalar = Union[int, Fraction]


class RatFunc:
    """Immutable element of Q(x) in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.constant(num)
        if den is None:
            den = Poly.constant(1)
        elif not isinstance(den, Poly):
            den = Poly.constant(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly(), Poly.constant(1)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.divmod(g)[0], den.divmod(g)[0]
            norm = den.low_coeff()
            num, den = num.scale(1 / norm), den.scale(1 / norm)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, key, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def x(cls) -> RatFunc:
        """The field generator, a positive infinitesimal."""
        return cls(Poly.monomial(1))

    @classmethod
    def coerce(cls, value) -> RatFunc:
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise TypeError(f"cannot coerce {type(value).__name__} to RatFunc")

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def order(self) -> int | None:
        """ord_0(num) - ord_0(den); None for the zero element."""
        if self.is_zero():
            return None
        return self.num.order() - self.den.order()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num.coeffs[0] if self.num.coeffs else Fraction(0)

    def __eq__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- field operations --------------------------------------------------

    def __add__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def reciprocal(self) -> RatFunc:
        if self.is_zero():
            raise DivisionByZero("division by the zero element of Q(x)")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    # -- order ---------------------------------------------------------------

    def sign(self) -> Sign:
        return low_order_sign(self)

    def __lt__(self, other):
        return compare(self, RatFunc.coerce(other)) is Ordering.LESS

    def __le__(self, other):
        return compare(self, RatFunc.coerce(other)) is not Ordering.GREATER

    def __gt__(self, other):
        return compare(self, RatFunc.coerce(other)) is Ordering.GREATER

    def __ge__(self, other):
        return compare(self, RatFunc.coerce(other)) is not Ordering.LESS

    # -- display -------------------------------------------------------------

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        num = format_poly(self.num)
        if self.den == Poly.constant(1):
            return num
        den = format_poly(self.den)
        if sum(1 for c in self.num.coeffs if c) > 1:
            num = f"({num})"
        if sum(1 for c in self.den.coeffs if c) > 1:
            den = f"({den})"
        return f"{num}/{den}"


def format_poly(p: Poly, var: str = "x") -> str:
    """Render a polynomial in the expression syntax, lowest power first."""
    if p.is_zero():
        return "0"
    parts = []
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def field_arith(a: RatFunc, b: RatFunc | None, op: str) -> RatFunc:
    """Dispatch one field operation by name: add, sub, mul, div, neg."""
    if op == "neg":
        return -a
    ops = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }
    if op not in ops:
        raise ValueError(f"unknown field operation {op!r}")
    return ops[op]()


def low_order_sign(f: RatFunc) -> Sign:
    """Sign of f(v) for every sufficiently small real v > 0."""
    if f.is_zero():
        return Sign.ZERO
    return Sign.of(f.num.low_coeff() * f.den.low_coeff())


def compare(f: RatFunc, g: RatFunc) -> Ordering:
    """Sign of f - g near 0.

    Both denominators have lowest coefficient 1, so the sign of f - g is
    that of the cross product f.num*g.den - g.num*f.den; no gcd needed.
    """
    f, g = RatFunc.coerce(f), RatFunc.coerce(g)
    diff = f.num * g.den - g.num * f.den
    if diff.is_zero():
        return Ordering.EQUAL
    return Ordering.from_sign(Sign.of(diff.low_coeff()))


def classify(f: RatFunc) -> Classification:
    return Classification.from_order(f.order(), low_order_sign(f))


def standard_part(f: RatFunc) -> Fraction:
    order = f.order()
    if order is None or order > 0:
        return Fraction(0)
    if order < 0:
        raise NotFinite(f"{f} is infinite; the standard part is defined only for finite elements")
    return f.num.low_coeff() / f.den.low_coeff()


def decompose_finite(k: RatFunc) -> tuple[Fraction, RatFunc]:
    """Split a finite element as real part plus infinitesimal-or-zero part."""
    c = standard_part(k)
    return c, k - c


def magnify1d(f: RatFunc, c: Scalar) -> RatFunc:
    """The microscope (f - c)/x: sends c to 0 and c + x to 1."""
    return (f - Fraction(c)) / RatFunc.x()


def eval_at(f: RatFunc, v: Scalar) -> Fraction:
    d = f.den(v)
    if d == 0:
        raise PoleAtPoint(f"{f} has a pole at x = {v}")
    return f.num(v) / d


def positive_interval(f: RatFunc) -> Fraction:
    """A rational a > 0 such that f has constant nonzero sign on (0, a).

    Uses the Cauchy lower bound on root moduli of num*den with its
    zero roots divided out.
    """
    if f.is_zero():
        raise ValueError("the zero function has no sign")
    p = f.num * f.den
    p = p.shift_down(p.order())
    a0 = abs(p.coeffs[0])
    rest = max((abs(c) for c in p.coeffs[1:]), default=Fraction(0))
    return a0 / (a0 + rest) / 2 if rest else Fraction(1)
