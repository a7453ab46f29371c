"""Truncated Laurent series in an infinitesimal e (the superreal field).

A :class:`Series` stores the coefficients of ``e**lead, e**(lead+1), ...``
together with ``known_upto``: every coefficient at an exponent below
``known_upto`` is certified, everything from ``known_upto`` on is unknown
(not zero). Series built from exact finite data, such as the embedding of
a polynomial, have ``known_upto == inf``.

Two coefficient modes exist. Exact mode uses :class:`fractions.Fraction`;
approx mode uses :class:`decimal.Decimal` under an explicit precision
(``digits``) and is needed whenever a transcendental value at a nonzero
point is irrational. Modes never mix within one element or one operation.

Window and precision travel with every element; there is no global state.
"""

from __future__ import annotations

import functools
import math
from decimal import Context, Decimal
from fractions import Fraction
from typing import Iterable, Mapping, Union

import mpmath

from .errors import DivisionByZero, DomainError, EmptyWindow, ModeError, NotFinite
from .ratfunc import Classification, Ordering, RatFunc, Sign

INF = math.inf
DEFAULT_WINDOW = 16
DEFAULT_DIGITS = 50

Coefficient = Union[Fraction, Decimal]

FUNCTIONS = ("exp", "sin", "cos", "log", "sqrt", "atan", "pow_rational")


class ExactDomain:
    digits = None

    def coerce(self, v) -> Fraction:
        if isinstance(v, Decimal):
            raise ModeError("approx coefficient used in an exact-mode series")
        return Fraction(v)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a


class ApproxDomain:
    def __init__(self, digits: int):
        self.digits = digits
        self.ctx = Context(prec=digits)

    def coerce(self, v) -> Decimal:
        if isinstance(v, Decimal):
            return self.ctx.plus(v)
        if isinstance(v, int):
            return self.ctx.plus(Decimal(v))
        v = Fraction(v)
        return self.ctx.divide(Decimal(v.numerator), Decimal(v.denominator))

    def add(self, a, b):
        return self.ctx.add(a, b)

    def sub(self, a, b):
        return self.ctx.subtract(a, b)

    def mul(self, a, b):
        return self.ctx.multiply(a, b)

    def div(self, a, b):
        return self.ctx.divide(a, b)

    def neg(self, a):
        return self.ctx.minus(a)


_EXACT = ExactDomain()


@functools.lru_cache(maxsize=None)
def _approx_domain(digits: int) -> ApproxDomain:
    return ApproxDomain(digits)


def domain_for(digits: int | None):
    return _EXACT if digits is None else _approx_domain(digits)


def decimal_text(d: Decimal) -> str:
    """Positional notation with every stored digit (no context rounding)."""
    sign, digits, exp = d.as_tuple()
    text = "".join(map(str, digits)) or "0"
    if exp >= 0:
        body = text + "0" * exp
    else:
        text = text.rjust(-exp + 1, "0")
        body = text[:exp] + "." + text[exp:]
    return ("-" if sign else "") + body


class Series:
    """Immutable truncated Laurent series element."""

    __slots__ = ("lead", "coeffs", "known_upto", "digits", "window")

    def __init__(self, coeffs: Mapping[int, Coefficient] | Iterable[Coefficient] = (),
                 lead: int = 0, known_upto: int | float = INF,
                 digits: int | None = None, window: int = DEFAULT_WINDOW):
        if window < 1:
            raise ValueError("series window must be positive")
        if digits is not None and digits < 20:
            raise ValueError("approx mode needs at least 20 digits")
        dom = domain_for(digits)
        if isinstance(coeffs, Mapping):
            items = {int(k): dom.coerce(v) for k, v in coeffs.items()}
        else:
            items = {lead + i: dom.coerce(v) for i, v in enumerate(coeffs)}
        items = {k: v for k, v in items.items() if v != 0 and k < known_upto}
        if items:
            lo, hi = min(items), max(items)
            stored = tuple(items.get(k, dom.coerce(0)) for k in range(lo, hi + 1))
        else:
            lo, stored = (0 if known_upto == INF else int(known_upto)), ()
        set_ = object.__setattr__
        set_(self, "lead", lo)
        set_(self, "coeffs", stored)
        set_(self, "known_upto", known_upto if known_upto == INF else int(known_upto))
        set_(self, "digits", digits)
        set_(self, "window", window)

    def __setattr__(self, key, value):
        raise AttributeError("Series is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, c, digits=None, window=DEFAULT_WINDOW) -> Series:
        return cls([c], digits=digits, window=window)

    @classmethod
    def epsilon(cls, digits=None, window=DEFAULT_WINDOW) -> Series:
        return cls({1: 1}, digits=digits, window=window)

    @classmethod
    def big_o(cls, k: int, digits=None, window=DEFAULT_WINDOW) -> Series:
        """The unknown remainder O(e**k): zero below k, unknown from k on."""
        return cls((), known_upto=k, digits=digits, window=window)

    def _like(self, coeffs, known_upto=INF, window=None) -> Series:
        return Series(coeffs, known_upto=known_upto, digits=self.digits,
                      window=self.window if window is None else window)

    def _coerce(self, other) -> Series:
        if isinstance(other, Series):
            if other.digits != self.digits:
                raise ModeError(f"cannot mix series modes ({self.mode} vs {other.mode})")
            return other
        if isinstance(other, (int, Fraction, Decimal)):
            return Series.constant(other, digits=self.digits, window=self.window)
        raise TypeError(f"cannot coerce {type(other).__name__} to Series")

    # -- structure -----------------------------------------------------------

    @property
    def mode(self) -> str:
        return "exact" if self.digits is None else "approx"

    @property
    def domain(self):
        return domain_for(self.digits)

    def is_exact(self) -> bool:
        return self.known_upto == INF

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.is_exact()

    def has_nonzero(self) -> bool:
        return bool(self.coeffs)

    def order(self) -> int | None:
        """Exponent of the lowest certified nonzero term, if any."""
        return self.lead if self.coeffs else None

    def coeff(self, k: int) -> Coefficient:
        if k >= self.known_upto:
            raise EmptyWindow(f"coefficient of e^{k} lies outside the known window (< {self.known_upto})")
        i = k - self.lead
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.domain.coerce(0)

    def items(self):
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.lead + i, c

    def truncate(self, upto: int | float) -> Series:
        if upto >= self.known_upto:
            return self
        return Series(dict(self.items()), known_upto=upto, digits=self.digits, window=self.window)

    def shift(self, k: int) -> Series:
        """Multiply by e**k."""
        return self._like({e + k: c for e, c in self.items()}, self.known_upto + k)

    def to_approx(self, digits: int = DEFAULT_DIGITS) -> Series:
        if self.digits == digits:
            return self
        if self.digits is not None:
            raise ModeError("series is already in approx mode with a different precision")
        return Series(dict(self.items()), known_upto=self.known_upto, digits=digits, window=self.window)

    def with_window(self, window: int) -> Series:
        return Series(dict(self.items()), known_upto=self.known_upto, digits=self.digits, window=window)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.lead, self.coeffs, self.known_upto, self.digits) == (
            other.lead, other.coeffs, other.known_upto, other.digits)

    def __hash__(self):
        return hash((self.lead, self.coeffs, self.known_upto, self.digits))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        dom = self.domain
        ku = min(self.known_upto, other.known_upto)
        out = dict(self.items())
        for e, c in other.items():
            out[e] = dom.add(out[e], c) if e in out else c
        return self._like(out, ku, min(self.window, other.window))

    __radd__ = __add__

    def __neg__(self):
        dom = self.domain
        return self._like({e: dom.neg(c) for e, c in self.items()}, self.known_upto)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        window = min(self.window, other.window)
        if self.is_exact_zero() or other.is_exact_zero():
            return self._like({}, INF, window)
        dom = self.domain
        ku = min(self.known_upto + other.lead, other.known_upto + self.lead)
        out: dict[int, Coefficient] = {}
        b_items = list(other.items())
        for ea, ca in self.items():
            for eb, cb in b_items:
                e = ea + eb
                if e >= ku:
                    break
                p = dom.mul(ca, cb)
                out[e] = dom.add(out[e], p) if e in out else p
        return self._like(out, ku, window)

    __rmul__ = __mul__

    def inverse(self) -> Series:
        if self.is_exact_zero():
            raise DivisionByZero("division by the zero series")
        if not self.coeffs:
            raise EmptyWindow(f"divisor {self} has no certified nonzero term")
        dom = self.domain
        lead = self.lead
        if self.is_exact() and len(self.coeffs) == 1:
            return self._like({-lead: dom.div(dom.coerce(1), self.coeffs[0])}, INF)
        known_terms = self.known_upto - lead
        terms = int(min(known_terms, self.window))
        b = [self.coeff(lead + i) for i in range(terms)]
        q = [dom.div(dom.coerce(1), b[0])]
        for k in range(1, terms):
            acc = dom.coerce(0)
            for i in range(1, k + 1):
                if b[i]:
                    acc = dom.add(acc, dom.mul(b[i], q[k - i]))
            q.append(dom.neg(dom.div(acc, b[0])))
        return self._like({-lead + i: c for i, c in enumerate(q)}, -lead + terms)

    def __truediv__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self._like([1], INF), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- order ---------------------------------------------------------------

    def sign(self) -> Sign | None:
        """Sign of the element, or None when the window cannot decide it."""
        if self.coeffs:
            return Sign.of(self.coeffs[0])
        return Sign.ZERO if self.is_exact() else None

    def classify(self) -> Classification:
        return series_classify(self)

    def standard_part(self) -> Coefficient:
        return series_standard_part(self)

    # -- display -------------------------------------------------------------

    def __repr__(self):
        return f"Series({self})"

    def __str__(self):
        parts = []
        for e, c in self.items():
            mag = c.copy_abs() if isinstance(c, Decimal) else abs(c)
            mag_s = decimal_text(mag) if isinstance(mag, Decimal) else str(mag)
            body = mag_s if e == 0 else f"{mag_s}*e^{e}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        if not self.is_exact():
            parts.append((" + " if parts else "") + f"O(e^{self.known_upto})")
        return "".join(parts) if parts else "0"


# -- module-level operations --------------------------------------------------

def series_arith(a: Series, b: Series | None, op: str) -> Series:
    if op == "neg":
        return -a
    if a.digits != b.digits:
        raise ModeError("series operands are in different modes")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown series operation {op!r}")


def series_compare(a: Series, b: Series) -> Ordering:
    """Order by the lowest nonzero coefficient of a - b.

    Equality is reported only when the difference is exactly zero as
    finite data; a difference that merely vanishes on the window is
    ``Unknown``.
    """
    if a.digits != b.digits:
        raise ModeError("series operands are in different modes")
    sign = (a - b).sign()
    if sign is None:
        return Ordering.UNKNOWN
    return Ordering.from_sign(sign)


def series_classify(s: Series) -> Classification:
    if not s.coeffs:
        if s.is_exact():
            return Classification.ZERO
        raise EmptyWindow(f"{s}: no certified nonzero term, classification undetermined")
    return Classification.from_order(s.lead, Sign.of(s.coeffs[0]))


def series_standard_part(s: Series) -> Coefficient:
    if s.coeffs and s.lead < 0:
        raise NotFinite(f"{s} is infinite; the standard part is defined only for finite elements")
    return s.coeff(0)


def embed_ratfunc(f: RatFunc, window: int = DEFAULT_WINDOW, digits: int | None = None) -> Series:
    """Laurent expansion of f at 0 with x mapped to e."""
    num = Series(dict(enumerate(f.num.coeffs)), window=window)
    den = Series(dict(enumerate(f.den.coeffs)), window=window)
    out = num / den
    return out if digits is None else out.to_approx(digits)


# -- analytic extension ----------------------------------------------------------

def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** k == n else None


def rational_power(c: Fraction, p: Fraction) -> Fraction | None:
    """c**p when it is rational (c > 0), else None."""
    p = Fraction(p)
    if p.denominator == 1:
        return Fraction(c) ** p.numerator
    c = Fraction(c)
    if c <= 0:
        return None
    rn = _iroot(c.numerator, p.denominator)
    rd = _iroot(c.denominator, p.denominator)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd) ** p.numerator


def _exact_constants(fname: str, c: Fraction, p: Fraction | None) -> list[Fraction] | None:
    if fname == "exp":
        return [Fraction(1)] if c == 0 else None
    if fname in ("sin", "cos"):
        return [Fraction(0), Fraction(1)] if c == 0 else None
    if fname == "log":
        return [Fraction(0)] if c == 1 else None
    if fname == "atan":
        return [Fraction(0)] if c == 0 else None
    value = rational_power(c, p)
    return None if value is None else [value]


def _approx_constants(fname: str, c, p: Fraction | None, dom: ApproxDomain) -> list[Decimal]:
    with mpmath.workdps(dom.digits + 10):
        x = mpmath.mpf(str(c)) if isinstance(c, Decimal) else mpmath.mpf(c.numerator) / c.denominator
        if fname == "exp":
            vals = [mpmath.exp(x)]
        elif fname in ("sin", "cos"):
            vals = [mpmath.sin(x), mpmath.cos(x)]
        elif fname == "log":
            vals = [mpmath.log(x)]
        elif fname == "atan":
            vals = [mpmath.atan(x)]
        else:
            vals = [mpmath.power(x, mpmath.mpf(p.numerator) / p.denominator)]
        return [dom.coerce(Decimal(mpmath.nstr(v, dom.digits + 5, strip_zeros=False))) for v in vals]


def taylor_coefficients(fname: str, c, count: int, dom, p: Fraction | None = None) -> list:
    """First ``count`` Taylor coefficients of fname about the real point c."""
    if fname in ("log", "pow_rational") and c <= 0:
        raise DomainError(f"{fname} needs a positive standard part, got {c}")
    if dom.digits is None:
        consts = _exact_constants(fname, Fraction(c), p)
        if consts is None:
            arg = f"{fname}({c})" if fname != "pow_rational" else f"{c}^({p})"
            raise ModeError(f"{arg} is irrational; use approx mode")
    else:
        consts = _approx_constants(fname, c, p, dom)
    c = dom.coerce(c)
    one = dom.coerce(1)
    out = []
    fact = 1
    if fname == "exp":
        for k in range(count):
            fact *= max(k, 1)
            out.append(dom.div(consts[0], dom.coerce(fact)))
    elif fname in ("sin", "cos"):
        s, co = consts
        cycle = [s, co, dom.neg(s), dom.neg(co)]
        shift = 0 if fname == "sin" else 1
        for k in range(count):
            fact *= max(k, 1)
            out.append(dom.div(cycle[(k + shift) % 4], dom.coerce(fact)))
    elif fname == "log":
        out.append(consts[0])
        power = one
        for k in range(1, count):
            power = dom.mul(power, c)
            term = dom.div(one, dom.mul(dom.coerce(k), power))
            out.append(term if k % 2 else dom.neg(term))
    elif fname == "pow_rational":
        binom = Fraction(1)
        power = one
        for k in range(count):
            if k:
                binom = binom * (p - (k - 1)) / k
                power = dom.mul(power, c)
            out.append(dom.div(dom.mul(consts[0], dom.coerce(binom)), power))
    elif fname == "atan":
        # 1/(1 + (c+t)^2) expanded in t, then integrated termwise
        q0, q1 = dom.add(one, dom.mul(c, c)), dom.mul(dom.coerce(2), c)
        b: list = []
        for k in range(count - 1):
            acc = one if k == 0 else dom.coerce(0)
            if k >= 1:
                acc = dom.sub(acc, dom.mul(q1, b[k - 1]))
            if k >= 2:
                acc = dom.sub(acc, b[k - 2])
            b.append(dom.div(acc, q0))
        out = [consts[0]] + [dom.div(bk, dom.coerce(k + 1)) for k, bk in enumerate(b)]
    else:
        raise ValueError(f"unknown function {fname!r}")
    return out[:count]


def extend_analytic(fname: str, s: Series, exponent: Fraction | None = None) -> Series:
    """Evaluate fname at a finite series by Taylor expansion about its standard part.

    ``exponent`` is required for ``pow_rational``; ``sqrt`` is the
    exponent-1/2 case.
    """
    if fname == "sqrt":
        fname, exponent = "pow_rational", Fraction(1, 2)
    if fname not in FUNCTIONS:
        raise ValueError(f"no analytic extension for {fname!r}")
    if fname == "pow_rational":
        if exponent is None:
            raise ValueError("pow_rational needs an exponent")
        exponent = Fraction(exponent)
        if exponent.denominator == 1:
            return s ** exponent.numerator
    if s.coeffs and s.lead < 0:
        raise NotFinite(f"{fname} is extended only at finite arguments; {s} is infinite")
    c = s.coeff(0)
    u = s - c
    dom = s.domain
    if u.is_exact_zero():
        a = taylor_coefficients(fname, c, 1, dom, exponent)
        return s._like([a[0]], INF)
    target = min(s.known_upto, s.window)
    step = u.lead if u.coeffs else int(u.known_upto)
    count = max(1, -(-int(target) // max(step, 1)))
    a = taylor_coefficients(fname, c, count, dom, exponent)
    acc = s._like([a[-1]], INF)
    for ak in reversed(a[:-1]):
        acc = (acc * u).truncate(target) + ak
    return acc.truncate(target)
