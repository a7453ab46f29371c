"""Derivatives, Taylor coefficients and one-sided limits by infinitesimal increments.

``f'(x0)`` is the standard part of ``(f(x0 + e) - f(x0)) / e`` computed in
the superreal series field. The quotient itself is returned as a witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Union

from .errors import EmptyWindow, InfinitesimalError, NotDifferentiableHere, WindowTooSmall
from .expr import Expr, SeriesBackend, evaluate, free_variables, parse
from .ratfunc import Sign
from .series import DEFAULT_DIGITS, DEFAULT_WINDOW, Coefficient, Series

Point = Union[int, Fraction, Decimal]


@dataclass(frozen=True)
class DerivativeResult:
    value: Coefficient
    witness: Series


@dataclass(frozen=True)
class Limit:
    """Outcome of ``limit_at``: kind is ``finite``, ``infinite`` or ``none``."""

    kind: str
    value: Coefficient | None = None
    sign: Sign | None = None

    def __str__(self):
        if self.kind == "finite":
            return str(self.value)
        if self.kind == "infinite":
            return f"Infinite({'+' if self.sign is Sign.POSITIVE else '-'})"
        return "NoLimit"


def _as_ast(f) -> Expr:
    return parse(f) if isinstance(f, str) else f


def _variable(ast: Expr, var: str | None) -> str:
    if var is not None:
        return var
    names = free_variables(ast)
    if len(names) > 1:
        raise ValueError(f"expression has several variables {sorted(names)}; name one")
    return names.pop() if names else "x"


def _close(a: Coefficient, b: Coefficient, digits: int | None) -> bool:
    if digits is None:
        return a == b
    scale = max(abs(a), abs(b), Decimal(1))
    return abs(a - b) <= scale * Decimal(10) ** (-(digits - 5))


def expand_at(f, x0: Point, mode: str = "exact", window: int = DEFAULT_WINDOW,
              digits: int = DEFAULT_DIGITS, var: str | None = None, scale: int = 1) -> Series:
    """f(x0 + scale*e) in the series field."""
    ast = _as_ast(f)
    backend = SeriesBackend(mode, window, digits)
    arg = backend.lift(x0) + backend.epsilon() * scale
    return evaluate(ast, backend, {_variable(ast, var): arg})


def derivative(f, x0: Point, mode: str = "exact", window: int = DEFAULT_WINDOW,
               digits: int = DEFAULT_DIGITS, var: str | None = None) -> DerivativeResult:
    ast = _as_ast(f)
    name = _variable(ast, var)
    backend = SeriesBackend(mode, window, digits)
    s = expand_at(ast, x0, mode, window, digits, name)
    if s.coeffs and s.lead < 0:
        raise NotDifferentiableHere(f"f({x0} + e) = {s} is infinite")
    try:
        at_point = evaluate(ast, backend, {name: backend.lift(x0)})
    except InfinitesimalError as exc:
        raise NotDifferentiableHere(f"f is not defined at {x0}: {exc}") from exc
    c0 = s.coeff(0)
    if not _close(at_point.coeff(0), c0, backend.digits):
        raise NotDifferentiableHere(f"f({x0}) differs from the standard part of f({x0} + e)")
    witness = (s - c0).shift(-1)
    value = witness.standard_part()

    # the answer must not depend on which infinitesimal was used
    s2 = expand_at(ast, x0, mode, window, digits, name, scale=2)
    other = ((s2 - s2.coeff(0)).shift(-1) / 2).standard_part()
    if not _close(value, other, backend.digits):
        raise NotDifferentiableHere(f"standard parts disagree for e and 2e: {value} vs {other}")
    return DerivativeResult(value, witness)


def taylor(f, x0: Point, n: int, mode: str = "exact", window: int = DEFAULT_WINDOW,
           digits: int = DEFAULT_DIGITS, var: str | None = None) -> list[Coefficient]:
    """Coefficients a_0..a_n of f(x0 + e); the k-th derivative is k! * a_k."""
    if n > window:
        raise WindowTooSmall(f"order {n} exceeds the series window {window}")
    s = expand_at(f, x0, mode, window, digits, var)
    if s.coeffs and s.lead < 0:
        raise NotDifferentiableHere(f"f({x0} + e) = {s} is infinite")
    try:
        return [s.coeff(k) for k in range(n + 1)]
    except EmptyWindow as exc:
        raise WindowTooSmall(str(exc)) from exc


def nth_derivative(f, x0: Point, k: int, **kwargs) -> Coefficient:
    a = taylor(f, x0, k, **kwargs)[k]
    return a * math.factorial(k)


def limit_at(f, x0: Point, side: str = "above", mode: str = "exact",
             window: int = DEFAULT_WINDOW, digits: int = DEFAULT_DIGITS,
             var: str | None = None) -> Limit:
    """Standard part of f(x0 + e) (above) or f(x0 - e) (below)."""
    if side not in ("above", "below"):
        raise ValueError(f"side must be 'above' or 'below', not {side!r}")
    s = expand_at(f, x0, mode, window, digits, var, scale=1 if side == "above" else -1)
    if s.coeffs and s.lead < 0:
        return Limit("infinite", sign=s.sign())
    try:
        return Limit("finite", value=s.standard_part())
    except EmptyWindow:
        return Limit("none")
