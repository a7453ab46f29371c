from decimal import Decimal
from fractions import Fraction
import math
import random

import mpmath
import pytest
import sympy

from infinitesimals.calculus import Limit, derivative, limit_at, nth_derivative, taylor
from infinitesimals.errors import ModeError, NotDifferentiableHere, WindowTooSmall

from infinitesimals.ratfunc import Sign
from infinitesimals.series import Series

TRANSCENDENTAL = ["sin", "cos", "exp", "log", "atan"]


def close(a, b, digits):
    a, b = Decimal(str(a)) if not isinstance(a, Decimal) else a, Decimal(str(b)) if not isinstance(b, Decimal) else b
    return abs(a - b) <= Decimal(10) ** -digits * max(abs(a), abs(b), Decimal(1))


def test_derivative_examples():
    r = derivative("x^2", 3)
    assert r.value == 6
    assert r.witness == Series([6, 1])
    assert derivative("5", Fraction(7, 3)).value == 0
    assert close(derivative("sin(x)", 0, mode="approx").value, 1, 45)
    assert derivative("sin(x)", 0).value == 1  # exact at 0
    with pytest.raises(NotDifferentiableHere):
        derivative("1/x", 0)
    with pytest.raises(ModeError):
        derivative("sin(x)", 1)


def test_taylor_examples():
    assert taylor("x^2", 3, 2) == [9, 6, 1]
    assert taylor("exp(x)", 0, 4) == [1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]
    assert taylor("x", 0, 3) == [0, 1, 0, 0]
    with pytest.raises(WindowTooSmall):
        taylor("exp(x)", 0, 20, window=8)
    assert nth_derivative("x^5", 2, 3) == 60 * 4


def test_limit_examples():
    assert limit_at("sin(x)/x", 0) == Limit("finite", value=1)
    assert str(limit_at("1/x", 0)) == "Infinite(+)"
    assert str(limit_at("1/x", 0, "below")) == "Infinite(-)"
    assert limit_at("(x^2 - 9)/(x - 3)", 3).value == 6
    assert limit_at("(x^2 - 9)/(x - 3)", 3, "below").value == 6


def random_poly(rng, degree):
    return [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(degree + 1)]


def poly_src(cs):
    return " + ".join(f"({c.numerator}/{c.denominator})*x^{k}" if c.denominator != 1 else f"({c.numerator})*x^{k}"
                      for k, c in enumerate(cs))


def test_polynomial_exactness_vs_sympy():
    rng = random.Random(3)
    X = sympy.Symbol("x")
    for _ in range(40):
        cs = random_poly(rng, rng.randint(0, 8))
        x0 = Fraction(rng.randint(-30, 30), rng.randint(1, 9))
        p = sum(sympy.Rational(c.numerator, c.denominator) * X**k for k, c in enumerate(cs))
        want = sympy.diff(p, X).subs(X, sympy.Rational(x0.numerator, x0.denominator))
        got = derivative(poly_src(cs), x0).value
        assert got == Fraction(int(want.p), int(want.q))


def test_finite_difference_cross_check():
    rng = random.Random(17)
    h = mpmath.mpf("1e-6")
    for fname in TRANSCENDENTAL:
        f = getattr(mpmath, fname)
        for _ in range(20):
            x0 = Fraction(rng.randint(1, 400), 100)  # positive so log is defined
            d = derivative(f"{fname}(x)", x0, mode="approx").value
            with mpmath.workdps(30):
                x = mpmath.mpf(x0.numerator) / x0.denominator
                fd = (f(x + h) - f(x - h)) / (2 * h)
            assert abs(float(d) - float(fd)) <= 1e-6 * (1 + abs(float(d)))


def test_linearity_exact():
    rng = random.Random(23)
    for _ in range(20):
        f = poly_src(random_poly(rng, 4))
        g = f"1/(1 + x^2) + ({poly_src(random_poly(rng, 3))})"
        a, b = Fraction(rng.randint(-5, 5), 3), Fraction(rng.randint(-5, 5), 7)
        x0 = Fraction(rng.randint(-10, 10), 3)
        combo = f"({a.numerator}/{a.denominator})*({f}) + ({b.numerator}/{b.denominator})*({g})"
        assert derivative(combo, x0).value == a * derivative(f, x0).value + b * derivative(g, x0).value


@pytest.mark.parametrize("src,x0,mode", [
    ("x^3 - 2*x", Fraction(1, 2), "exact"),
    ("exp(x)*sin(x)", 0, "exact"),
    ("atan(x)", 0, "exact"),
    ("log(x)", Fraction(3, 2), "approx"),
    ("cos(x)/(2 + x)", Fraction(1, 3), "approx"),
    ("sqrt(x)", 4, "exact"),
])
def test_taylor_derivative_consistency(src, x0, mode):
    assert taylor(src, x0, 3, mode=mode)[1] == derivative(src, x0, mode=mode).value


@pytest.mark.parametrize("fname", TRANSCENDENTAL)
def test_taylor_order_12_vs_mpmath(fname):
    x0 = Fraction(7, 5)
    got = taylor(f"{fname}(x)", x0, 12, mode="approx", digits=60)
    with mpmath.workdps(90):
        want = mpmath.taylor(getattr(mpmath, fname), mpmath.mpf(7) / 5, 12)
        want = [Decimal(mpmath.nstr(w, 70)) for w in want]
    for g, w in zip(got, want):
        assert close(g, w, 40)


def test_taylor_factorial_oracle_exact():
    got = taylor("exp(x)", 0, 12)
    assert got == [Fraction(1, math.factorial(k)) for k in range(13)]
    s = taylor("sin(x)", 0, 12)
    assert s == [0 if k % 2 == 0 else Fraction((-1) ** (k // 2), math.factorial(k)) for k in range(13)]


def test_witness_is_finite_and_matches():
    r = derivative("1/(1 - x)", Fraction(1, 2))
    assert r.value == 4
    assert r.witness.standard_part() == r.value
    assert r.witness.lead >= 0


def test_limit_sign():
    assert limit_at("-1/x^2", 0).sign is Sign.NEGATIVE
