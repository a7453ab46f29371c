"""Luzin's saw, its hyperfinite version under a microscope, triangle waves and the blancmange.

Hyperfinite objects live in Q(x) with N = 1/x infinite. A tooth index
is restricted to the form ``k = c*N + j`` (c rational in [0, 1], j an
integer), which reaches finite teeth (c = 0) as well as teeth an infinite
distance from either end.

Scenes are plain data (:class:`PlotScene`) handed to :mod:`render` or
:mod:`plotting`.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import IndexOutOfRange, NotFinite
from .expr import RatFuncBackend, evaluate, parse
from .ratfunc import Ordering, RatFunc, compare, magnify1d, standard_part

Point = tuple[Fraction, Fraction]


def infinite_n() -> RatFunc:
    """N = 1/x, the number of teeth of the hyperfinite saw."""
    return RatFunc.x().reciprocal()


# -- hyperfinite geometry -------------------------------------------------------

@dataclass(frozen=True)
class HyperPoint2D:
    x: RatFunc
    y: RatFunc

    def __post_init__(self):
        object.__setattr__(self, "x", RatFunc.coerce(self.x))
        object.__setattr__(self, "y", RatFunc.coerce(self.y))

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class HyperIndex:
    """Tooth index k = c*N + j."""

    c: Fraction
    j: int

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if not 0 <= self.c <= 1:
            raise IndexOutOfRange(f"c = {self.c} must lie in [0, 1]")

    @classmethod
    def parse(cls, text: str) -> HyperIndex:
        c, _, j = text.partition(",")
        return cls(Fraction(c.strip()), int(j))

    def value(self) -> RatFunc:
        return self.c * infinite_n() + self.j

    def shifted(self, dj: int) -> HyperIndex:
        return HyperIndex(self.c, self.j + dj)

    def is_valid(self) -> bool:
        k, n = self.value(), infinite_n()
        return compare(k, 0) is not Ordering.LESS and compare(k, n - 1) is not Ordering.GREATER


class Phase(enum.Enum):
    START = "Start"
    TOP_OF_RISER = "TopOfRiser"
    END_OF_TREAD = "EndOfTread"


def luzin_saw_finite(n: int) -> list[Point]:
    """The 2n+1 vertices of the saw with n teeth from (0, 0) to (1, 1)."""
    if n < 1:
        raise ValueError("the saw needs at least one tooth")
    step = Fraction(1, n)
    verts = [(Fraction(0), Fraction(0))]
    for k in range(n):
        t = k * step
        verts.append((t, t + step))
        verts.append((t + step, t + step))
    return verts


def luzin_saw_hyper(k: HyperIndex, phase: Phase) -> HyperPoint2D:
    """A vertex of tooth k of the saw with N = 1/x teeth."""
    if not k.is_valid():
        raise IndexOutOfRange(f"tooth c*N + j with c = {k.c}, j = {k.j} is not in 0..N-1")
    eps = RatFunc.x()
    t = k.value() * eps
    if phase is Phase.START:
        return HyperPoint2D(t, t)
    if phase is Phase.TOP_OF_RISER:
        return HyperPoint2D(t, t + eps)
    return HyperPoint2D(t + eps, t + eps)


def microscope2d(p: HyperPoint2D, center: HyperPoint2D, factor) -> HyperPoint2D:
    """(factor*(x - X), factor*(y - Y))."""
    factor = RatFunc.coerce(factor)
    return HyperPoint2D(factor * (p.x - center.x), factor * (p.y - center.y))


def shadow(p: HyperPoint2D) -> Point:
    """Componentwise standard part."""
    out = []
    for name, coord in (("x", p.x), ("y", p.y)):
        try:
            out.append(standard_part(coord))
        except NotFinite:
            raise NotFinite(f"{name} coordinate {coord} is infinite", coordinate=name) from None
    return out[0], out[1]


def magnified_tooth(k: HyperIndex) -> list[Point]:
    """Shadows of the three vertices of tooth k seen at magnification N from its start."""
    center = luzin_saw_hyper(k, Phase.START)
    return [shadow(microscope2d(luzin_saw_hyper(k, ph), center, infinite_n())) for ph in Phase]


# -- triangle waves and the blancmange -----------------------------------------

def _s1(x: Fraction) -> Fraction:
    u = x - math.floor(x)
    return u if u <= Fraction(1, 2) else 1 - u


def triangle_wave(n: int, x) -> Fraction:
    """s_n(x) = s_1(2^(n-1) x) / 2^(n-1), s_1 the period-1 tent peaking at 1/2."""
    if n < 1:
        raise ValueError("triangle wave levels start at 1")
    scale = 1 << (n - 1)
    return _s1(Fraction(x) * scale) / scale


def triangle_wave_sup(n: int) -> Fraction:
    """max of s_n. It is piecewise linear with period 2^(1-n), so the
    breakpoints 0, 2^-n, 2^(1-n) of one period suffice."""
    return max(triangle_wave(n, Fraction(k, 1 << n)) for k in range(3))


def dyadic_exponent(x: Fraction) -> int | None:
    """q with x = p/2^q in lowest terms, or None when x is not dyadic."""
    d = Fraction(x).denominator
    if d & (d - 1):
        return None
    return d.bit_length() - 1


def blancmange(x, terms: int) -> tuple[Fraction, Fraction]:
    """Partial sum s_1(x) + ... + s_terms(x) and a bound on the rest.

    The rest is at most sum over n > terms of 2^-n = 2^-terms. For dyadic
    x = p/2^q every s_n with n > q vanishes, so the sum is exact once
    terms >= q and the bound is 0.
    """
    if terms < 1:
        raise ValueError("terms must be at least 1")
    x = Fraction(x)
    value = sum((triangle_wave(n, x) for n in range(1, terms + 1)), Fraction(0))
    q = dyadic_exponent(x)
    tail = Fraction(0) if q is not None and terms >= q else Fraction(1, 1 << terms)
    return value, tail


def blancmange_exact(x) -> Fraction:
    """bl(x) for dyadic x."""
    q = dyadic_exponent(Fraction(x))
    if q is None:
        raise ValueError(f"{x} is not dyadic; use blancmange() with a tail bound")
    return blancmange(x, max(q, 1))[0]


def diff_quotient_probe(x0, m: int, terms: int = 64) -> Fraction:
    """(bl(x0 + 2^-m) - bl(x0)) / 2^-m.

    Exact when x0 is dyadic; otherwise both values are partial sums with
    ``terms`` terms.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    x0 = Fraction(x0)
    h = Fraction(1, 1 << m)
    q = dyadic_exponent(x0)
    if q is not None:
        return (blancmange_exact(x0 + h) - blancmange_exact(x0)) / h
    return (blancmange(x0 + h, terms)[0] - blancmange(x0, terms)[0]) / h


def saw_limit_check(n: int) -> tuple[Fraction, Fraction]:
    """(max vertical distance from y = x, total length) of the n-tooth saw."""
    verts = luzin_saw_finite(n)
    deviation = max(abs(y - x) for x, y in verts)
    length = Fraction(0)
    for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
        if x0 != x1 and y0 != y1:
            raise AssertionError("saw segments are axis-parallel")
        length += abs(x1 - x0) + abs(y1 - y0)
    return deviation, length


# -- scenes ------------------------------------------------------------------------

@dataclass
class PlotScene:
    title: str
    polylines: list[tuple[str, list[Point]]] = field(default_factory=list)
    points: list[tuple[str, Point]] = field(default_factory=list)
    viewport: tuple = (0, 1, 0, 1)
    samples_per_unit: int = 256
    guides: list[tuple[str, Point, Point]] = field(default_factory=list)

    def __post_init__(self):
        xmin, xmax, ymin, ymax = self.viewport
        if not (xmin < xmax and ymin < ymax):
            raise ValueError(f"degenerate viewport {self.viewport}")
        if self.samples_per_unit < 1:
            raise ValueError("samples_per_unit must be positive")
        for _, pts in self.polylines:
            for p in pts:
                if not all(math.isfinite(float(v)) for v in p):
                    raise ValueError("scene coordinates must be finite reals")


def sample(fn: Callable, xs: Sequence, workers: int | None = None) -> list:
    """fn over xs in order; ``workers`` > 1 evaluates on a thread pool."""
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, xs))
    return [fn(x) for x in xs]


def _grid(level: int) -> list[Fraction]:
    return [Fraction(k, 1 << level) for k in range((1 << level) + 1)]


def finite_saw_scene(n: int) -> PlotScene:
    return PlotScene(
        title=f"Luzin saw with {n} teeth",
        polylines=[(f"saw n={n}", luzin_saw_finite(n))],
        viewport=(-0.05, 1.05, -0.05, 1.05),
        guides=[("y = x", (Fraction(0), Fraction(0)), (Fraction(1), Fraction(1)))],
    )


def hyper_saw_scene(k: HyperIndex, magnify: bool = True) -> PlotScene:
    """The saw with N teeth near tooth k, magnified by N about its start, or unmagnified."""
    if not magnify:
        c = shadow(luzin_saw_hyper(k, Phase.START))
        return PlotScene(
            title="saw with infinitesimal teeth, unmagnified",
            polylines=[("shadow", [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))])],
            points=[(f"tooth c={k.c}, j={k.j}", c)],
            viewport=(-0.05, 1.05, -0.05, 1.05),
        )
    center = luzin_saw_hyper(k, Phase.START)
    polylines = []
    for dj, label in ((-1, "previous tooth"), (0, f"tooth c={k.c}, j={k.j}"), (1, "next tooth")):
        kk = k.shifted(dj)
        if not kk.is_valid():
            continue
        pts = [shadow(microscope2d(luzin_saw_hyper(kk, ph), center, infinite_n())) for ph in Phase]
        polylines.append((label, pts))
    return PlotScene(
        title=f"tooth c*N + j magnified by N (c={k.c}, j={k.j})",
        polylines=polylines,
        viewport=(-1.25, 2.25, -1.25, 2.25),
        guides=[("y = x", (Fraction(-1), Fraction(-1)), (Fraction(2), Fraction(2)))],
    )


def triangle_waves_scene(levels: int = 5, workers: int | None = None) -> PlotScene:
    xs = _grid(levels)
    polylines = []
    for n in range(1, levels + 1):
        ys = sample(lambda x, n=n: triangle_wave(n, x), xs, workers)
        polylines.append((f"s_{n}", list(zip(xs, ys))))
    return PlotScene(title=f"triangle waves s_1..s_{levels}", polylines=polylines,
                     viewport=(0, 1, -0.05, 0.55), samples_per_unit=1 << levels)


def blancmange_scene(levels: int = 8, workers: int | None = None) -> PlotScene:
    """Partial sums with 1..levels terms; each is exact on the grid of step 2^-levels."""
    xs = _grid(levels)
    polylines = []
    for n in range(1, levels + 1):
        ys = sample(lambda x, n=n: blancmange(x, n)[0], xs, workers)
        polylines.append((f"sum of {n} term{'s' if n > 1 else ''}", list(zip(xs, ys))))
    return PlotScene(title=f"blancmange partial sums, 1..{levels} terms", polylines=polylines,
                     viewport=(0, 1, -0.05, 0.75), samples_per_unit=1 << levels)


def sliding_line_scene(k: Fraction = Fraction(1, 2), v: Fraction = Fraction(1, 4),
                       samples: int = 64) -> PlotScene:
    """y = k, y = x, y = x^2 on [0, 1] and where they meet the vertical line x = v."""
    xs = [Fraction(i, samples) for i in range(samples + 1)]
    k, v = Fraction(k), Fraction(v)
    return PlotScene(
        title="the sliding vertical line x = v",
        polylines=[("y = k", [(x, k) for x in xs]), ("y = x", [(x, x) for x in xs]),
                   ("y = x^2", [(x, x * x) for x in xs])],
        points=[("k", (v, k)), ("v", (v, v)), ("v^2", (v, v * v))],
        viewport=(0, 1, 0, 1),
        samples_per_unit=samples,
        guides=[("x = v", (v, Fraction(0)), (v, Fraction(1)))],
    )


def microscope_scene(exprs: Iterable[str], center) -> PlotScene:
    """Elements of Q(x) on a number line, before and after the microscope (f - c)/x.

    The upper line shows standard parts (what the eye sees); the lower line
    shows standard parts of the magnified images. Elements that are
    infinite (before or after magnification) are left off that line.
    """
    center = Fraction(center)
    backend = RatFuncBackend()
    naked, magnified = [], []
    for src in exprs:
        f = evaluate(parse(src), backend, {"x": RatFunc.x()})
        try:
            naked.append((src, (standard_part(f), Fraction(1))))
        except NotFinite:
            continue
        try:
            magnified.append((f"m({src})", (standard_part(magnify1d(f, center)), Fraction(0))))
        except NotFinite:
            pass
    xs = [p[0] for _, p in naked + magnified] + [center, Fraction(0), Fraction(1)]
    lo, hi = min(xs), max(xs)
    pad = (hi - lo) / 10 or Fraction(1)
    return PlotScene(
        title=f"microscope (f - {center})/x",
        polylines=[("naked eye", [(lo - pad, Fraction(1)), (hi + pad, Fraction(1))]),
                   ("magnified", [(lo - pad, Fraction(0)), (hi + pad, Fraction(0))])],
        points=naked + magnified,
        viewport=(float(lo - pad), float(hi + pad), -0.5, 1.5),
    )


FIGURES = {
    "sliding_line": lambda workers=None: sliding_line_scene(),
    "microscope": lambda workers=None: microscope_scene(["3", "3 + x", "3 + 2*x", "3 - x^2"], 3),
    "finite_saw": lambda workers=None: finite_saw_scene(8),
    "infinitesimal_saw": lambda workers=None: hyper_saw_scene(HyperIndex(Fraction(1, 2), 0)),
    "triangle_waves": lambda workers=None: triangle_waves_scene(5, workers),
    "blancmange": lambda workers=None: blancmange_scene(8, workers),
}
