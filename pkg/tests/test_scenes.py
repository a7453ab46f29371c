from fractions import Fraction
import random
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from infinitesimals.errors import EmptyScene, IndexOutOfRange, NotFinite
from infinitesimals.ratfunc import RatFunc
from infinitesimals.render import render
from infinitesimals.scenes import (
    FIGURES,
    HyperIndex,
    HyperPoint2D,
    Phase,
    PlotScene,
    blancmange,
    blancmange_scene,
    diff_quotient_probe,
    finite_saw_scene,
    hyper_saw_scene,
    infinite_n,
    luzin_saw_finite,
    luzin_saw_hyper,
    magnified_tooth,
    microscope2d,
    microscope_scene,
    saw_limit_check,
    shadow,
    triangle_wave,
    triangle_wave_sup,
    triangle_waves_scene,
)

F = Fraction
x = RatFunc.x()
N = infinite_n()
UNIT_TOOTH = [(0, 0), (0, 1), (1, 1)]

hyper_indices = st.one_of(
    st.builds(HyperIndex, st.just(F(0)), st.integers(0, 50)),
    st.builds(HyperIndex, st.builds(F, st.integers(1, 19), st.just(20)), st.integers(-50, 50)),
    st.builds(HyperIndex, st.just(F(1)), st.integers(-50, -1)),
)


def s1_oracle(u: Fraction) -> Fraction:
    """Tent map by its defining cases on [0, 1] after reduction mod 1."""
    u = u - (u.numerator // u.denominator)
    return u if u <= F(1, 2) else 1 - u


# -- saws --------------------------------------------------------------------

def test_finite_saw_examples():
    assert luzin_saw_finite(1) == [(0, 0), (0, 1), (1, 1)]
    assert luzin_saw_finite(2) == [(0, 0), (0, F(1, 2)), (F(1, 2), F(1, 2)), (F(1, 2), 1), (1, 1)]
    for n in range(1, 65):
        v = luzin_saw_finite(n)
        assert len(v) == 2 * n + 1 and v[0] == (0, 0) and v[-1] == (1, 1)
    with pytest.raises(ValueError):
        luzin_saw_finite(0)


def test_hyper_saw_examples():
    p = luzin_saw_hyper(HyperIndex(F(1, 2), 0), Phase.START)
    assert p == HyperPoint2D(F(1, 2), F(1, 2))
    assert luzin_saw_hyper(HyperIndex(0, 0), Phase.TOP_OF_RISER) == HyperPoint2D(0, x)
    assert luzin_saw_hyper(HyperIndex(F(1, 3), 2), Phase.START) == HyperPoint2D(F(1, 3) + 2 * x, F(1, 3) + 2 * x)
    with pytest.raises(IndexOutOfRange):
        luzin_saw_hyper(HyperIndex(1, 0), Phase.START)  # k = N is past the last tooth
    with pytest.raises(IndexOutOfRange):
        luzin_saw_hyper(HyperIndex(0, -1), Phase.START)
    with pytest.raises(IndexOutOfRange):
        HyperIndex(F(3, 2), 0)


def test_microscope_examples():
    c = HyperPoint2D(F(1, 3) + x, F(2, 5) - x**2)
    assert microscope2d(c, c, N) == HyperPoint2D(0, 0)
    assert microscope2d(HyperPoint2D(c.x + 1 / N, c.y + 1 / N), c, N) == HyperPoint2D(1, 1)
    p = HyperPoint2D(5 + x, 7)
    assert microscope2d(p, c, 1) == HyperPoint2D(p.x - c.x, p.y - c.y)


def test_shadow_examples():
    assert shadow(HyperPoint2D(3 + x, 5 - x**2)) == (3, 5)
    with pytest.raises(NotFinite) as info:
        shadow(HyperPoint2D(1 / x, 0))
    assert info.value.coordinate == "x"


@given(hyper_indices)
def test_magnification_exactness(k):
    assert magnified_tooth(k) == UNIT_TOOTH


@given(hyper_indices, st.sampled_from(list(Phase)))
def test_shadow_on_diagonal(k, phase):
    sx, sy = shadow(luzin_saw_hyper(k, phase))
    assert sx == sy == k.c


@pytest.mark.parametrize("n", [1, 4, 17, 64])
def test_saw_limit_check(n):
    assert saw_limit_check(n) == (F(1, n), 2)


# -- triangle waves and blancmange -------------------------------------------

def test_triangle_wave_examples():
    assert triangle_wave(1, F(1, 2)) == F(1, 2)
    for n in range(1, 11):
        assert triangle_wave(n, F(1, 3)) == F(1, 3) / 2 ** (n - 1)
    # periodicity first: 17/8 -> 1/8; then 4 * 1/8 = 1/2 and s_1(1/2)/4 = 1/8
    assert triangle_wave(3, F(17, 8)) == triangle_wave(3, F(1, 8)) == F(1, 8)
    assert triangle_wave(3, F(17, 8)) == s1_oracle(4 * F(17, 8)) / 4


@given(st.integers(1, 12), st.builds(F, st.integers(-200, 200), st.integers(1, 64)))
def test_triangle_wave_matches_oracle(n, v):
    assert triangle_wave(n, v) == s1_oracle(2 ** (n - 1) * v) / 2 ** (n - 1)


def test_triangle_wave_sup():
    for n in range(1, 21):
        assert triangle_wave_sup(n) == F(1, 2**n)


def test_blancmange_examples():
    assert blancmange(0, 5) == (0, 0)
    for m in range(1, 21):
        value, tail = blancmange(F(1, 2**m), m)
        assert value == F(m, 2**m) and tail == 0
        assert blancmange(F(1, 2**m), m + 7) == (value, 0)
    value, tail = blancmange(F(1, 3), 40)
    assert abs(value - F(2, 3)) <= F(1, 2**40) and tail == F(1, 2**40)
    # geometric series oracle: partial sums of (1/3)/2^(n-1)
    assert value == sum(F(1, 3) / 2 ** (n - 1) for n in range(1, 41))


def test_diff_quotient_examples():
    for m in range(1, 21):
        assert diff_quotient_probe(0, m) == m
    assert diff_quotient_probe(F(1, 2), 1) == -1
    assert diff_quotient_probe(0, 1) == 1


@given(st.builds(F, st.integers(0, 4096), st.just(4096)), st.integers(1, 30))
def test_blancmange_bounds_and_monotone(v, terms):
    a, _ = blancmange(v, terms)
    b, _ = blancmange(v, terms + 1)
    assert 0 <= a <= b < 1


def test_continuity_modulus():
    rng = random.Random(1)
    for _ in range(1000):
        q = 2**30
        u, v = F(rng.randint(0, q), q), F(rng.randint(0, q), q)
        bu, bv = blancmange(u, 30)[0], blancmange(v, 30)[0]
        assert abs(bu - bv) <= 30 * abs(u - v) + 2 * F(1, 2**30)


# -- scenes and rendering ----------------------------------------------------

def paths(svg: bytes):
    return re.findall(rb'<path class="polyline" data-label="([^"]*)" d="([^"]*)"', svg)


def test_render_saw_has_one_path_of_17_vertices():
    svg = render(finite_saw_scene(8), "svg")
    (p,) = paths(svg)
    assert len(re.findall(rb"[ML]", p[1])) == 17
    assert svg.startswith(b'<?xml version="1.0" encoding="UTF-8"?>\n<svg xmlns="http://www.w3.org/2000/svg" version="1.1"')


def test_magnified_first_tooth_scene():
    scene = hyper_saw_scene(HyperIndex(0, 0))
    label, pts = scene.polylines[0]
    assert pts == UNIT_TOOTH and "j=0" in label
    # no previous tooth before the first one
    assert [lab for lab, _ in scene.polylines] == [label, "next tooth"]
    unmag = hyper_saw_scene(HyperIndex(F(1, 2), 3), magnify=False)
    assert unmag.points == [("tooth c=1/2, j=3", (F(1, 2), F(1, 2)))]


def test_blancmange_scene_paths():
    scene = blancmange_scene(8)
    svg = render(scene, "svg")
    labels = [lab for lab, _ in paths(svg)]
    assert len(labels) == 8 and len(set(labels)) == 8
    for n, (_, pts) in enumerate(scene.polylines, 1):
        assert len(pts) == 2**8 + 1
        assert all(y == blancmange(x_, n)[0] for x_, y in pts[::17])


def test_csv_output():
    data = render(finite_saw_scene(2), "csv").decode()
    lines = data.split("\n")
    assert lines[0] == "label,x,y" and data.endswith("\n") and "\r" not in data
    assert lines[1:6] == ["saw n=2,0,0", "saw n=2,0,1/2", "saw n=2,1/2,1/2", "saw n=2,1/2,1", "saw n=2,1,1"]


def test_empty_scene():
    with pytest.raises(EmptyScene):
        render(PlotScene("nothing"), "svg")
    with pytest.raises(ValueError):
        PlotScene("bad", viewport=(1, 1, 0, 1))


def test_microscope_scene():
    scene = microscope_scene(["3", "3 + x", "3 + 2*x", "1/x"], 3)
    labels = dict(scene.points)
    assert labels["3 + x"] == (3, 1) and labels["m(3 + x)"] == (1, 0) and labels["m(3 + 2*x)"] == (2, 0)
    assert "1/x" not in labels


@pytest.mark.parametrize("name", sorted(FIGURES))
def test_figures_deterministic_and_parallel(name):
    a = render(FIGURES[name](), "svg")
    b = render(FIGURES[name](), "svg")
    c = render(FIGURES[name](workers=4), "svg")
    assert a == b == c
    assert render(FIGURES[name](), "csv") == render(FIGURES[name](workers=3), "csv")


def test_triangle_scene_samples_are_exact():
    scene = triangle_waves_scene(5)
    for n, (_, pts) in enumerate(scene.polylines, 1):
        assert max(y for _, y in pts) == F(1, 2**n)


def test_matplotlib_figure(tmp_path):
    from infinitesimals.plotting import save_figure

    p1 = save_figure(finite_saw_scene(4), tmp_path / "a.png")
    p2 = save_figure(finite_saw_scene(4), tmp_path / "b.png")
    assert p1.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert p1.read_bytes() == p2.read_bytes()
    s1 = save_figure(blancmange_scene(4), tmp_path / "a.svg").read_bytes()
    s2 = save_figure(blancmange_scene(4), tmp_path / "b.svg").read_bytes()
    assert s1 == s2
