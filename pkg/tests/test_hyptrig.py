import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from teichspec.exceptions import CuspEndpoint, CuspMismatch, NoSuchPentagon
from teichspec.geometry import HypStructure, arc_lengths
from teichspec.hyptrig import (
    PantsGeometry,
    cusp_square,
    hexagon_opposite,
    hexagon_side,
    pants_arcs,
    pants_delta_exact,
    pants_seam,
    pants_self_arc,
    pentagon_side,
    regular_seam,
    seam_decay_exponent,
)
from teichspec.surface import pants_arc_classes

pos = st.floats(0.05, 6.0)


def test_regular_hexagon():
    # all sides equal: cosh a = cosh a / (cosh a - 1) forces cosh a = 2
    a = math.acosh(2)
    assert hexagon_opposite(a, a, a) == pytest.approx(a, abs=1e-12)


@given(pos, pos, pos)
def test_hexagon_relations_invert(a, b, c):
    ap = hexagon_opposite(a, b, c)
    assert hexagon_side(b, c, ap) == pytest.approx(a, rel=1e-7, abs=1e-7)


def test_pentagon_and_cusp_square():
    a = math.acosh(2)
    assert pentagon_side(math.asinh(math.sqrt(2)), math.asinh(math.sqrt(2))) == pytest.approx(math.acosh(2))
    with pytest.raises(NoSuchPentagon):
        pentagon_side(0.1, 0.1)
    # the side opposite shrinks to an ideal vertex as (b, c) reach the cusp relation
    b = 0.7
    c0 = cusp_square(b)
    sides = [pentagon_side(b, c0 + e) for e in (1e-2, 1e-4, 1e-6)]
    assert sides[0] > sides[1] > sides[2] and sides[2] < 1e-2
    assert math.sinh(a) * math.sinh(cusp_square(a)) == pytest.approx(1.0)


def test_seam_examples():
    p = PantsGeometry((2, 2, 2))
    cosh_b = (math.cosh(1) + math.cosh(1) ** 2) / math.sinh(1) ** 2
    assert math.cosh(pants_seam(p, 0, 1)) == pytest.approx(cosh_b, abs=1e-12)
    assert pants_seam(p, 0, 1) == pytest.approx(1.7049128, abs=1e-7)
    q = PantsGeometry((2, 2, 0))
    assert math.cosh(pants_seam(q, 0, 1)) == pytest.approx((1 + math.cosh(1) ** 2) / math.sinh(1) ** 2)
    r = PantsGeometry((1.3, 2.1, 0.7))
    assert pants_seam(r, 0, 2) == pants_seam(r, 2, 0)
    with pytest.raises(CuspEndpoint):
        pants_seam(q, 0, 2)


def test_seam_cusp_limit():
    # hexagon with a'' -> 0 converges to the cusped value
    vals = [pants_seam(PantsGeometry((2, 2, e)), 0, 1) for e in (1e-2, 1e-4, 1e-6)]
    target = pants_seam(PantsGeometry((2, 2, 0)), 0, 1)
    errs = [abs(v - target) for v in vals]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-9


def test_self_arc_examples():
    p = PantsGeometry((2, 2, 2))
    l = pants_self_arc(p, 0, around=2)
    assert math.cosh(l / 2) == pytest.approx(math.sinh(1) * math.sinh(pants_seam(p, 0, 2)), abs=1e-12)
    assert l == pytest.approx(3.6122260, abs=1e-6)
    assert pants_self_arc(p, 0, around=1) == pytest.approx(l, abs=1e-12)
    t = 1.7
    c = PantsGeometry((t, 0, 0))
    assert pants_self_arc(c, 0) == pytest.approx(2 * math.asinh(1 / math.sinh(t / 4)), abs=1e-12)
    with pytest.raises(CuspEndpoint):
        pants_self_arc(c, 1)


@given(pos, pos, pos)
def test_self_arc_independent_of_helper_hole(a, b, c):
    p = PantsGeometry((a, b, c))
    assert pants_self_arc(p, 0, around=1) == pytest.approx(pants_self_arc(p, 0, around=2), rel=1e-8)


def test_seam_monotone_on_grid():
    grid = np.linspace(0.2, 5, 25)
    for other in (0.3, 1.0, 4.0):
        for fixed in (0.5, 2.0):
            vals = [pants_seam(PantsGeometry((x, fixed, other)), 0, 1) for x in grid]
            assert all(u > v for u, v in zip(vals, vals[1:]))


def test_closed_form_matches_holonomy_on_random_pants():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(200):
        ls = rng.uniform(0.1, 5.0, size=3)
        X = HypStructure.pants(*ls)
        arcs = pants_arc_classes(X.surface)
        exact = pants_arcs(PantsGeometry(tuple(ls)))
        keys = [(a.start, a.end) for a in arcs]
        num = arc_lengths(X, arcs)
        worst = max(worst, max(abs(n - exact[k]) for n, k in zip(num, keys)))
    assert worst < 1e-7


def test_cusped_pants_match_holonomy():
    for ls in [(1.0, 2.0, 0.0), (3.0, 0.0, 0.0)]:
        X = HypStructure.pants(*ls)
        arcs = pants_arc_classes(X.surface)
        exact = pants_arcs(PantsGeometry(ls))
        for a, n in zip(arcs, arc_lengths(X, arcs)):
            assert n == pytest.approx(exact[(a.start, a.end)], abs=1e-8)


def test_delta_exact():
    p1 = PantsGeometry((1, 1, 1))
    p4 = PantsGeometry((20, 20, 20))
    delta, d = pants_delta_exact(p1, p4)
    assert d == pytest.approx(math.log(20), abs=1e-12)
    assert delta > d
    assert pants_delta_exact(p1, p1) == (0.0, 0.0)
    with pytest.raises(CuspMismatch):
        pants_delta_exact(p1, PantsGeometry((1, 1, 0)))


def test_regular_seam_conventions():
    t = 3.0
    assert regular_seam(t, "half") == pytest.approx(pants_seam(PantsGeometry((t, t, t)), 0, 1))
    literal = math.acosh((math.cosh(t) ** 2 + math.cosh(t)) / math.sinh(t) ** 2)
    assert regular_seam(t, "full") == pytest.approx(literal)
    for conv in ("half", "full"):
        k = seam_decay_exponent(conv)
        ts = np.array([30.0, 40.0])
        ys = np.log([regular_seam(x, conv) for x in ts])
        assert (ys[1] - ys[0]) / 10 == pytest.approx(k, abs=1e-6)
        assert regular_seam(40.0, conv) / math.exp(k * 40) == pytest.approx(2, rel=1e-3)
