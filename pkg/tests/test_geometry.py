import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from teichspec import words as W
from teichspec.geometry import (
    HypStructure,
    ThickPartSpec,
    arc_crossing,
    arc_length,
    arc_lengths,
    build_holonomy,
    collar_width,
    curve_length,
    curve_lengths,
    double_structure,
    in_thick_part,
    lengths,
    torus_systole,
)
from teichspec.isometry import axis, ortho_distance
from teichspec.surface import (
    SurfaceType,
    boundary_classes,
    default_pants_decomposition,
    double,
    double_arc,
    enumerate_arcs,
    enumerate_curves,
    slope_class,
)

TORUS = SurfaceType(1, 0, 1)
length = st.floats(0.3, 3.0)
twist = st.floats(-2.0, 2.0)


def random_structure(st_, rng):
    pd = default_pants_decomposition(st_)
    n = pd.n_curves
    return HypStructure.of_type(
        st_, tuple(rng.uniform(0.4, 2.5, n)), tuple(rng.uniform(-1, 1, n)), tuple(rng.uniform(0.4, 2.5, st_.boundary))
    )


FAMILIES = [SurfaceType(0, 0, 3), TORUS, SurfaceType(0, 0, 4), SurfaceType(1, 0, 2), SurfaceType(0, 1, 2)]


def test_structure_validation_and_vectors():
    X = HypStructure.one_holed_torus(1.2, 0.3, 0.9)
    Y = HypStructure.from_vector(X.decomposition, X.vector())
    assert Y == X
    with pytest.raises(ValueError):
        HypStructure.one_holed_torus(-1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        HypStructure.of_type(TORUS, (1.0,), (0.0,), ())
    with pytest.raises(ValueError):
        ThickPartSpec(2.0, 1.0)


@pytest.mark.parametrize("st_", FAMILIES)
def test_boundary_and_pants_curves_calibrated(st_):
    rng = np.random.default_rng(11)
    for _ in range(10):
        X = random_structure(st_, rng)
        got = curve_lengths(X, boundary_classes(st_))
        assert np.allclose(got, X.boundary_lengths, atol=1e-9)
        pres = X.decomposition.presentation
        got = [curve_length(X, w) for w in pres.curve_words]
        assert np.allclose(got, X.curve_lengths, atol=1e-9)


def test_cusps_are_parabolic():
    X = HypStructure.pants(1.0, 0, 0)
    hol = build_holonomy(X)
    for w in X.decomposition.presentation.puncture_words:
        assert abs(abs(hol.evaluate(w).trace) - 2) < 1e-9
    assert math.isnan(curve_lengths(X, [X.decomposition.presentation.puncture_words[0]])[0])


@given(length, twist, length)
def test_fricke_identity(l, t, L):
    a, b = build_holonomy(HypStructure.one_holed_torus(l, t, L)).generator_images
    x, y, z = a.trace, b.trace, (a @ b).trace
    comm = a @ b @ a.inverse() @ b.inverse()
    assert comm.trace == pytest.approx(x * x + y * y + z * z - x * y * z - 2, abs=1e-8 * max(1, x * y * z))
    assert comm.trace == pytest.approx(-2 * math.cosh(L / 2), rel=1e-9)
    assert (a @ b.inverse()).trace == pytest.approx(x * y - z, rel=1e-9, abs=1e-9)


@settings(max_examples=30)
@given(length, twist, length)
def test_full_twist_shifts_slopes(l, t, L):
    X = HypStructure.one_holed_torus(l, t, L)
    Y = HypStructure.one_holed_torus(l, t + l, L)
    for p, q in W.farey_slopes(5):
        lx = curve_length(X, slope_class(p + q, q))
        assert curve_length(Y, slope_class(p, q)) == pytest.approx(lx, rel=1e-9)


@settings(max_examples=30)
@given(length, length)
def test_zero_twist_is_mirror_symmetric(l, L):
    X = HypStructure.one_holed_torus(l, 0.0, L)
    for p, q in W.farey_slopes(6):
        if p and q:
            assert curve_length(X, slope_class(p, q)) == pytest.approx(curve_length(X, slope_class(p, -q)), rel=1e-9)


@pytest.mark.parametrize("st_", [TORUS, SurfaceType(0, 0, 4), SurfaceType(1, 0, 2)])
def test_arc_length_is_distance_between_boundary_lifts(st_):
    rng = np.random.default_rng(5)
    X = random_structure(st_, rng)
    hol = build_holonomy(X)
    hs = X.decomposition.presentation.boundary_words
    arcs = enumerate_arcs(st_, 3)[::7]
    got = arc_lengths(X, arcs)
    for a, g in zip(arcs, got):
        w = a.word
        other = axis(hol.evaluate(W.mul(w, hs[a.end], W.inverse(w))))
        assert g == pytest.approx(ortho_distance(axis(hol.evaluate(hs[a.start])), other), abs=1e-9, rel=1e-9)


def test_spiral_arcs_scaled_evaluation():
    X = HypStructure.one_holed_torus(1.1, 0.2, 1.4)
    from teichspec.surface import ArcClass, spiral_arcs

    sp = [a for a in spiral_arcs(TORUS, 2) if a.power == 8][:4]
    direct = [arc_length(X, a) for a in sp]
    assert np.allclose(arc_lengths(X, sp), direct)
    # winding k times around a core of length l adds about k*l
    sp3 = spiral_arcs(TORUS, 3)
    big = [a for a in sp3 if a.power == 512][0]
    mid = [a for a in sp3 if a.power == 64 and (a.core, a.connector) == (big.core, big.connector)][0]
    core = curve_length(X, big.core)
    assert (arc_length(X, big) - arc_length(X, mid)) / 448 == pytest.approx(core, rel=1e-9)
    assert isinstance(big, ArcClass) and big.is_spiral


def test_lengths_mixes_curves_and_arcs():
    X = HypStructure.one_holed_torus(1.0, 0.0, 1.0)
    cs = list(enumerate_curves(TORUS, 2)) + list(enumerate_arcs(TORUS, 1))
    out = lengths(X, cs)
    assert out.shape == (len(cs),) and np.all(out > 0)


def test_arc_crossing_oracle():
    X = HypStructure.pants(1.0, 1.5, 2.0)
    for a in enumerate_arcs(X.surface, 1):
        assert arc_crossing(X, a) is None
    T = HypStructure.one_holed_torus(1.3, 0.4, 1.1)
    by_name = {str(a): a for a in enumerate_arcs(TORUS, 2)}
    assert arc_crossing(T, by_name["arc 1-1 a"]) is None
    assert arc_crossing(T, by_name["arc 1-1 aa"]) is not None


def test_double_structure_doubles_arcs():
    dc = double(TORUS)
    X = HypStructure.one_holed_torus(1.3, 0.4, 1.1)
    Xd = double_structure(X, dc)
    arcs = enumerate_arcs(TORUS, 3)
    d = curve_lengths(Xd, [double_arc(dc, a) for a in arcs])
    assert np.allclose(d, 2 * arc_lengths(X, arcs), atol=1e-9)
    # the base curves survive unchanged in both halves
    cs = enumerate_curves(TORUS, 4)
    assert np.allclose(curve_lengths(Xd, cs), curve_lengths(X, cs), atol=1e-9)
    assert np.allclose(curve_lengths(Xd, [dc.reflect(c.word) for c in cs]), curve_lengths(X, cs), atol=1e-9)


# -- thick part --------------------------------------------------------------


def test_torus_systole_matches_brute_force():
    rng = np.random.default_rng(2)
    cs = [c for c in enumerate_curves(TORUS, 14) if not c.is_boundary]
    for _ in range(20):
        X = HypStructure.one_holed_torus(rng.uniform(0.2, 4), rng.uniform(-3, 3), rng.uniform(0.2, 4))
        s, word = torus_systole(X)
        assert s == pytest.approx(np.nanmin(curve_lengths(X, cs)), rel=1e-9)
        assert curve_length(X, word) == pytest.approx(s, rel=1e-9)


def test_thick_part_examples():
    spec = ThickPartSpec(0.5, 2.0)
    assert in_thick_part(HypStructure.pants(1, 1, 1), spec, 4).status == "yes"
    r = in_thick_part(HypStructure.pants(1, 1, 3), spec, 4)
    assert r.status == "no" and r.witness.is_boundary
    r = in_thick_part(HypStructure.one_holed_torus(0.1, 0.0, 1.0), spec, 4)
    assert r.status == "no" and curve_length(HypStructure.one_holed_torus(0.1, 0.0, 1.0), r.witness) < 0.5
    r = in_thick_part(HypStructure.one_holed_torus(1.0, 0.0, 1.0), spec, 4)
    assert r.status == "yes" and r.systole_bound >= 0.5


def test_thick_part_collar_certificate():
    st_ = SurfaceType(0, 0, 4)
    X = HypStructure.of_type(st_, (1.0,), (0.2,), (1.0, 1.0, 1.0, 1.0))
    r = in_thick_part(X, ThickPartSpec(0.5, 2.0), 5)
    assert r.status == "yes"
    assert r.systole_bound <= np.nanmin(curve_lengths(X, enumerate_curves(st_, 6))) + 1e-9
    assert 2 * collar_width(1.0) > 0.5
