import itertools

import numpy as np
import pytest

from teichspec import words as W
from teichspec.exceptions import NoBoundary, NonHyperbolicType
from teichspec.geometry import HypStructure, build_holonomy
from teichspec.isometry import Crossing, axis, geodesics_cross
from teichspec.surface import (
    NON_SIMPLE,
    SIMPLE,
    SurfaceType,
    canonical_connector,
    default_pants_decomposition,
    double,
    double_arc,
    enumerate_arcs,
    enumerate_curves,
    is_simple,
    slope_class,
    validate,
)

PANTS = SurfaceType(0, 0, 3)
TORUS = SurfaceType(1, 0, 1)
SPHERE4 = SurfaceType(0, 0, 4)
TORUS2 = SurfaceType(1, 0, 2)
FAMILIES = [PANTS, TORUS, SPHERE4, TORUS2]


def test_validate():
    assert validate(PANTS) is PANTS
    assert validate(TORUS) is TORUS
    with pytest.raises(NonHyperbolicType):
        validate(SurfaceType(0, 0, 2))
    with pytest.raises(NonHyperbolicType):
        validate(SurfaceType(1, 0, 0))


@pytest.mark.parametrize("st", FAMILIES + [SurfaceType(0, 2, 1), SurfaceType(2, 0, 1), SurfaceType(0, 1, 4)])
def test_decomposition_bookkeeping(st):
    pd = default_pants_decomposition(st)
    assert pd.n_pants == -st.chi
    assert pd.n_curves == len(pd.gluings) == 3 * st.genus - 3 + st.punctures + st.boundary
    assert len(pd.boundary_slots) == st.boundary
    assert len(pd.puncture_slots) == st.punctures
    slots = [s for g in pd.gluings for s in g] + list(pd.boundary_slots) + list(pd.puncture_slots)
    assert len(slots) == len(set(slots)) == 3 * pd.n_pants
    pres = pd.presentation
    assert pres.is_free and pres.rank == 1 - st.chi


def test_default_decomposition_examples():
    assert default_pants_decomposition(PANTS).n_curves == 0
    pd = default_pants_decomposition(TORUS)
    assert pd.n_pants == 1 and pd.n_curves == 1
    (a, b), = pd.gluings
    assert a[0] == b[0] == 0
    assert default_pants_decomposition(SPHERE4).n_pants == 2


@pytest.mark.parametrize(
    "st,expected",
    [(PANTS, (2, 0, 0)), (TORUS, (2, 0, 0)), (SurfaceType(0, 2, 1), (0, 4, 0)), (TORUS2, (3, 0, 0))],
)
def test_double_type(st, expected):
    dc = double(st)
    assert (dc.double_type.genus, dc.double_type.punctures, dc.double_type.boundary) == expected
    assert dc.double_type.chi == 2 * st.chi
    assert dc.pants_double.n_pants == 2 * default_pants_decomposition(st).n_pants
    for slot, img in dc.mirror_slots.items():
        assert dc.mirror_slots[img] == slot
    for k in range(dc.n_generators):
        assert dc.mirror_word(dc.mirror_word(((k + 1),))) == (k + 1,)


def test_double_needs_boundary():
    with pytest.raises(NoBoundary):
        double(SurfaceType(2, 0, 0))


@pytest.mark.parametrize("st", [PANTS, TORUS, SPHERE4, TORUS2])
def test_double_arc_is_mirror_symmetric(st):
    dc = double(st)
    for a in enumerate_arcs(st, 3)[:200]:
        c = double_arc(dc, a)
        m = dc.mirror_word(c.word)
        _, core = W.cyclic_reduce(m)
        assert W.canonical_cyclic(core) == W.canonical_cyclic(W.cyclic_reduce(c.word)[1])


def test_double_of_boundary_curve_is_itself():
    dc = double(TORUS)
    b = enumerate_curves(TORUS, 1)[0]
    assert b.is_boundary
    assert double_arc(dc, b).word == b.word


# -- curves ------------------------------------------------------------------


def test_pants_curves_are_boundaries():
    for bound in (1, 4, 8):
        cs = enumerate_curves(PANTS, bound)
        assert len(cs) == 3 and all(c.is_boundary for c in cs)


@pytest.mark.parametrize("bound", range(1, 10))
def test_torus_count_is_farey_plus_boundary(bound):
    assert len(enumerate_curves(TORUS, bound)) == len(W.farey_slopes(bound)) + 1


def test_torus_small_slopes():
    words = {c.word for c in enumerate_curves(TORUS, 3)}
    for p, q in [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (1, -1), (1, -2), (2, -1)]:
        assert slope_class(p, q).word in words


@pytest.mark.parametrize("st,top", [(TORUS, 8), (SPHERE4, 6), (TORUS2, 5)])
def test_curve_enumeration_monotone_and_duplicate_free(st, top):
    prev = set()
    for bound in range(1, top + 1):
        words = [c.word for c in enumerate_curves(st, bound)]
        assert len(words) == len(set(words))
        assert prev <= set(words)
        assert all(W.canonical_cyclic(w) == w for w in words)
        prev = set(words)


def test_torus_simple_iff_primitive():
    """On the one-holed torus, the fat-graph test agrees with slope primitivity."""
    slopes = {slope_class(p, q).word for p, q in W.farey_slopes(12)}
    boundary = enumerate_curves(TORUS, 1)[0].word
    for w in W.reduced_words(2, 7, 1):
        _, c = W.cyclic_reduce(w)
        if c != w:
            continue
        canon = W.canonical_cyclic(c)
        expected = SIMPLE if canon in slopes or canon == boundary else NON_SIMPLE
        assert is_simple(TORUS, c) == expected, W.fmt(c)


def test_is_simple_examples():
    assert is_simple(TORUS, W.parse("abaB")) == NON_SIMPLE
    assert is_simple(TORUS, W.parse("aab")) == SIMPLE
    assert is_simple(TORUS, W.parse("abAB")) == SIMPLE  # boundary
    assert is_simple(PANTS, W.parse("a")) == SIMPLE
    assert is_simple(PANTS, W.parse("ab")) == SIMPLE  # third boundary, reversed
    assert is_simple(PANTS, W.parse("aB")) == NON_SIMPLE
    assert is_simple(TORUS, W.parse("aa")) == NON_SIMPLE


def _axis_crossing(hol, c, rank, conj_len):
    ax = axis(hol.evaluate(c))
    for g in W.reduced_words(rank, conj_len, 1):
        other = axis(hol.evaluate(W.mul(g, c, W.inverse(g))))
        if geodesics_cross(ax, other) is Crossing.CROSS:
            return True
    return False


@pytest.mark.parametrize(
    "st,X,word_len",
    [
        (SPHERE4, ((1.1,), (0.3,), (1.0, 1.2, 0.9, 1.4)), 4),
        (TORUS2, ((1.1, 1.5), (0.3, -0.2), (1.0, 1.2)), 3),
    ],
)
def test_fat_graph_simplicity_matches_axis_crossings(st, X, word_len):
    """Geometric oracle: a closed geodesic is simple iff no translate of its axis crosses it."""
    hol = build_holonomy(HypStructure.of_type(st, *X))
    pres = default_pants_decomposition(st).presentation
    simple = {c.word for c in enumerate_curves(st, word_len)}
    punct = {W.canonical_cyclic(w) for w in pres.puncture_words}
    checked = 0
    for w in W.reduced_words(pres.rank, word_len, 1):
        _, c = W.cyclic_reduce(w)
        if c != w or W.is_proper_power(c) or W.canonical_cyclic(c) in punct:
            continue
        assert _axis_crossing(hol, c, pres.rank, 4) != (W.canonical_cyclic(c) in simple), W.fmt(c)
        checked += 1
    assert checked > 50


# -- arcs --------------------------------------------------------------------


def test_pants_has_six_arcs():
    for bound in (1, 3, 6):
        arcs = enumerate_arcs(PANTS, bound)
        assert len(arcs) == 6
        assert sum(a.start == a.end for a in arcs) == 3
    assert len(enumerate_arcs(SurfaceType(0, 1, 2), 2)) == 3


def test_arcs_need_boundary():
    with pytest.raises(NoBoundary):
        enumerate_arcs(SurfaceType(0, 3, 0), 2)


def _brute_cosets(st, bound, reach=3):
    """Double cosets <h_i> w <h_j> meeting words of length <= bound, by direct search."""
    pres = default_pants_decomposition(st).presentation
    hs = pres.boundary_words
    short = list(W.reduced_words(pres.rank, bound))
    count = 0
    for i, j in itertools.combinations_with_replacement(range(len(hs)), 2):
        hi, hj = hs[i], hs[j]
        trivial = lambda w: i == j and any(w == W.power(hi, m) for m in range(-reach, reach + 1))
        reps = []
        for w in short:
            if trivial(w):
                continue
            moves = {W.mul(W.power(hi, m), w, W.power(hj, n)) for m in range(-reach, reach + 1) for n in range(-reach, reach + 1)}
            if i == j:
                moves |= {W.inverse(x) for x in moves}
            if not any(r in moves for r in reps):
                reps.append(w)
        count += len(reps)
    return count


@pytest.mark.parametrize("st,bound", [(TORUS, 2), (TORUS, 4), (SPHERE4, 3), (TORUS2, 3)])
def test_arc_count_matches_brute_force(st, bound):
    assert len(enumerate_arcs(st, bound)) == _brute_cosets(st, bound)


@pytest.mark.parametrize("st", [TORUS, SPHERE4, TORUS2])
def test_arc_connectors_canonical_and_monotone(st):
    hs = default_pants_decomposition(st).presentation.boundary_words
    prev = set()
    for bound in (1, 2, 3):
        arcs = enumerate_arcs(st, bound)
        keys = {(a.start, a.end, a.connector) for a in arcs}
        assert len(keys) == len(arcs)
        assert prev <= keys
        prev = keys
        for a in arcs:
            assert canonical_connector(a.connector, hs[a.start], hs[a.end], a.start == a.end) == a.connector
            # essential: the connector is not absorbed into the boundary subgroup
            assert a.start != a.end or a.connector != ()


def test_canonical_connector_invariant_under_coset_moves():
    hs = default_pants_decomposition(TORUS).presentation.boundary_words
    h = hs[0]
    rng = np.random.default_rng(1)
    words = list(W.reduced_words(2, 4, 1))
    for _ in range(100):
        w = words[rng.integers(len(words))]
        m, n = rng.integers(-2, 3, size=2)
        moved = W.mul(W.power(h, int(m)), w, W.power(h, int(n)))
        assert canonical_connector(moved, h, h, True) == canonical_connector(w, h, h, True)
        assert canonical_connector(W.inverse(w), h, h, True) == canonical_connector(w, h, h, True)
