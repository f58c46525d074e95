"""Length-spectrum metrics as enumeration-bounded estimators.

Every estimator maximises a length ratio over the classes enumerated up to a
complexity bound, so it is a lower bound for the true supremum.  ``slack``
is the change between ``bound // 2`` and ``bound``: an empirical
convergence diagnostic, not an error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import words as W
from .exceptions import IsPants, NotInThickPart, UncertifiedFamily, UnsupportedFamily
from .geometry import (
    HypStructure,
    build_holonomy,
    curve_length,
    double_structure,
    in_thick_part,
    lengths,
)
from .surface import (
    PANTS,
    SIMPLE,
    ArcClass,
    CurveClass,
    boundary_classes,
    double,
    enumerate_arcs,
    enumerate_curves,
    is_simple,
    spiral_arcs,
)

C = "C"
B = "B"
BC = "B∪C"
FAMILIES = (C, B, BC)
TIE_TOL = 1e-12


@dataclass(frozen=True)
class MetricEstimate:
    value: float
    bound: int
    witness: object
    family: str
    exact: bool = False
    slack: float | None = None
    b_only_value: float | None = None

    @property
    def b_gap(self):
        """|B-only value - value|, when the B-only estimate was computed."""
        return None if self.b_only_value is None else abs(self.b_only_value - self.value)

    def __float__(self):
        return float(self.value)


def _check_pair(X, Y):
    if X.decomposition != Y.decomposition:
        raise ValueError("structures live on different decompositions")


def is_exact_family(st):
    return st.family == PANTS


@lru_cache(maxsize=None)
def classes(st, family, bound):
    """Classes of ``family`` (``"C"``, ``"B"`` or ``"B∪C"``) up to ``bound``.

    Boundary curves belong to both ``B`` and ``C``; ``B`` also carries the
    spiralling arcs whose ratios approach those of interior curves.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if family == C:
        try:
            return tuple(enumerate_curves(st, bound))
        except UnsupportedFamily as exc:
            raise UncertifiedFamily(str(exc)) from exc
    out = list(boundary_classes(st)) + list(enumerate_arcs(st, bound)) + list(spiral_arcs(st, bound))
    if family == BC:
        try:
            out += [c for c in enumerate_curves(st, bound) if not c.is_boundary]
        except UnsupportedFamily as exc:
            raise UncertifiedFamily(str(exc)) from exc
    return tuple(out)


def _class_key(c):
    if isinstance(c, ArcClass):
        return (1, c.start, c.end, W.word_key(c.connector))
    return (0, W.word_key(c.word))


def _argmax(values, cls):
    """Index of the maximum; among near-ties the least canonical class wins."""
    ok = ~np.isnan(values)
    if not ok.any():
        raise ValueError("no hyperbolic class among the enumerated ones")
    top = np.max(values[ok])
    cands = [k for k in np.flatnonzero(ok) if values[k] >= top - TIE_TOL * max(1.0, abs(top))]
    return min(cands, key=lambda k: _class_key(cls[k]))


def _raw_ratio(X, Y, family, bound):
    cls = classes(X.surface, family, bound)
    ratio = lengths(Y, cls) / lengths(X, cls)
    k = _argmax(ratio, cls)
    return float(ratio[k]), cls[k]


def ratio_sup(X, Y, family=BC, bound=6):
    """Sup of ``l_Y / l_X`` over the enumerated classes of ``family``."""
    _check_pair(X, Y)
    value, witness = _raw_ratio(X, Y, family, bound)
    return MetricEstimate(value, bound, witness, family, exact=is_exact_family(X.surface))


def _with_slack(fn, X, Y, bound, **kw):
    est = fn(X, Y, bound, **kw)
    if est.exact or bound < 2:
        slack = 0.0 if est.exact else None
    else:
        slack = abs(est.value - fn(X, Y, bound // 2, **kw).value)
    return MetricEstimate(est.value, est.bound, est.witness, est.family, est.exact, slack, est.b_only_value)


def _d_weak(X, Y, bound, b_only=True):
    _check_pair(X, Y)
    value, witness = _raw_ratio(X, Y, BC, bound)
    b_val = math.log(_raw_ratio(X, Y, B, bound)[0]) if b_only else None
    return MetricEstimate(math.log(value), bound, witness, BC, is_exact_family(X.surface), None, b_val)


def d_weak(X, Y, bound=6):
    """``log sup l_Y / l_X`` over arcs and curves, with the arcs-only value alongside."""
    return _with_slack(_d_weak, X, Y, bound)


def d_bar(X, Y, bound=6):
    return d_weak(Y, X, bound)


def _certified(st, bound):
    try:
        return classes(st, C, bound)
    except UncertifiedFamily:
        raise
    except UnsupportedFamily as exc:
        raise UncertifiedFamily(str(exc)) from exc


def _d_L(X, Y, bound):
    _check_pair(X, Y)
    _certified(X.surface, bound)
    up, wu = _raw_ratio(X, Y, C, bound)
    down, wd = _raw_ratio(Y, X, C, bound)
    value, witness = (up, wu) if up >= down else (down, wd)
    return MetricEstimate(math.log(value), bound, witness, C, is_exact_family(X.surface))


def d_L(X, Y, bound=6):
    """Symmetric log length-ratio sup over simple closed curves."""
    return _with_slack(_d_L, X, Y, bound)


def _delta_L(X, Y, bound):
    a = _d_weak(X, Y, bound, b_only=False)
    b = _d_weak(Y, X, bound, b_only=False)
    return a if a.value >= b.value else b


def delta_L(X, Y, bound=6):
    """Symmetrisation ``max(d(X, Y), d(Y, X))`` over arcs and curves."""
    return _with_slack(_delta_L, X, Y, bound)


def _K(X, Y, bound):
    _check_pair(X, Y)
    _certified(X.surface, bound)
    value, witness = _raw_ratio(Y, X, C, bound)
    return MetricEstimate(value, bound, witness, C, is_exact_family(X.surface))


def K_ratio(X, Y, bound=6):
    """``sup l_X / l_Y`` over simple closed curves, as a ratio (not logged)."""
    return _with_slack(_K, X, Y, bound)


def slack(estimator, X, Y, bound):
    return estimator(X, Y, bound).slack


# -- closed doubles --------------------------------------------------------


def _word_traces(hx, hy, bound):
    """Traces of every reduced word of length ``1..bound`` in two representations.

    Words are grown one letter at a time with all products kept as arrays;
    the last level only needs traces.  Returns per-level trace arrays and the
    parent/letter tables needed to spell a word back.
    """
    gx, gy = hx.matrices, hy.matrices
    r = len(gx)
    codes = np.arange(2 * r)
    inv_code = (codes + r) % (2 * r)
    tx = np.concatenate([gx, np.linalg.inv(gx)])
    ty = np.concatenate([gy, np.linalg.inv(gy)])
    mx, my = tx.copy(), ty.copy()
    last = codes.copy()
    levels = [(np.trace(mx, axis1=1, axis2=2), np.trace(my, axis1=1, axis2=2), None, last)]
    for _ in range(2, bound + 1):
        n = len(last)
        par = np.repeat(np.arange(n), 2 * r)
        code = np.tile(codes, n)
        keep = code != inv_code[last[par]]
        par, code = par[keep], code[keep]
        final = _ == bound
        if final:
            # trace(M g) = sum_ij M_ij g_ji
            trx = np.einsum("nij,nji->n", mx[par], tx[code])
            try_ = np.einsum("nij,nji->n", my[par], ty[code])
            levels.append((trx, try_, par, code))
            break
        mx = mx[par] @ tx[code]
        my = my[par] @ ty[code]
        last = code
        levels.append((np.trace(mx, axis1=1, axis2=2), np.trace(my, axis1=1, axis2=2), par, code))
    return levels, r


def _spell(levels, r, lvl, idx):
    out = []
    while lvl >= 0:
        _, _, par, code = levels[lvl]
        c = int(code[idx])
        out.append(c + 1 if c < r else -(c - r + 1))
        if par is None:
            break
        idx = int(par[idx])
        lvl -= 1
    return tuple(reversed(out))


def _ratio_all_words(hx, hy, bound, margin=1e-6):
    levels, r = _word_traces(hx, hy, bound)
    best, where = -np.inf, None
    for lvl, (trx, try_, _, _) in enumerate(levels):
        ax, ay = np.abs(trx), np.abs(try_)
        ok = (ax > 2.0 + margin) & (ay > 2.0 + margin)
        if not ok.any():
            continue
        ratio = np.full(ax.shape, -np.inf)
        ratio[ok] = np.arccosh(ay[ok] / 2.0) / np.arccosh(ax[ok] / 2.0)
        k = int(np.argmax(ratio))
        if ratio[k] > best * (1 + TIE_TOL):
            best, where = float(ratio[k]), (lvl, k)
    return best, _spell(levels, r, *where)


def _d_double(X, Y, bound):
    _check_pair(X, Y)
    dc = double(X.surface, X.decomposition)
    hx = build_holonomy(double_structure(X, dc))
    hy = build_holonomy(double_structure(Y, dc))
    value, word = _ratio_all_words(hx, hy, bound)
    witness = CurveClass.of(word, ("double",))
    return MetricEstimate(math.log(value), bound, witness, "closed words on the double")


def d_double(X, Y, bound=6):
    """``d`` computed on the doubled surface from all words up to ``bound``.

    The double is closed and simplicity is not filtered: every closed-curve
    ratio is bounded by the optimal Lipschitz constant, so non-simple words
    never push the estimate above the true value.
    """
    return _with_slack(_d_double, X, Y, bound)


# -- companion curves ------------------------------------------------------


def companion_curve(X, a):
    """Simple closed curve on the boundary of a neighbourhood of the arc and its boundaries.

    For an arc between different boundaries ``i, j`` this is the curve
    ``h_i w h_j w^-1``.  For an arc from a boundary to itself the
    neighbourhood is a pants with two further boundary curves; the
    non-peripheral one of greater length is returned.
    """
    st = X.surface
    if st.chi == -1 and st.genus == 0:
        raise IsPants("a pair of pants has no companion curves")
    pres = X.decomposition.presentation
    hs = pres.boundary_words
    w = a.connector
    peripheral = {W.canonical_cyclic(x) for x in hs + pres.puncture_words}

    def ok(word):
        canon = W.canonical_cyclic(word)
        return bool(canon) and canon not in peripheral and is_simple(st, canon, build_holonomy(X)) == SIMPLE

    if a.start != a.end:
        h1, h2 = hs[a.start], hs[a.end]
        cands = [W.mul(h1, w, h2, W.inverse(w)), W.mul(h1, w, W.inverse(h2), W.inverse(w))]
        for c in cands:
            if ok(c):
                return CurveClass.of(c, ("companion",))
        return CurveClass.of(cands[0], ("companion",))
    h = hs[a.start]
    cands = [c for c in (w, W.mul(h, w), W.mul(W.inverse(h), w)) if ok(c)]
    if not cands:
        raise ValueError(f"{a}: no simple non-peripheral companion found")
    classes_ = [CurveClass.of(c, ("companion",)) for c in cands]
    ls = [curve_length(X, c) for c in classes_]
    top = max(ls)
    tied = [c for c, l in zip(classes_, ls) if l >= top - TIE_TOL * top]
    return min(tied, key=lambda c: W.word_key(c.word))


# -- experiment drivers ----------------------------------------------------


@dataclass(frozen=True)
class GapRow:
    X: HypStructure
    Y: HypStructure
    d_L: float
    delta_L: float
    d: float
    d_bar: float

    @property
    def gap(self):
        return self.delta_L - self.d_L

    @property
    def gaps(self):
        return (self.delta_L - self.d_L, self.delta_L - self.d, self.delta_L - self.d_bar)


@dataclass(frozen=True)
class GapReport:
    pairs: list
    max_gap: float
    spec: object
    bound: int = 0
    seed: int | None = None

    @property
    def all_nonnegative(self):
        return all(min(r.gaps) >= -TIE_TOL for r in self.pairs)


def certify_thick(X, spec, bound):
    res = in_thick_part(X, spec, bound)
    if res.status != "yes":
        raise NotInThickPart(f"structure not certified in the thick part ({res.status})", res.witness)
    return res


def comparison_experiment(samples, spec, bound, seed=None):
    """``d_L``, ``delta_L``, ``d`` and ``d_bar`` per pair, with the gaps to ``delta_L``."""
    rows = []
    for X, Y in samples:
        certify_thick(X, spec, bound)
        certify_thick(Y, spec, bound)
        fwd, bwd = _d_weak(X, Y, bound, False), _d_weak(Y, X, bound, False)
        dl = _d_L(X, Y, bound).value
        rows.append(GapRow(X, Y, dl, max(fwd.value, bwd.value), fwd.value, bwd.value))
    max_gap = max((r.gap for r in rows), default=0.0)
    return GapReport(rows, max_gap, spec, bound, seed)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    d: float
    d_bar: float
    d_L: float
    delta_L: float
    slack: float = 0.0

    @property
    def values(self):
        return (self.d, self.d_bar, self.d_L, self.delta_L)


def convergence_study(path, base, ns, bound):
    """Estimators between ``path(n)`` and ``base`` for each ``n``."""
    rows = []
    for n in ns:
        X = path(n)
        fwd, bwd = d_weak(X, base, bound), d_weak(base, X, bound)
        dl = d_L(X, base, bound)
        rows.append(
            ConvergenceRow(
                n,
                fwd.value,
                bwd.value,
                dl.value,
                max(fwd.value, bwd.value),
                max(fwd.slack or 0.0, bwd.slack or 0.0, dl.slack or 0.0),
            )
        )
    return rows


def co_monotone(rows, tol=1e-2, threshold=2.0):
    """Check that the four estimators move together along a path.

    Returns ``(ok, envelope, message)``.  Between consecutive rows every
    estimator must change in the same direction as ``d_L`` unless the change
    is within the rows' slack; ``envelope`` is the largest estimator value
    seen while ``d_L < tol``.  Divergence is judged at the end of the path:
    if one estimator has passed ``threshold`` there, all of them must have.
    """
    envelope = max((max(r.values) for r in rows if r.d_L < tol), default=math.nan)
    for r0, r1 in zip(rows, rows[1:]):
        ref = r1.d_L - r0.d_L
        allow = r0.slack + r1.slack + 1e-12
        for name, v0, v1 in zip(("d", "d_bar", "d_L", "delta_L"), r0.values, r1.values):
            delta = v1 - v0
            if delta * ref < 0 and abs(delta) > allow:
                return False, envelope, f"n={r0.n}->{r1.n}: {name} moves against d_L"
    if rows:
        last = rows[-1]
        if max(last.values) > threshold and min(last.values) <= threshold:
            return False, envelope, f"n={last.n}: estimators disagree about divergence {last.values}"
    return True, envelope, "ok"
