"""Hyperbolic structures in Fenchel-Nielsen coordinates and their length functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import words as W
from .exceptions import (
    CrossingAxes,
    CuspEndpoint,
    NotHyperbolicClass,
    NumericalDegeneracy,
    TeichspecError,
)
from .isometry import (
    RENORMALIZE_EVERY,
    Isometry,
    axis,
    batch_det,
    batch_translation_lengths,
    frame,
    reflection_matrix,
    translation_along,
)
from .surface import (
    ONE_HOLED_TORUS,
    ArcClass,
    CurveClass,
    PantsDecomposition,
    SurfaceType,
    boundary_classes,
    default_pants_decomposition,
    enumerate_curves,
)

HYPERBOLIC_MARGIN = 1e-9


@dataclass(frozen=True)
class HypStructure:
    """A point of Teichmueller space.

    ``curve_lengths[e]`` and ``twists[e]`` belong to interior curve ``e`` of
    the decomposition, ``boundary_lengths[k]`` to boundary component ``k``.
    Punctures are cusps and carry no parameter.  ``base`` is set on
    structures produced by :func:`double_structure`; their holonomy is built
    by reflecting the base structure.
    """

    decomposition: PantsDecomposition
    curve_lengths: tuple = ()
    twists: tuple = ()
    boundary_lengths: tuple = ()
    base: "HypStructure | None" = field(default=None, repr=False)

    def __post_init__(self):
        for name in ("curve_lengths", "twists", "boundary_lengths"):
            object.__setattr__(self, name, tuple(float(x) for x in getattr(self, name)))
        pd = self.decomposition
        if len(self.curve_lengths) != pd.n_curves or len(self.twists) != pd.n_curves:
            raise ValueError(f"expected {pd.n_curves} curve lengths and twists")
        if len(self.boundary_lengths) != pd.surface.boundary:
            raise ValueError(f"expected {pd.surface.boundary} boundary lengths")
        for x in self.curve_lengths + self.boundary_lengths:
            if not (math.isfinite(x) and x > 0):
                raise ValueError(f"lengths must be positive and finite, got {x!r}")
        if not all(math.isfinite(t) for t in self.twists):
            raise ValueError("twists must be finite")

    @property
    def surface(self):
        return self.decomposition.surface

    # constructors

    @classmethod
    def of_type(cls, st, curve_lengths=(), twists=None, boundary_lengths=()):
        pd = default_pants_decomposition(st)
        if twists is None:
            twists = (0.0,) * pd.n_curves
        return cls(pd, curve_lengths, twists, boundary_lengths)

    @classmethod
    def pants(cls, *lengths):
        """Pants with the given boundary lengths; ``0`` marks a cusp (put them last)."""
        b = [x for x in lengths if x != 0]
        if len(lengths) != 3 or any(x == 0 for x in lengths[: len(b)]):
            raise ValueError("give three lengths, cusps (0) last")
        return cls.of_type(SurfaceType(0, 3 - len(b), len(b)), boundary_lengths=b)

    @classmethod
    def one_holed_torus(cls, length, twist, boundary):
        return cls.of_type(SurfaceType(1, 0, 1), (length,), (twist,), (boundary,))

    # flat coordinate vectors

    def vector(self):
        return np.array(self.curve_lengths + self.twists + self.boundary_lengths)

    @classmethod
    def from_vector(cls, pd, vec):
        vec = np.asarray(vec, dtype=float).ravel()
        n, b = pd.n_curves, pd.surface.boundary
        if vec.size != 2 * n + b:
            raise ValueError(f"expected {2 * n + b} coordinates, got {vec.size}")
        return cls(pd, vec[:n], vec[n : 2 * n], vec[2 * n :])

    def slot_length(self, slot):
        kind, k = self.decomposition.slot_role(slot)
        if kind == "curve":
            return self.curve_lengths[k]
        if kind == "boundary":
            return self.boundary_lengths[k]
        return 0.0


@dataclass(frozen=True)
class ThickPartSpec:
    epsilon: float
    epsilon0: float

    def __post_init__(self):
        if not (0 < self.epsilon <= self.epsilon0):
            raise ValueError(f"need 0 < epsilon <= epsilon0, got {self.epsilon}, {self.epsilon0}")


# -- holonomy --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Holonomy:
    """Images of the free basis letters ``a, b, c, ...`` as 2x2 matrices.

    ``convention`` records how the representation was normalised.
    """

    generator_images: tuple
    convention: str = ""

    @property
    def rank(self):
        return len(self.generator_images)

    @property
    def matrices(self):
        return np.stack([g.matrix for g in self.generator_images])

    def evaluate(self, word):
        m = np.eye(2)
        for n, x in enumerate(word, 1):
            g = self.generator_images[abs(x) - 1]
            m = m @ (g.matrix if x > 0 else g.inverse().matrix)
            if n % RENORMALIZE_EVERY == 0:
                m = m / math.sqrt(abs(np.linalg.det(m)))
        return Isometry(m)

    def evaluate_many(self, words):
        """Stack of products for a list of words, evaluated position by position."""
        n = len(words)
        if n == 0:
            return np.zeros((0, 2, 2))
        gens = self.matrices
        inv = np.stack([g.inverse().matrix for g in self.generator_images])
        table = np.concatenate([np.eye(2)[None], gens, inv])
        r = self.rank
        longest = max(len(w) for w in words)
        idx = np.zeros((n, longest), dtype=np.intp)
        for k, w in enumerate(words):
            idx[k, : len(w)] = [x if x > 0 else r - x for x in w]
        out = np.broadcast_to(np.eye(2), (n, 2, 2)).copy()
        for pos in range(longest):
            out = out @ table[idx[:, pos]]
            if (pos + 1) % RENORMALIZE_EVERY == 0:
                out /= np.sqrt(np.abs(np.linalg.det(out)))[:, None, None]
        return out

    def evaluate_many_scaled(self, words):
        """Like :meth:`evaluate_many` but as ``(M, s)`` with the product equal to ``exp(s) M``.

        ``M`` is kept at unit max-entry, so very long words do not overflow.
        """
        n = len(words)
        logs = np.zeros(n)
        if n == 0:
            return np.zeros((0, 2, 2)), logs
        gens = self.matrices
        inv = np.stack([g.inverse().matrix for g in self.generator_images])
        table = np.concatenate([np.eye(2)[None], gens, inv])
        r = self.rank
        longest = max(len(w) for w in words)
        idx = np.zeros((n, longest), dtype=np.intp)
        for k, w in enumerate(words):
            idx[k, : len(w)] = [x if x > 0 else r - x for x in w]
        out = np.broadcast_to(np.eye(2), (n, 2, 2)).copy()
        for pos in range(longest):
            out = out @ table[idx[:, pos]]
            if (pos + 1) % 8 == 0 or pos == longest - 1:
                out, logs = _rescale(out, logs)
        return out, logs


def _rescale(ms, logs):
    m = np.max(np.abs(ms), axis=(1, 2))
    return ms / m[:, None, None], logs + np.log(m)


def _pants_normal_form(l0, l1, l2):
    """``A, B`` with ``A``, ``B``, ``(AB)^-1`` of translation lengths ``l0, l1, l2``.

    A length ``0`` gives a parabolic.  The pants lies to the left of each
    oriented axis.
    """
    x = 2.0 * math.cosh(l0 / 2.0)
    y = 2.0 * math.cosh(l1 / 2.0)
    z = -2.0 * math.cosh(l2 / 2.0)
    zeta = (z + math.sqrt(max(z * z - 4.0, 0.0))) / 2.0
    a = Isometry([[x, -1.0], [1.0, 0.0]])
    b = Isometry([[0.0, zeta], [-1.0 / zeta, y]])
    return [a, b, (a @ b).inverse()]


def _foot_target(img):
    """Ideal data the seam from a pants curve heads to: an axis or a cusp point."""
    t = abs(img.trace)
    if t > 2.0 + HYPERBOLIC_MARGIN:
        g = axis(img)
        return (g.start, g.end)
    m = img.matrix
    # parabolic: fixed point is the kernel of m - tr/2
    a, b, c = m[0, 0] - img.trace / 2.0, m[0, 1], m[1, 0]
    p = (b, -a) if abs(a) + abs(b) > abs(c) else (-m[1, 1] + img.trace / 2.0, c)
    return (p, p)


def _glue(target_img, target_next, source_img, source_next, twist):
    """Isometry ``g`` with ``g source g^-1 = target^-1`` realising a gluing."""
    try:
        tgt = axis(target_img).reversed()
        src = axis(source_img)
        m_target = frame(tgt, _foot_target(target_next))
        m_source = frame(src, _foot_target(source_next))
    except TeichspecError as exc:
        raise NumericalDegeneracy(f"gluing frame failed: {exc}") from exc
    g = m_target @ m_source.inverse()
    return translation_along(axis(target_img), twist) @ g


def _build_fn(X):
    pd = X.decomposition
    pres = pd.presentation
    local = [
        _pants_normal_form(*(X.slot_length((v, i)) for i in range(3))) for v in range(pd.n_pants)
    ]
    conj = {0: Isometry.identity()}
    glob = {0: local[0]}

    def img(slot):
        return glob[slot[0]][slot[1]]

    def nxt(slot):
        return (slot[0], (slot[1] + 1) % 3)

    for e, parent, child in pres.tree:
        w = child[0]
        src = local[w]
        g = _glue(img(parent), img(nxt(parent)), src[child[1]], src[(child[1] + 1) % 3], X.twists[e])
        conj[w] = g
        glob[w] = [s.conjugate(g) for s in src]
    raw = [None] * pres.n_raw
    for v in range(pd.n_pants):
        raw[2 * v], raw[2 * v + 1] = glob[v][0], glob[v][1]
    for e, s1, s2, k in pres.hnn:
        # a handle glued to itself: both feet lie on the seam joining the two holes
        n1, n2 = (s2, s1) if s1[0] == s2[0] else (nxt(s1), nxt(s2))
        raw[k] = _glue(img(s1), img(n1), img(s2), img(n2), X.twists[e])
    return Holonomy(tuple(raw[k] for k in pres.basis), "pants normal form, tree gluing from pants 0")


def _build_double(Xd):
    X = Xd.base
    rho = build_holonomy(X)
    pres = X.decomposition.presentation
    refl = [reflection_matrix(axis(rho.evaluate(h))) for h in pres.boundary_words]
    r0 = refl[0]
    gens = list(rho.generator_images)
    gens += [Isometry(r0 @ g.matrix @ r0) for g in rho.generator_images]
    gens += [Isometry(rk @ r0) for rk in refl[1:]]
    return _balance(Holonomy(tuple(gens), "base, mirror by reflection in boundary 1, stable letters R_k R_1"))


def _balance(hol, iters=200):
    """Conjugate so the generators move the base point ``i`` as little as possible.

    Minimises ``sum |g|_F^2 = sum 2 cosh d(p, g p)`` over ``p = x + i e^s``,
    a convex function on the plane; smaller entries keep long products exact.
    """
    ms = hol.matrices

    def conj(x, s):
        e = math.exp(s / 2.0)
        return np.array([[e, x / e], [0.0, 1.0 / e]])

    def cost(v):
        p = conj(*v)
        pinv = np.array([[p[1, 1], -p[0, 1]], [0.0, p[0, 0]]])
        return float(np.sum((pinv @ ms @ p) ** 2))

    v = np.zeros(2)
    f = cost(v)
    step = 1.0
    h = 1e-6
    for _ in range(iters):
        grad = np.array([(cost(v + h * e) - cost(v - h * e)) / (2 * h) for e in np.eye(2)])
        n = np.linalg.norm(grad)
        if n < 1e-10 * f:
            break
        while step > 1e-12:
            w = v - step * grad / n
            fw = cost(w)
            if fw < f:
                v, f = w, fw
                step *= 2.0
                break
            step /= 2.0
        else:
            break
    p = Isometry(conj(*v))
    gens = tuple(g.conjugate(p.inverse()) for g in hol.generator_images)
    return Holonomy(gens, hol.convention + ", conjugated to a balanced base point")


@lru_cache(maxsize=4096)
def build_holonomy(X):
    if X.base is not None:
        return _build_double(X)
    if not X.decomposition.presentation.is_free:
        raise NumericalDegeneracy("holonomy of closed surfaces is only built by doubling")
    return _balance(_build_fn(X))


# -- lengths ---------------------------------------------------------------


def curve_word(X, c):
    return c.word if isinstance(c, CurveClass) else tuple(c)


def curve_length(X, c):
    tr = abs(build_holonomy(X).evaluate(curve_word(X, c)).trace)
    if tr <= 2.0 + HYPERBOLIC_MARGIN:
        raise NotHyperbolicClass(f"{c} is not hyperbolic (|trace| = {tr!r})")
    return 2.0 * math.acosh(tr / 2.0)


def curve_lengths(X, classes):
    """Vector of lengths; NaN for classes that are not hyperbolic."""
    words = [curve_word(X, c) for c in classes]
    ms = build_holonomy(X).evaluate_many(words)
    tr = np.abs(ms[:, 0, 0] + ms[:, 1, 1])
    out = batch_translation_lengths(tr)
    out[tr <= 2.0 + HYPERBOLIC_MARGIN] = np.nan
    return out


def _boundary_axes(X):
    rho = build_holonomy(X)
    return [axis(rho.evaluate(h)) for h in X.decomposition.presentation.boundary_words]


def _check_arc(X, a):
    if not (0 <= a.start < X.surface.boundary and 0 <= a.end < X.surface.boundary):
        raise CuspEndpoint(f"{a}: arcs must end on boundary components")


def _connector_scaled(X, arcs):
    """Connector holonomies as ``(M, s)``; spiral powers by repeated squaring."""
    rho = build_holonomy(X)
    plain = [k for k, a in enumerate(arcs) if not a.is_spiral]
    spiral = [k for k, a in enumerate(arcs) if a.is_spiral]
    ms = np.zeros((len(arcs), 2, 2))
    logs = np.zeros(len(arcs))
    if plain:
        ms[plain], logs[plain] = rho.evaluate_many_scaled([arcs[k].connector for k in plain])
    if spiral:
        sp = [arcs[k] for k in spiral]
        core, cl = rho.evaluate_many_scaled([a.core for a in sp])
        u = rho.evaluate_many([a.connector for a in sp])
        powers = np.array([a.power for a in sp])
        acc = np.broadcast_to(np.eye(2), core.shape).copy()
        al = np.zeros(len(sp))
        while powers.any():
            odd = (powers & 1).astype(bool)
            acc[odd] = acc[odd] @ core[odd]
            al[odd] += cl[odd]
            acc, al = _rescale(acc, al)
            powers = powers >> 1
            core, cl = _rescale(core @ core, 2 * cl)
        uinv = np.array([[[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]] for m in u])
        full, fl = _rescale(u @ acc @ uinv, al)
        ms[spiral], logs[spiral] = full, fl
    return ms, logs


def arc_lengths(X, arcs):
    """Vector of orthogeodesic lengths; NaN where the lifts are not disjoint.

    With ``g`` the connector holonomy, the arc is the common perpendicular of
    the axis of the start boundary and the ``g``-image of the end boundary
    axis.  The cross-ratio terms are evaluated with ``g`` rescaled, which
    keeps very long connectors finite.
    """
    if not arcs:
        return np.zeros(0)
    for a in arcs:
        _check_arc(X, a)
    axes = [(np.array(g.start), np.array(g.end)) for g in _boundary_axes(X)]
    ms, logs = _connector_scaled(X, arcs)
    a = np.array([axes[x.start][0] for x in arcs])
    b = np.array([axes[x.start][1] for x in arcs])
    c0 = np.array([axes[x.end][0] for x in arcs])
    d0 = np.array([axes[x.end][1] for x in arcs])
    c = np.einsum("nij,nj->ni", ms, c0)
    d = np.einsum("nij,nj->ni", ms, d0)
    p = batch_det(a, c) * batch_det(b, d)
    q = batch_det(a, d) * batch_det(b, c)
    # det(g) = 1, so the last factor is unchanged by g
    r = batch_det(a, b) * batch_det(c0, d0)
    out = np.full(len(arcs), np.nan)
    ok = (p * q > 0) & (r != 0)
    with np.errstate(divide="ignore"):
        y = logs[ok] + 0.5 * np.log(np.minimum(np.abs(p[ok]), np.abs(q[ok])) / np.abs(r[ok]))
    big = y > 30.0
    out_ok = np.empty(y.shape)
    out_ok[~big] = 2.0 * np.arcsinh(np.exp(y[~big]))
    out_ok[big] = 2.0 * (y[big] + math.log(2.0))
    out[ok] = out_ok
    return out


def arc_length(X, a):
    value = arc_lengths(X, [a])[0]
    if not np.isfinite(value):
        raise CrossingAxes(f"{a}: boundary lifts are not disjoint")
    return float(value)


def lengths(X, classes):
    """Lengths of a mixed list of curve and arc classes."""
    out = np.empty(len(classes))
    ci = [k for k, c in enumerate(classes) if isinstance(c, CurveClass)]
    ai = [k for k, c in enumerate(classes) if isinstance(c, ArcClass)]
    out[ci] = curve_lengths(X, [classes[k] for k in ci])
    out[ai] = arc_lengths(X, [classes[k] for k in ai])
    return out


# -- doubling --------------------------------------------------------------


def double_structure(X, dc):
    """Structure on the double restricting to ``X`` on both halves.

    FN data: interior data of ``X``, the mirror copy with negated twists
    (the mirror reverses orientation), and each former boundary curve as an
    interior curve with its length and twist 0.
    """
    if X.decomposition != dc.decomposition:
        raise ValueError("structure and doubled surface use different decompositions")
    lengths_ = X.curve_lengths * 2 + X.boundary_lengths
    twists = X.twists + tuple(-t for t in X.twists) + (0.0,) * len(X.boundary_lengths)
    return HypStructure(dc.pants_double, lengths_, twists, (), base=X)


# -- thick part ------------------------------------------------------------


@dataclass(frozen=True)
class ThickResult:
    status: str
    witness: object = None
    bound: int | None = None
    systole_bound: float | None = None

    def __bool__(self):
        return self.status == "yes"


def collar_width(length):
    """Half width of the standard collar around a simple closed geodesic."""
    return math.asinh(1.0 / math.sinh(length / 2.0))


def torus_systole(X, max_nodes=100000):
    """Exact systole of a one-holed torus, with its slope-word.

    Traces of simple curves sit on the Markov-type tree ``(x, y, z) ->
    (x, y, xy - z)``.  Away from the smallest triple the traces grow, so a
    branch is cut once its new trace dominates both neighbours.
    """
    rho = build_holonomy(X)
    a, b = rho.generator_images
    start = (abs(a.trace), abs(b.trace), abs((a @ b).trace))
    words = ((1,), (2,), (1, 2))
    best = min(zip(start, words))
    seen = set()
    stack = [(start, words)]
    while stack and len(seen) < max_nodes:
        tr, ws = stack.pop()
        key = tuple(round(t, 9) for t in tr)
        if key in seen:
            continue
        seen.add(key)
        for k in range(3):
            i, j = [m for m in range(3) if m != k]
            new = tr[i] * tr[j] - tr[k]
            # the word of the flipped curve: the other product of the neighbours
            nw = W.mul(ws[i], W.inverse(ws[j])) if len(ws[i]) >= len(ws[j]) else W.mul(ws[j], W.inverse(ws[i]))
            if new < best[0]:
                best = (new, nw)
            if new >= max(tr[i], tr[j]) and new >= tr[k]:
                continue
            t2, w2 = list(tr), list(ws)
            t2[k], w2[k] = new, nw
            stack.append((tuple(t2), tuple(w2)))
    return 2.0 * math.acosh(max(best[0], 2.0) / 2.0), best[1]


def in_thick_part(X, spec, bound):
    """Membership in the ``epsilon0``-relative ``epsilon``-thick part.

    Boundary curves must lie in ``[epsilon, epsilon0]``.  A ``no`` always
    carries a witness.  ``yes`` is certified for the one-holed torus by its
    exact systole and elsewhere by the collar lemma: a curve other than a
    pants curve crosses some pants curve ``c`` and so is longer than
    ``2 * collar_width(l_c)``.
    """
    st = X.surface
    for k, length in enumerate(X.boundary_lengths):
        if length > spec.epsilon0 or length < spec.epsilon:
            return ThickResult("no", boundary_classes(st)[k], bound)
    for e, length in enumerate(X.curve_lengths):
        if length < spec.epsilon:
            w = X.decomposition.presentation.curve_words[e]
            return ThickResult("no", CurveClass.of(w, ("pants", e)), bound)
    if st.family == ONE_HOLED_TORUS:
        sys_len, word = torus_systole(X)
        if sys_len < spec.epsilon:
            return ThickResult("no", CurveClass.of(word), bound, sys_len)
        return ThickResult("yes", None, bound, sys_len)
    if st.family is not None:
        ls = curve_lengths(X, enumerate_curves(st, bound))
        for c, length in zip(enumerate_curves(st, bound), ls):
            if length < spec.epsilon:
                return ThickResult("no", c, bound)
    floor = min((2.0 * collar_width(x) for x in X.curve_lengths), default=math.inf)
    floor = min([floor] + list(X.curve_lengths) + list(X.boundary_lengths))
    if floor >= spec.epsilon:
        return ThickResult("yes", None, bound, floor)
    return ThickResult("unknown", None, bound, floor)


# -- arc self-intersection (numerical) ----------------------------------------


def _klein(z):
    """Upper half plane point to the Klein model of the disk."""
    w = (z - 1j) / (z + 1j)
    return 2.0 * w / (1.0 + abs(w) ** 2)


def _foot(g1, g2):
    """Point of ``g1`` closest to ``g2``, in the upper half plane."""
    f = frame(g1, (g2.start, g2.end))
    m = f.matrix
    return (m[0, 0] * 1j + m[0, 1]) / (m[1, 0] * 1j + m[1, 1])


def _segments_cross(p, q, r, s, tol=1e-9):
    def orient(a, b, c):
        return (b - a).real * (c - a).imag - (b - a).imag * (c - a).real

    o1, o2 = orient(p, q, r), orient(p, q, s)
    o3, o4 = orient(r, s, p), orient(r, s, q)
    scale = max(abs(p - q), abs(r - s)) ** 2
    return o1 * o2 < -tol * scale and o3 * o4 < -tol * scale


def arc_segment(X, a):
    """Endpoints of a lift of the orthogeodesic, in the upper half plane."""
    axes = _boundary_axes(X)
    g = build_holonomy(X).evaluate(a.word)
    g1, g2 = axes[a.start], axes[a.end].moved(g)
    return _foot(g1, g2), _foot(g2, g1)


def arc_crossing(X, a, depth=4):
    """Group word moving the lifted arc across itself, or ``None``.

    Only translates by words of length up to ``depth`` are tried, so ``None``
    means no self-crossing was found, not that the arc is simple.
    """
    rho = build_holonomy(X)
    p, q = arc_segment(X, a)
    kp, kq = _klein(p), _klein(q)
    for w in W.reduced_words(rho.rank, depth, 1):
        m = rho.evaluate(w).matrix
        tp = (m[0, 0] * p + m[0, 1]) / (m[1, 0] * p + m[1, 1])
        tq = (m[0, 0] * q + m[0, 1]) / (m[1, 0] * q + m[1, 1])
        if _segments_cross(kp, kq, _klein(tp), _klein(tq)):
            return w
    return None
