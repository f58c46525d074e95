"""Isometries of the hyperbolic plane in the PSL(2, R) model.

Ideal points are stored as homogeneous unit vectors ``(x, w)`` standing for
``x / w`` on the real line, so the point at infinity is ``(1, 0)`` and needs
no special casing.  Most functions come in two flavours: a scalar one working
on :class:`Isometry` / :class:`Geodesic` values, and a batched one working on
``(n, 2, 2)`` matrix stacks and ``(n, 2)`` point stacks, used by the
enumeration code.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import CrossingGeodesics, MalformedIsometry, NotHyperbolic

#: classification boundary for |trace| versus 2
TOL = 1e-9
#: accepted deviation of the determinant from 1
DET_TOL = 1e-9
#: products longer than this are renormalised to unit determinant
RENORMALIZE_EVERY = 32


def _det_noise(m):
    """Rounding noise of ``ad - bc``, allowing for error carried in from long products."""
    return 256 * np.finfo(float).eps * (abs(m[0, 0] * m[1, 1]) + abs(m[0, 1] * m[1, 0]))


def _unit_det(m):
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    # below the rounding noise of det itself, rescaling only adds error
    if abs(det - 1.0) <= _det_noise(m):
        return m
    if det <= 0:
        raise MalformedIsometry(f"determinant {det!r} is not positive")
    return m / math.sqrt(det)


class Isometry:
    """An orientation-preserving isometry, a 2x2 real matrix up to sign."""

    __slots__ = ("_m",)

    def __init__(self, entries, normalize=True):
        m = np.array(entries, dtype=float).reshape(2, 2)
        if normalize:
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            if abs(det - 1.0) > DET_TOL:
                m = _unit_det(m)
        m.setflags(write=False)
        self._m = m

    @classmethod
    def identity(cls):
        return cls(np.eye(2))

    @classmethod
    def translation(cls, length):
        """Translation by ``length`` along the imaginary axis, towards infinity."""
        e = math.exp(length / 2.0)
        return cls([[e, 0.0], [0.0, 1.0 / e]])

    @property
    def matrix(self):
        return self._m

    @property
    def trace(self):
        return float(self._m[0, 0] + self._m[1, 1])

    @property
    def det(self):
        m = self._m
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    def __matmul__(self, other):
        return Isometry(self._m @ other._m)

    def inverse(self):
        a, b, c, d = self._m.ravel()
        return Isometry([[d, -b], [-c, a]], normalize=False)

    def conjugate(self, by):
        """Return ``by @ self @ by^-1``."""
        return by @ self @ by.inverse()

    def canonical(self):
        """Representative with a positive first nonzero entry."""
        flat = self._m.ravel()
        for v in flat:
            if abs(v) > 1e-300:
                return self._m if v > 0 else -self._m
        return self._m

    def allclose(self, other, atol=1e-12):
        return bool(np.allclose(self.canonical(), other.canonical(), atol=atol, rtol=0.0))

    def apply(self, point):
        """Act on an ideal point given as a homogeneous pair."""
        return normalize_point(self._m @ np.asarray(point, dtype=float))

    def __repr__(self):
        a, b, c, d = self._m.ravel()
        return f"Isometry([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"


def product(isometries):
    """Multiply a chain of isometries left to right, renormalising periodically."""
    m = np.eye(2)
    for k, iso in enumerate(isometries, 1):
        m = m @ iso.matrix
        if k % RENORMALIZE_EVERY == 0:
            m = _unit_det(m)
    return Isometry(m)


class Kind(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class TraceClass:
    kind: Kind
    translation_length: float = 0.0


def translation_length_from_trace(trace):
    t = abs(trace)
    if t <= 2.0:
        return 0.0
    return 2.0 * math.acosh(t / 2.0)


def classify(iso):
    if abs(iso.det - 1.0) > max(DET_TOL, _det_noise(iso.matrix)):
        raise MalformedIsometry(f"determinant {iso.det!r} differs from 1")
    t = abs(iso.trace)
    if t > 2.0 + TOL:
        return TraceClass(Kind.HYPERBOLIC, translation_length_from_trace(t))
    if t < 2.0 - TOL:
        return TraceClass(Kind.ELLIPTIC)
    m = iso.canonical()
    if np.allclose(m, np.eye(2), atol=TOL, rtol=0.0):
        return TraceClass(Kind.IDENTITY)
    return TraceClass(Kind.PARABOLIC)


# -- ideal points ----------------------------------------------------------


INFINITY = (1.0, 0.0)


def normalize_point(p):
    x, w = float(p[0]), float(p[1])
    n = math.hypot(x, w)
    if n == 0.0:
        raise ValueError("zero vector is not a point of the projective line")
    x, w = x / n, w / n
    if w < 0 or (w == 0 and x < 0):
        x, w = -x, -w
    return (x, w)


def ideal(value):
    """Ideal point from a real number or ``math.inf``."""
    if math.isinf(value):
        return INFINITY
    return normalize_point((value, 1.0))


def point_value(p):
    """Real coordinate of an ideal point (``inf`` for the point at infinity)."""
    x, w = p
    if w == 0.0:
        return math.inf
    return x / w


def pdet(p, q):
    return p[0] * q[1] - p[1] * q[0]


@dataclass(frozen=True)
class Geodesic:
    """An oriented geodesic, from ``start`` to ``end`` (homogeneous unit vectors)."""

    start: tuple
    end: tuple

    def __post_init__(self):
        object.__setattr__(self, "start", normalize_point(self.start))
        object.__setattr__(self, "end", normalize_point(self.end))
        if abs(pdet(self.start, self.end)) < 1e-15:
            raise ValueError("geodesic endpoints must be distinct")

    @classmethod
    def from_values(cls, start, end):
        return cls(ideal(start), ideal(end))

    def values(self):
        return point_value(self.start), point_value(self.end)

    def reversed(self):
        return Geodesic(self.end, self.start)

    def moved(self, iso):
        return Geodesic(iso.apply(self.start), iso.apply(self.end))

    def same_as(self, other, tol=1e-9):
        return abs(pdet(self.start, other.start)) < tol and abs(pdet(self.end, other.end)) < tol


def fixed_points(m):
    """Repelling and attracting fixed points of a hyperbolic 2x2 matrix."""
    m = np.asarray(m, dtype=float).reshape(2, 2)
    a, b, c, d = (float(v) for v in m.ravel())
    tr = a + d
    det = a * d - b * c
    if abs(det - 1.0) <= _det_noise(m):
        det = 1.0
    disc = tr * tr - 4.0 * det
    if disc <= 0:
        raise NotHyperbolic("matrix has no real distinct fixed points")
    root = math.sqrt(disc)
    # eigenvalue of largest modulus is the attracting one
    lam_big = (tr + math.copysign(root, tr)) / 2.0
    lam_small = det / lam_big
    return _eigvec(a, b, c, d, lam_small), _eigvec(a, b, c, d, lam_big)


def _eigvec(a, b, c, d, lam):
    v1 = (b, lam - a)
    v2 = (lam - d, c)
    v = v1 if math.hypot(*v1) >= math.hypot(*v2) else v2
    return normalize_point(v)


def axis(iso):
    if classify(iso).kind is not Kind.HYPERBOLIC:
        raise NotHyperbolic(f"{iso!r} is not hyperbolic")
    rep, att = fixed_points(iso.matrix)
    return Geodesic(rep, att)


class Crossing(enum.Enum):
    DISJOINT = "disjoint"
    CROSS = "cross"
    SHARED_ENDPOINT = "shared_endpoint"


def orientation(p, q, r):
    """+1 if ``p, q, r`` are in increasing cyclic order on the ideal circle."""
    s = pdet(p, q) * pdet(q, r) * pdet(r, p)
    return (s > 0) - (s < 0)


def geodesics_cross(g1, g2, tol=1e-12):
    a, b = g1.start, g1.end
    c, d = g2.start, g2.end
    for p in (a, b):
        for q in (c, d):
            if abs(pdet(p, q)) < tol:
                return Crossing.SHARED_ENDPOINT
    # c and d separated by {a, b} iff they sit on opposite sides
    if orientation(a, b, c) != orientation(a, b, d):
        return Crossing.CROSS
    return Crossing.DISJOINT


def ortho_distance(g1, g2):
    """Length of the common perpendicular of two disjoint geodesics.

    With ``P = [a,c][b,d]``, ``Q = [a,d][b,c]`` and ``R = [a,b][c,d]`` (2x2
    determinants of the homogeneous endpoints) one has ``P - Q = R`` and
    ``sinh^2(d/2) = min(|P|, |Q|) / |R|``; no difference of nearly equal
    numbers is ever formed.
    """
    kind = geodesics_cross(g1, g2)
    if kind is not Crossing.DISJOINT:
        raise CrossingGeodesics(f"geodesics are not disjoint ({kind.value})")
    a, b, c, d = g1.start, g1.end, g2.start, g2.end
    p = pdet(a, c) * pdet(b, d)
    q = pdet(a, d) * pdet(b, c)
    r = pdet(a, b) * pdet(c, d)
    s2 = min(abs(p), abs(q)) / abs(r)
    return 2.0 * math.asinh(math.sqrt(s2))


def frame(g, foot=None):
    """Isometry taking the upward imaginary axis to ``g``.

    The image of ``i`` is the foot of the perpendicular dropped from the
    ideal point or geodesic ``foot`` (a pair of ideal points; a single point
    may be passed twice).  Without ``foot`` an arbitrary point is used.
    """
    p, q = g.start, g.end
    m = np.array([[q[0], p[0]], [q[1], p[1]]])
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det < 0:
        m[:, 1] = -m[:, 1]
        det = -det
    m = m / math.sqrt(det)
    if foot is not None:
        inv = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])
        u1 = inv @ np.asarray(foot[0], float)
        u2 = inv @ np.asarray(foot[1], float)
        prod = (u1[0] * u2[0]) / (u1[1] * u2[1])
        if not prod > 0:
            raise CrossingGeodesics("foot target meets the geodesic")
        s = prod ** 0.25
        m = m @ np.array([[s, 0.0], [0.0, 1.0 / s]])
    return Isometry(m, normalize=False)


def translation_along(g, length):
    """Translation by ``length`` along ``g`` in its direction of travel."""
    f = frame(g)
    return f @ Isometry.translation(length) @ f.inverse()


def reflection_matrix(g):
    """det -1 matrix of the reflection in ``g`` (acting by z -> M(conj z))."""
    u, v = g.start, g.end
    s = u[0] * v[1] + u[1] * v[0]
    m = np.array([[s, -2.0 * u[0] * v[0]], [2.0 * u[1] * v[1], -s]])
    det = -(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    return m / math.sqrt(det)


def distance(z, w):
    """Hyperbolic distance between two points of the upper half plane."""
    return math.acosh(1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag))


def mobius(m, z):
    m = np.asarray(m)
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


# -- batched kernels -------------------------------------------------------


def batch_translation_lengths(traces):
    t = np.abs(np.asarray(traces, dtype=float))
    out = np.zeros_like(t)
    hyp = t > 2.0
    out[hyp] = 2.0 * np.arccosh(t[hyp] / 2.0)
    return out


def batch_fixed_points(ms):
    """Repelling/attracting fixed points of a stack of hyperbolic matrices.

    Returns two ``(n, 2)`` arrays of homogeneous points (not normalised).
    """
    ms = np.asarray(ms, dtype=float)
    a, b, c, d = ms[:, 0, 0], ms[:, 0, 1], ms[:, 1, 0], ms[:, 1, 1]
    tr = a + d
    det = a * d - b * c
    root = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
    big = (tr + np.copysign(root, tr)) / 2.0
    small = det / big

    def vec(lam):
        v1 = np.stack([b, lam - a], axis=-1)
        v2 = np.stack([lam - d, c], axis=-1)
        use1 = np.hypot(v1[:, 0], v1[:, 1]) >= np.hypot(v2[:, 0], v2[:, 1])
        return np.where(use1[:, None], v1, v2)

    return vec(small), vec(big)


def batch_det(p, q):
    return p[..., 0] * q[..., 1] - p[..., 1] * q[..., 0]


def batch_ortho_distance(a, b, c, d):
    """Vectorised :func:`ortho_distance`; NaN where the pair is not disjoint."""
    p = batch_det(a, c) * batch_det(b, d)
    q = batch_det(a, d) * batch_det(b, c)
    r = batch_det(a, b) * batch_det(c, d)
    out = np.full(np.shape(p), np.nan)
    ok = (p * q > 0) & (r != 0)
    s2 = np.minimum(np.abs(p[ok]), np.abs(q[ok])) / np.abs(r[ok])
    out[ok] = 2.0 * np.arcsinh(np.sqrt(s2))
    return out
