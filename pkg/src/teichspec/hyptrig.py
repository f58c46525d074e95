"""Right-angled polygon trigonometry and pair-of-pants geometry.

Boundary lengths are full lengths at the interface; a length of ``0``
encodes a cusp.  Internally everything is written in half lengths, which is
how a pants splits into two right-angled hexagons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .exceptions import CuspEndpoint, CuspMismatch, NoSuchHexagon, NoSuchPentagon


def hexagon_side(b, c, a_prime):
    """Side ``a`` of a right-angled hexagon opposite ``a_prime``.

    ``b`` and ``c`` are the two sides adjacent to ``a_prime``:
    ``cosh a = -cosh b cosh c + sinh b sinh c cosh a'``.
    """
    if min(b, c, a_prime) <= 0:
        raise ValueError("hexagon sides must be positive")
    rhs = -math.cosh(b) * math.cosh(c) + math.sinh(b) * math.sinh(c) * math.cosh(a_prime)
    if rhs <= 1.0:
        raise NoSuchHexagon(f"cosh a = {rhs!r} <= 1")
    return math.acosh(rhs)


def hexagon_opposite(a, b, c):
    """Solve the hexagon relation for ``a'`` given ``a`` and its far neighbours ``b, c``.

    ``a = 0`` is allowed and gives the hexagon with one ideal vertex pair
    collapsed (a cusp).
    """
    if b <= 0 or c <= 0 or a < 0:
        raise ValueError("need a >= 0 and b, c > 0")
    return math.acosh((math.cosh(a) + math.cosh(b) * math.cosh(c)) / (math.sinh(b) * math.sinh(c)))


def pentagon_side(b, c):
    """Side ``a`` of a right-angled pentagon with ``cosh a = sinh b sinh c``.

    ``b`` and ``c`` are the two adjacent sides not touching ``a``.
    """
    s = math.sinh(b) * math.sinh(c)
    if s < 1.0 - 1e-12:
        raise NoSuchPentagon(f"sinh b sinh c = {s!r} < 1")
    # s = 1 is the degenerate pentagon whose side a has shrunk to an ideal vertex
    return math.acosh(max(s, 1.0))


def cusp_square(a):
    """Side ``b`` of a quadrilateral with three right angles and one ideal vertex.

    ``a`` and ``b`` are the finite sides, meeting at a right angle:
    ``sinh a sinh b = 1``.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    return math.asinh(1.0 / math.sinh(a))


@dataclass(frozen=True)
class PantsGeometry:
    boundary_lengths: tuple

    def __post_init__(self):
        ls = tuple(float(x) for x in self.boundary_lengths)
        if len(ls) != 3:
            raise ValueError("a pair of pants has three holes")
        if any(not math.isfinite(x) or x < 0 for x in ls):
            raise ValueError(f"boundary lengths must be finite and >= 0, got {ls}")
        object.__setattr__(self, "boundary_lengths", ls)

    @property
    def half(self):
        return tuple(x / 2.0 for x in self.boundary_lengths)

    def is_cusp(self, i):
        return self.boundary_lengths[i] == 0.0

    @property
    def cusp_pattern(self):
        return tuple(self.is_cusp(i) for i in range(3))

    def boundaries(self):
        return [i for i in range(3) if not self.is_cusp(i)]


def _check_endpoint(p, i):
    if p.is_cusp(i):
        raise CuspEndpoint(f"hole {i} is a cusp; arcs cannot end there")


def pants_seam(p, i, j):
    """Length of the simple orthogeodesic between boundaries ``i != j``."""
    if i == j:
        raise ValueError("a seam joins two distinct boundaries")
    _check_endpoint(p, i)
    _check_endpoint(p, j)
    (k,) = {0, 1, 2} - {i, j}
    h = p.half
    return hexagon_opposite(h[k], h[i], h[j])


def pants_self_arc(p, i, around=None):
    """Length of the simple orthogeodesic with both ends on boundary ``i``.

    The arc separates the two other holes.  ``around`` names the hole used to
    compute it (cutting the pants along the arc and the seam to that hole
    gives two right-angled pentagons).  Both choices describe the same arc and
    agree up to rounding; the default uses a genuine boundary when one exists.
    """
    _check_endpoint(p, i)
    j, k = sorted({0, 1, 2} - {i})
    h = p.half
    if around is None:
        around = j if not p.is_cusp(j) else k
    if around not in (j, k):
        raise ValueError(f"hole {around} is not complementary to {i}")
    if p.is_cusp(j) and p.is_cusp(k):
        # two cusps: quadrilateral with an ideal vertex, quarter of the boundary
        return 2.0 * cusp_square(p.boundary_lengths[i] / 4.0)
    if p.is_cusp(around):
        raise CuspEndpoint(f"hole {around} is a cusp; compute around the other hole")
    seam = pants_seam(p, i, around)
    return 2.0 * pentagon_side(h[around], seam)


def pants_arcs(p):
    """All simple essential arc classes of the pants with their lengths.

    Keys are ``(i, j)`` with ``i <= j``; ``(i, i)`` is the self-arc at ``i``.
    """
    out = {}
    bs = p.boundaries()
    for i, j in combinations(bs, 2):
        out[(i, j)] = pants_seam(p, i, j)
    for i in bs:
        out[(i, i)] = pants_self_arc(p, i)
    return out


def pants_delta_exact(p1, p2):
    """Exact ``(delta_L, d_L)`` between two pants structures.

    On a pants the simple closed curves are the boundary curves and there are
    finitely many simple arcs, so both sups are finite maxima.
    """
    if p1.cusp_pattern != p2.cusp_pattern:
        raise CuspMismatch(f"cusp patterns differ: {p1.cusp_pattern} vs {p2.cusp_pattern}")
    curve_logs = [
        abs(math.log(p1.boundary_lengths[i] / p2.boundary_lengths[i])) for i in p1.boundaries()
    ]
    a1, a2 = pants_arcs(p1), pants_arcs(p2)
    arc_logs = [abs(math.log(a1[k] / a2[k])) for k in a1]
    d_L = max(curve_logs)
    return max(curve_logs + arc_logs), d_L


def regular_seam(t, convention="half"):
    """Seam length of the pants with three boundaries of length ``t``.

    ``convention="half"`` feeds the half lengths ``t/2`` into the hexagon
    relation, which is the geometrically correct reading.  ``"full"`` feeds
    ``t`` itself, i.e. ``cosh l = (cosh^2 t + cosh t) / sinh^2 t``, which is
    the regular pants of boundary length ``2t``.
    """
    if convention == "half":
        h = t / 2.0
    elif convention == "full":
        h = t
    else:
        raise ValueError(f"unknown convention {convention!r}")
    # cosh l - 1 = 1 / (cosh h - 1), i.e. sinh(l/2) = 1 / (2 sinh(h/2))
    return 2.0 * math.asinh(1.0 / (2.0 * math.sinh(h / 2.0)))


def seam_decay_exponent(convention="half"):
    """Exponent ``k`` in ``l_t ~ 2 exp(k t)`` for the regular pants seam."""
    return -0.25 if convention == "half" else -0.5
