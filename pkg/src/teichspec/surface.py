"""Topology of finite-type surfaces: types, pants decompositions, curve and arc classes.

The fundamental group of a surface with boundary is free.  A pants
decomposition yields a presentation as follows: pants ``v`` contributes
generators ``A_v, B_v`` (loops around its holes 0 and 1, hole 2 being
``(A_v B_v)^-1``), every gluing outside a spanning tree adds a stable letter,
and each gluing relation eliminates one generator.  What is left is a free
basis, printed as ``a, b, c, ...``.  The holonomy construction in
:mod:`teichspec.geometry` follows exactly the same conventions.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from . import words as W
from .exceptions import NoBoundary, NonHyperbolicType, UnsupportedFamily

PANTS = "pants"
ONE_HOLED_TORUS = "one-holed torus"
FOUR_HOLED_SPHERE = "four-holed sphere"
TWO_HOLED_TORUS = "two-holed torus"


@dataclass(frozen=True)
class SurfaceType:
    genus: int
    punctures: int = 0
    boundary: int = 0

    @property
    def chi(self):
        return 2 - 2 * self.genus - self.punctures - self.boundary

    @property
    def rank(self):
        """Rank of the free fundamental group (surfaces with holes only)."""
        return 1 - self.chi

    @property
    def family(self):
        if self.boundary < 1:
            return None
        holes = self.punctures + self.boundary
        return {
            (0, 3): PANTS,
            (1, 1): ONE_HOLED_TORUS,
            (0, 4): FOUR_HOLED_SPHERE,
            (1, 2): TWO_HOLED_TORUS,
        }.get((self.genus, holes))

    def __str__(self):
        return f"S(g={self.genus}, p={self.punctures}, b={self.boundary})"


def validate(st):
    if min(st.genus, st.punctures, st.boundary) < 0:
        raise NonHyperbolicType(f"{st}: negative counts")
    if st.chi >= 0:
        raise NonHyperbolicType(f"{st}: Euler characteristic {st.chi} is not negative")
    return st


# -- pants decompositions --------------------------------------------------


@dataclass(frozen=True)
class PantsDecomposition:
    """Pants ``0..n_pants-1``, each with hole slots ``0, 1, 2``.

    ``gluings[e]`` is the pair of slots glued along interior curve ``e``;
    ``boundary_slots[k]`` and ``puncture_slots[k]`` locate boundary component
    and puncture ``k``.
    """

    surface: SurfaceType
    n_pants: int
    gluings: tuple
    boundary_slots: tuple
    puncture_slots: tuple = ()

    def __post_init__(self):
        seen = Counter()
        for s1, s2 in self.gluings:
            seen[s1] += 1
            seen[s2] += 1
        for s in self.boundary_slots + self.puncture_slots:
            seen[s] += 1
        slots = {(v, i) for v in range(self.n_pants) for i in range(3)}
        if set(seen) != slots or any(c != 1 for c in seen.values()):
            raise ValueError("every slot must be glued, a boundary or a puncture exactly once")
        if len(self.boundary_slots) != self.surface.boundary:
            raise ValueError("boundary slot count does not match the surface type")
        if len(self.puncture_slots) != self.surface.punctures:
            raise ValueError("puncture slot count does not match the surface type")
        if self.n_pants != -self.surface.chi:
            raise ValueError("number of pants must equal -chi")
        if len(self.tree_order) != self.n_pants:
            raise ValueError("decomposition graph is not connected")

    @property
    def n_curves(self):
        return len(self.gluings)

    def slot_role(self, slot):
        for e, (s1, s2) in enumerate(self.gluings):
            if slot in (s1, s2):
                return ("curve", e)
        if slot in self.boundary_slots:
            return ("boundary", self.boundary_slots.index(slot))
        return ("puncture", self.puncture_slots.index(slot))

    @cached_property
    def tree_order(self):
        """BFS over pants from pants 0: list of ``(pants, parent_slot, child_slot, e)``."""
        adj = {v: [] for v in range(self.n_pants)}
        for e, (s1, s2) in enumerate(self.gluings):
            adj[s1[0]].append((e, s1, s2))
            adj[s2[0]].append((e, s2, s1))
        order = [(0, None, None, None)]
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for e, mine, other in adj[v]:
                w = other[0]
                if w not in seen:
                    seen.add(w)
                    order.append((w, mine, other, e))
                    queue.append(w)
        return order

    @cached_property
    def tree_edges(self):
        return {e for (_, _, _, e) in self.tree_order if e is not None}

    @cached_property
    def nontree_edges(self):
        return [e for e in range(len(self.gluings)) if e not in self.tree_edges]

    @cached_property
    def presentation(self):
        return Presentation(self)


def default_pants_decomposition(st):
    """Caterpillar decomposition.

    Leaves are the ``g`` handles, then the boundary components, then the
    punctures.  With ``n = g + b + p`` leaves, a chain of ``n - 2`` pants
    carries them; every handle is a further pants with holes 0 and 1 glued
    together and hole 2 attached to the chain.
    """
    validate(st)
    leaves = (
        [("handle", k) for k in range(st.genus)]
        + [("boundary", k) for k in range(st.boundary)]
        + [("puncture", k) for k in range(st.punctures)]
    )
    n = len(leaves)
    gluings = []
    boundary = {}
    puncture = {}
    n_chain = max(n - 2, 0)
    next_pants = [n_chain]

    def attach(slot, leaf):
        kind, k = leaf
        if kind == "boundary":
            boundary[k] = slot
        elif kind == "puncture":
            puncture[k] = slot
        else:
            h = next_pants[0]
            next_pants[0] += 1
            gluings.append(((h, 0), (h, 1)))
            gluings.append((slot, (h, 2)))

    if n == 2:
        # a handle whose third hole is the remaining leaf
        h = next_pants[0]
        next_pants[0] += 1
        gluings.append(((h, 0), (h, 1)))
        attach((h, 2), leaves[1])
    else:
        for k in range(n_chain):
            if k == 0:
                attach((0, 0), leaves[0])
            else:
                gluings.append(((k - 1, 2), (k, 0)))
            attach((k, 1), leaves[k + 1])
            if k == n_chain - 1:
                attach((k, 2), leaves[n - 1])
    gluings.sort(key=lambda g: (min(g[0][0], g[1][0]), g))
    return PantsDecomposition(
        surface=st,
        n_pants=next_pants[0],
        gluings=tuple(gluings),
        boundary_slots=tuple(boundary[k] for k in range(st.boundary)),
        puncture_slots=tuple(puncture[k] for k in range(st.punctures)),
    )


# -- presentation ----------------------------------------------------------


def slot_letter_word(slot):
    """Word for the loop around a pants slot, over the raw letters of the presentation."""
    v, i = slot
    a, b = 2 * v + 1, 2 * v + 2
    return ((a,), (b,), (-b, -a))[i]


class Presentation:
    """Free basis of the fundamental group derived from a pants decomposition.

    Raw letters: ``A_v`` is letter ``2v``, ``B_v`` letter ``2v + 1``, and the
    stable letter of the ``k``-th non-tree gluing is letter ``2P + k``.
    """

    def __init__(self, pd):
        self.pd = pd
        n_raw = 2 * pd.n_pants + len(pd.nontree_edges)
        self.n_raw = n_raw
        self.stable_letter = {e: 2 * pd.n_pants + k for k, e in enumerate(pd.nontree_edges)}
        subst = {}
        relators = []

        def resolve(word):
            out = []
            for x in word:
                k = abs(x) - 1
                if k in subst:
                    img = resolve(subst[k])
                    out.append(img if x > 0 else W.inverse(img))
                else:
                    out.append((x,))
            return W.mul(*out)

        def eliminate(slot, rhs):
            v, i = slot
            a, b = 2 * v, 2 * v + 1
            rhs = resolve(rhs)
            if i == 0:
                options = [(a, rhs)]
            elif i == 1:
                options = [(b, rhs)]
            else:
                options = [
                    (b, W.mul(((-(a + 1)),), W.inverse(rhs))),
                    (a, W.mul(W.inverse(rhs), ((-(b + 1)),))),
                ]
            for letter, expr in options:
                expr = resolve(expr)
                if letter in subst or any(abs(x) - 1 == letter for x in expr):
                    continue
                subst[letter] = expr
                return
            # otherwise solve the relator for any letter that occurs exactly once
            rel = W.cyclic_reduce(W.mul(resolve(slot_letter_word(slot)), W.inverse(rhs)))[1]
            counts = Counter(abs(x) for x in rel)
            once = [k for k, c in counts.items() if c == 1]
            if not once:
                relators.append(rel)
                return
            k = max(once, key=lambda k: (k <= 2 * pd.n_pants, k))
            n = next(m for m, x in enumerate(rel) if abs(x) == k)
            sol = W.inverse(W.mul(rel[n + 1 :], rel[:n]))
            subst[k - 1] = sol if rel[n] > 0 else W.inverse(sol)

        self.tree = []
        for w, parent_slot, child_slot, e in pd.tree_order[1:]:
            self.tree.append((e, parent_slot, child_slot))
            eliminate(child_slot, W.inverse(slot_letter_word(parent_slot)))
        self.hnn = []
        for e in pd.nontree_edges:
            s1, s2 = pd.gluings[e]
            t = self.stable_letter[e] + 1
            self.hnn.append((e, s1, s2, t - 1))
            eliminate(s2, W.mul((-t,), W.inverse(slot_letter_word(s1)), (t,)))

        self.basis = [k for k in range(n_raw) if k not in subst]
        index = {k: n for n, k in enumerate(self.basis)}
        self.letter_words = []
        for k in range(n_raw):
            raw = resolve(((k + 1),))
            self.letter_words.append(tuple((index[abs(x) - 1] + 1) * (1 if x > 0 else -1) for x in raw))
        self.relators = [self.to_basis(r) for r in relators]

    @property
    def rank(self):
        return len(self.basis)

    @property
    def is_free(self):
        return not self.relators

    def raw_name(self, k):
        if k < 2 * self.pd.n_pants:
            return ("A", "B")[k % 2] + str(k // 2)
        return "t" + str(k - 2 * self.pd.n_pants)

    def to_basis(self, raw_word):
        return W.substitute(raw_word, self.letter_words)

    def slot_word(self, slot):
        return self.to_basis(slot_letter_word(slot))

    @cached_property
    def boundary_elements(self):
        """Cyclically reduced basis words of the boundary components, with conjugators."""
        out = []
        for slot in self.pd.boundary_slots:
            u, c = W.cyclic_reduce(self.slot_word(slot))
            out.append((c, u))
        return out

    @cached_property
    def boundary_words(self):
        return [c for c, _ in self.boundary_elements]

    @cached_property
    def puncture_words(self):
        return [W.cyclic_reduce(self.slot_word(s))[1] for s in self.pd.puncture_slots]

    @cached_property
    def curve_words(self):
        """Basis word of every interior pants curve, seen from its first slot."""
        return [W.cyclic_reduce(self.slot_word(s1))[1] for s1, _ in self.pd.gluings]


# -- curve and arc classes -------------------------------------------------


@dataclass(frozen=True)
class CurveClass:
    """Free homotopy class of a closed curve, stored in cyclic canonical form."""

    word: tuple
    tag: tuple = ("interior",)
    label: str = ""

    @classmethod
    def of(cls, word, tag=("interior",), label=""):
        return cls(W.canonical_cyclic(word), tag, label)

    @property
    def is_boundary(self):
        return self.tag[0] == "boundary"

    def __str__(self):
        return self.label or W.fmt(self.word)


@dataclass(frozen=True)
class ArcClass:
    """Orthogeodesic class from boundary ``start`` to boundary ``end``.

    The class is the double coset ``<h_start> connector <h_end>`` where the
    ``h`` are the cyclically reduced boundary words of the presentation.
    """

    start: int
    end: int
    connector: tuple
    label: str = ""
    core: tuple = ()
    power: int = 0

    @property
    def is_spiral(self):
        return self.power > 0

    @property
    def word(self):
        """Full connector; a spiral arc uses ``connector core^power connector^-1``."""
        if not self.power:
            return self.connector
        u = self.connector
        return W.mul(u, W.power(self.core, self.power), W.inverse(u))

    def __str__(self):
        if self.label:
            return self.label
        if self.power:
            u = W.fmt(self.connector) if self.connector else ""
            return f"arc {self.start + 1}-{self.end + 1} {u}({W.fmt(self.core)})^{self.power}{W.fmt(W.inverse(self.connector)) if u else ''}"
        return f"arc {self.start + 1}-{self.end + 1} {W.fmt(self.connector)}"


def _coset_moves(left, right):
    """One-step moves ``w -> l w r`` with ``l`` in ``<left>``, ``r`` in ``<right>``.

    Two-sided moves are needed: ``A -> BA -> c`` can pass through a longer word
    while ``B A abc = c`` is shorter in one step.
    """
    ls = ((), left, W.inverse(left))
    rs = ((), right, W.inverse(right))
    return [(lm, rm) for lm in ls for rm in rs if lm or rm]


def _descend(w, left, right):
    """Shorten ``w`` by multiplying by powers of ``left`` / ``right`` while possible."""
    moves = _coset_moves(left, right)
    improved = True
    while improved:
        improved = False
        for lm, rm in moves:
            c = W.mul(lm, w, rm)
            if len(c) < len(w):
                w, improved = c, True
    return w


def _plateau(w, left, right, cap=256):
    moves = _coset_moves(left, right)
    seen = {w}
    queue = deque([w])
    while queue and len(seen) < cap:
        u = queue.popleft()
        for lm, rm in moves:
            c = W.mul(lm, u, rm)
            if len(c) == len(w) and c not in seen:
                seen.add(c)
                queue.append(c)
            elif len(c) < len(w):
                return _plateau(_descend(c, left, right), left, right, cap)
    return seen


def canonical_connector(w, left, right, same_boundary):
    """Least representative (shortlex) of ``<left> w <right>``.

    For arcs with both ends on one boundary the reversed arc ``w^-1`` is the
    same class and competes too.
    """
    cands = set(_plateau(_descend(W.free_reduce(w), left, right), left, right))
    if same_boundary:
        wi = W.inverse(W.free_reduce(w))
        cands |= _plateau(_descend(wi, right, left), right, left)
    return min(cands, key=W.word_key)


# -- doubling --------------------------------------------------------------


@dataclass(frozen=True)
class DoubledSurface:
    """The double ``S u mirror(S)`` glued along the boundary.

    Generators of the double: the ``r`` basis letters of ``S``, their ``r``
    mirror images, and one letter ``s_k`` per boundary component ``k >= 1``
    (the loop that leaves through boundary 0 and returns through boundary
    ``k``).  ``mirror_images`` is the involution on these generators.
    """

    base: SurfaceType
    decomposition: PantsDecomposition
    double_type: SurfaceType
    pants_double: PantsDecomposition
    mirror_slots: dict = field(hash=False, compare=False)

    @property
    def base_rank(self):
        return self.decomposition.presentation.rank

    @property
    def n_generators(self):
        return 2 * self.base_rank + self.base.boundary - 1

    @property
    def mirror_images(self):
        r = self.base_rank
        imgs = [(k + 1 + r,) for k in range(r)] + [(k + 1,) for k in range(r)]
        imgs += [(-(2 * r + k + 1),) for k in range(self.base.boundary - 1)]
        return imgs

    def mirror_word(self, word):
        return W.substitute(word, self.mirror_images)

    def include(self, word):
        """Image in the double of a word on ``S``."""
        return tuple(word)

    def reflect(self, word):
        """Image in the double of a word on ``S`` under the mirror copy."""
        r = self.base_rank
        return tuple(x + r if x > 0 else x - r for x in word)

    def stable(self, k):
        return () if k == 0 else (2 * self.base_rank + k,)


def double(st, pd=None):
    validate(st)
    if st.boundary < 1:
        raise NoBoundary(f"{st} has no boundary to double along")
    pd = pd or default_pants_decomposition(st)
    n = pd.n_pants
    mirror = lambda s: (s[0] + n, s[1])
    gluings = list(pd.gluings) + [(mirror(a), mirror(b)) for a, b in pd.gluings]
    gluings += [(s, mirror(s)) for s in pd.boundary_slots]
    punct = tuple(pd.puncture_slots) + tuple(mirror(s) for s in pd.puncture_slots)
    dtype = SurfaceType(2 * st.genus + st.boundary - 1, 2 * st.punctures, 0)
    pdd = PantsDecomposition(dtype, 2 * n, tuple(gluings), (), punct)
    mslots = {}
    for v in range(2 * n):
        for i in range(3):
            w = v + n if v < n else v - n
            mslots[(v, i)] = (w, i)
    return DoubledSurface(st, pd, dtype, pdd, mslots)


def double_arc(dc, arc):
    """Word of the symmetric closed curve obtained by doubling ``arc``.

    With ``R_k`` the reflection in the boundary axis ``k`` and ``s_k = R_k R_0``,
    the doubled curve is ``R_{w axis_j} R_{axis_i} = w s_j mirror(w)^-1 s_i^-1``.
    """
    if isinstance(arc, CurveClass):
        return CurveClass.of(arc.word, arc.tag, arc.label)
    w = dc.include(arc.word)
    word = W.mul(w, dc.stable(arc.end), W.inverse(dc.reflect(arc.word)), W.inverse(dc.stable(arc.start)))
    return CurveClass(W.free_reduce(word), ("double", arc.start, arc.end), f"double({arc})")


# -- fat graphs and simplicity ----------------------------------------------


def _boundary_cycles(order):
    nxt = {order[k]: order[(k + 1) % len(order)] for k in range(len(order))}
    unused = set(order)
    cycles = []
    while unused:
        start = min(unused, key=W.letter_key)
        cyc = []
        x = start
        while x in unused:
            unused.discard(x)
            cyc.append(x)
            x = nxt[-x]
        cycles.append(tuple(cyc))
    return cycles


@lru_cache(maxsize=None)
def ribbon_order(st):
    """Cyclic order of the basis half-edges realising the surface, if one exists.

    A cyclic order at a single vertex whose boundary cycles spell exactly the
    boundary and puncture words makes the basis a spine of the surface; the
    order of ends of its universal cover tree is then the order on the circle
    at infinity, which is what the linking test below needs.
    """
    pres = default_pants_decomposition(st).presentation
    if not pres.is_free:
        return None
    target = Counter(W.canonical_cyclic(w) for w in pres.boundary_words + pres.puncture_words)
    r = pres.rank
    dirs = [x for k in range(1, r + 1) for x in (k, -k)]
    for rest in itertools.permutations(dirs[1:]):
        order = (dirs[0],) + rest
        cycles = _boundary_cycles(order)
        if len(cycles) != sum(target.values()):
            continue
        if Counter(W.canonical_cyclic(c) for c in cycles) == target:
            return order
    return None


def _end_less(e, f, pos, m, limit):
    """Order of two ends (callables ``k -> letter``) of the planar tree."""
    for k in range(limit):
        x, y = e(k), f(k)
        if x != y:
            if k == 0:
                return pos[x] < pos[y]
            inc = pos[-e(k - 1)]
            return (pos[x] - inc) % m < (pos[y] - inc) % m
    return None


def linked_rotations(word, order):
    """True if two lifts of the closed curve ``word`` cross (fat-graph test)."""
    _, w = W.cyclic_reduce(word)
    n = len(w)
    pos = {x: k for k, x in enumerate(order)}
    m = len(order)
    limit = 2 * n + 2

    def ends(i):
        fwd = lambda k: w[(i + k) % n]
        bwd = lambda k: -w[(i - 1 - k) % n]
        return bwd, fwd

    def cmp(e, f):
        lt = _end_less(e, f, pos, m, limit)
        if lt is None:
            return 0
        return -1 if lt else 1

    from functools import cmp_to_key

    for i in range(n):
        for j in range(i + 1, n):
            ui, vi = ends(i), ends(j)
            pts = [(ui[0], 0), (ui[1], 0), (vi[0], 1), (vi[1], 1)]
            if any(cmp(pts[a][0], pts[b][0]) == 0 for a in range(4) for b in range(a + 1, 4)):
                continue
            srt = sorted(pts, key=cmp_to_key(lambda p, q: cmp(p[0], q[0])))
            labels = [lab for _, lab in srt]
            if labels in ([0, 1, 0, 1], [1, 0, 1, 0]):
                return True
    return False


SIMPLE = "simple"
NON_SIMPLE = "non_simple"
UNKNOWN = "unknown"


def is_simple(st, word, holonomy=None, conjugator_bound=4):
    """Decide simplicity of the closed curve ``word``.

    Returns ``"simple"``, ``"non_simple"`` or ``("unknown", bound)``.
    Certified answers come from the fat-graph linking test on the supported
    families; otherwise a crossing between ``axis(w)`` and ``axis(g w g^-1)``
    for ``|g| <= conjugator_bound`` proves non-simplicity.
    """
    pd = default_pants_decomposition(st)
    pres = pd.presentation
    _, c = W.cyclic_reduce(word)
    if not c:
        return NON_SIMPLE
    canon = W.canonical_cyclic(c)
    if any(canon == W.canonical_cyclic(b) for b in pres.boundary_words):
        return SIMPLE
    if W.is_proper_power(c):
        return NON_SIMPLE
    if st.family == PANTS:
        return NON_SIMPLE
    order = ribbon_order(st) if st.family else None
    if order is not None:
        return NON_SIMPLE if linked_rotations(c, order) else SIMPLE
    if holonomy is None:
        return (UNKNOWN, 0)
    from .isometry import Crossing, axis, geodesics_cross

    base = axis(holonomy.evaluate(c))
    for g in W.reduced_words(pres.rank, conjugator_bound, 1):
        conj = W.mul(g, c, W.inverse(g))
        ax = axis(holonomy.evaluate(conj))
        if geodesics_cross(base, ax) is Crossing.CROSS:
            return NON_SIMPLE
    return (UNKNOWN, conjugator_bound)


# -- enumeration -----------------------------------------------------------


def boundary_classes(st):
    pres = default_pants_decomposition(st).presentation
    return [
        CurveClass.of(w, ("boundary", k), f"boundary {k + 1}") for k, w in enumerate(pres.boundary_words)
    ]


def slope_class(p, q):
    p, q = W.normalize_slope(p, q)
    return CurveClass.of(W.christoffel(p, q), ("interior",), f"slope {p}/{q}")


@lru_cache(maxsize=None)
def enumerate_curves(st, complexity_bound):
    """Essential simple closed curve classes of word length at most the bound.

    Boundary classes always come first.  Only the certified families are
    supported; elsewhere curves must be supplied by word.
    """
    validate(st)
    fam = st.family
    if fam is None:
        raise UnsupportedFamily(f"no certified curve enumeration for {st}")
    out = boundary_classes(st)
    if fam == PANTS:
        return tuple(out)
    seen = {c.word for c in out}
    if fam == ONE_HOLED_TORUS:
        for p, q in W.farey_slopes(complexity_bound):
            c = slope_class(p, q)
            if c.word not in seen:
                seen.add(c.word)
                out.append(c)
        return tuple(out)
    pres = default_pants_decomposition(st).presentation
    punct = {W.canonical_cyclic(w) for w in pres.puncture_words}
    order = ribbon_order(st)
    interior = []
    for w in W.reduced_words(pres.rank, complexity_bound, 1):
        if w[0] != min(abs(x) for x in w) or (len(w) > 1 and w[0] == -w[-1]):
            continue
        canon = W.canonical_cyclic(w)
        if canon in seen or canon in punct:
            continue
        seen.add(canon)
        if W.is_proper_power(canon) or linked_rotations(canon, order):
            continue
        interior.append(CurveClass(canon, ("interior",)))
    interior.sort(key=lambda c: W.word_key(c.word))
    return tuple(out + interior)


def pants_arc_classes(st):
    """The finitely many simple arcs of a pants (seams, then self-arcs)."""
    pres = default_pants_decomposition(st).presentation
    hs = pres.boundary_words
    slots = list(default_pants_decomposition(st).boundary_slots)
    holes = [slot[1] for slot in slots]
    out = []
    for x, y in itertools.combinations(range(len(slots)), 2):
        out.append(ArcClass(x, y, (), f"seam {x + 1}-{y + 1}"))
    for x in range(len(slots)):
        # loop around the next hole of the pants, read in the basis
        nxt = (holes[x] + 1) % 3
        conn = pres.slot_word((0, nxt))
        conn = canonical_connector(conn, hs[x], hs[x], True)
        out.append(ArcClass(x, x, conn, f"self-arc {x + 1}"))
    return out


@lru_cache(maxsize=None)
def enumerate_arcs(st, complexity_bound):
    """Essential arc classes whose canonical connector has length at most the bound.

    On a pants this is the list of six (fewer with cusps) simple arcs.  On the
    other families every double coset is listed, simple or not: a non-simple
    orthogeodesic doubles to a closed geodesic of the double whose length
    ratio is still bounded by the Lipschitz constant, so including it never
    pushes an estimate above the true supremum.
    """
    validate(st)
    if st.boundary < 1:
        raise NoBoundary(f"{st} has no boundary")
    if st.family == PANTS:
        return tuple(pants_arc_classes(st))
    pres = default_pants_decomposition(st).presentation
    if not pres.is_free:
        raise UnsupportedFamily(f"{st}: fundamental group presentation is not free")
    hs = pres.boundary_words
    found = set()
    for i in range(len(hs)):
        for j in range(i, len(hs)):
            for w in W.reduced_words(pres.rank, complexity_bound):
                c = canonical_connector(w, hs[i], hs[j], i == j)
                if i == j and not c:
                    continue
                found.add((i, j, c))
    ordered = sorted(found, key=lambda t: (t[0], t[1], W.word_key(t[2])))
    return tuple(ArcClass(i, j, c) for i, j, c in ordered)


@lru_cache(maxsize=None)
def spiral_arcs(st, complexity_bound):
    """Arcs from each boundary back to itself winding ``k`` times around a curve.

    The connector is ``u c^k u^-1`` for ``c`` a boundary or enumerated simple
    curve, ``u`` empty or a single letter, and ``k = 8, 64, ..., 8^bound``.
    Their length ratios tend to the ratio of the core curve, which is how
    arcs alone recover curve ratios.  They are essential but usually not
    simple; see :func:`enumerate_arcs` for why that is harmless.
    """
    if st.family in (None, PANTS):
        return ()
    pres = default_pants_decomposition(st).presentation
    hs = pres.boundary_words
    letters = [()] + [(x,) for k in range(1, pres.rank + 1) for x in (k, -k)]
    out = []
    for c in enumerate_curves(st, complexity_bound):
        for i, h in enumerate(hs):
            for u in letters:
                conj = W.mul(u, c.word, W.inverse(u))
                if conj in (h, W.inverse(h)):
                    continue  # u c u^-1 lies in <h>: the arc would be trivial
                for j in range(1, complexity_bound + 1):
                    out.append(ArcClass(i, i, u, "", c.word, 8 ** j))
    return tuple(out)
