"""Knot diagrams and the crossing-gadget construction of an edge-ideal triangulation.

A diagram is stored in PD form: each crossing is ``(a, b, c, d)``, the arc
labels around the crossing counterclockwise, starting from the incoming
under-strand.  So slots 0 and 2 carry the under-strand and slots 1 and 3 the
over-strand.

Triangulation layout: S^3 is the suspension (poles N, S) of the diagram
sphere, which is cut into one square per crossing (corners = the four arcs
meeting there) and one polygon per region.  Each arc contributes one vertex.
Every crossing owns nine tetrahedra:

* 0 ``X``: the four arc vertices; edge 13 is the over-strand, edge 02 the
  under-strand,
* 1, 2 ``A``, ``B``: cones from N over the upper faces of ``X``,
* 3, 4 ``C``, ``D``: cones from S over the lower faces of ``X``,
* 5..8: one wedge ``(N, S, m_s, m_s+1)`` per corner, which glues to the wedges
  of the neighbouring corners of the same region around an N-S axis edge.

Seen from N the over-strand passes above the under-strand.
"""
import re
from dataclasses import dataclass
from itertools import product
from typing import Tuple

from .edge_ideal import make_edge_ideal
from .errors import ParseError
from .perm import EDGE_NUMBER, Perm4
from .triangulation import Builder

TETS_PER_CROSSING = 9

_X, _A, _B, _C, _D = range(5)
_LABELS = (
    (0, 1, 2, 3),
    ("N", 0, 1, 3),
    ("N", 1, 2, 3),
    ("S", 0, 1, 2),
    ("S", 0, 2, 3),
) + tuple(("N", "S", s, (s + 1) % 4) for s in range(4))


@dataclass(frozen=True)
class Diagram:
    crossings: Tuple[Tuple[int, int, int, int], ...]

    @property
    def size(self):
        return len(self.crossings)

    @property
    def arcCount(self):
        return 2 * len(self.crossings)

    def slots(self):
        """Map each arc label to its two ``(crossing, slot)`` positions."""
        where = {}
        for c, x in enumerate(self.crossings):
            for s, a in enumerate(x):
                where.setdefault(a, []).append((c, s))
        return where

    def twin(self):
        """The other end of the arc at each ``(crossing, slot)``."""
        out = {}
        for pos in self.slots().values():
            a, b = pos
            out[a], out[b] = b, a
        return out

    def regions(self):
        """Regions of the diagram as cyclic lists of corners ``(crossing, s)``.

        Corner ``(c, s)`` is the angle between slots s and s+1; the region
        continues along the arc in slot s+1.
        """
        tw = self.twin()
        seen = set()
        out = []
        for c in range(self.size):
            for s in range(4):
                if (c, s) in seen:
                    continue
                face = []
                cur = (c, s)
                while cur not in seen:
                    seen.add(cur)
                    face.append(cur)
                    cur = tw[(cur[0], (cur[1] + 1) % 4)]
                out.append(face)
        return out

    def traversal(self):
        """Strand passages in knot order as ``(crossing, in slot, out slot)``."""
        if not self.crossings:
            return []
        tw = self.twin()
        out = []
        cur = (0, 0)
        while True:
            c, s = cur
            out.append((c, s, (s + 2) % 4))
            cur = tw[(c, (s + 2) % 4)]
            if cur == (0, 0):
                return out
            if len(out) > 2 * self.size:
                raise ParseError("strand traversal does not close up")

    def switch(self, *which):
        """Switch the named crossings (all of them when none are named)."""
        which = set(which) if which else set(range(self.size))
        inc = {(c, s) for c, s, _ in self.traversal()}
        out = []
        for c, x in enumerate(self.crossings):
            if c in which:
                s = 1 if (c, 1) in inc else 3
                x = tuple(x[(s + i) % 4] for i in range(4))
            out.append(x)
        return Diagram(tuple(out))

    def mirror(self):
        return self.switch()

    def pd_text(self):
        return " ".join("X[%d,%d,%d,%d]" % x for x in self.crossings)


def _check(d):
    where = d.slots()
    for a, pos in where.items():
        if len(pos) != 2:
            raise ParseError(f"arc {a} appears {len(pos)} times, expected 2")
    if not d.crossings:
        return d
    tw = d.twin()
    # components: follow straight through every crossing
    seen = set()
    comps = 0
    for start in tw:
        if start in seen:
            continue
        comps += 1
        cur = start
        while cur not in seen:
            c, s = cur
            seen.add(cur)
            seen.add((c, (s + 2) % 4))
            cur = tw[(c, (s + 2) % 4)]
    if comps != 1:
        raise ParseError("links unsupported")
    # slot 0 must be the incoming end of the under-strand
    for c, s, _ in d.traversal():
        if s == 2:
            raise ParseError(f"crossing {c}: under-strand runs against the PD convention")
    if len(d.regions()) != d.size + 2:
        raise ParseError("diagram is not planar")
    return d


_X_RE = re.compile(r"X\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def parse_pd(text):
    """Parse ``X[a,b,c,d] ...``; empty text is the 0-crossing unknot."""
    body = text.strip()
    if body.startswith("PD"):
        body = body[2:].strip()
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1]
    crossings = []
    pos = 0
    for m in _X_RE.finditer(body):
        if body[pos:m.start()].strip(" \t\r\n,;"):
            raise ParseError(f"unexpected text {body[pos:m.start()].strip()!r}")
        crossings.append(tuple(int(v) for v in m.groups()))
        pos = m.end()
    if body[pos:].strip(" \t\r\n,;"):
        raise ParseError(f"unexpected text {body[pos:].strip()!r}")
    return _check(Diagram(tuple(crossings)))


def _from_gauss(visits, over):
    """Diagram from a Gauss sequence.

    ``visits[v]`` is the crossing met at step v and ``over[v]`` says whether
    the strand is the over-strand there.  The rotation at each crossing is
    found by searching for a planar choice.
    """
    m = len(visits)
    n = m // 2
    arc_in = [((v - 1) % m) + 1 for v in range(m)]
    arc_out = [v + 1 for v in range(m)]
    under, top = {}, {}
    for v, c in enumerate(visits):
        (top if over[v] else under)[c] = v
    if sorted(under) != list(range(n)) or sorted(top) != list(range(n)):
        raise ParseError("each crossing needs one over and one under visit")
    for signs in product((1, -1), repeat=max(n - 1, 0)):
        signs = (1,) + signs
        xs = []
        for c in range(n):
            u, o = under[c], top[c]
            if signs[c] > 0:
                xs.append((arc_in[u], arc_out[o], arc_out[u], arc_in[o]))
            else:
                xs.append((arc_in[u], arc_in[o], arc_out[u], arc_out[o]))
        d = Diagram(tuple(xs))
        if len(d.regions()) == n + 2:
            return _check(d)
    raise ParseError("code is not realizable by a planar diagram")


def parse_dt(text):
    """Parse a Dowker-Thistlethwaite code such as ``4 6 2`` or ``[4, -6, 2]``.

    A negative entry marks the crossings where the even-numbered visit is
    the over-strand.  DT codes fix a knot only up to mirror image.
    """
    body = text.strip()
    if body.startswith("DT"):
        body = body[2:].strip()
    body = body.strip("[]() \t\r\n")
    if not body:
        return Diagram(())
    try:
        codes = [int(x) for x in re.split(r"[\s,]+", body) if x]
    except ValueError:
        raise ParseError(f"bad DT code {text!r}") from None
    n = len(codes)
    evens = sorted(abs(x) for x in codes)
    if evens != list(range(2, 2 * n + 1, 2)):
        raise ParseError("DT code must use each even number 2..2n exactly once")
    visits = [0] * (2 * n)
    over = [False] * (2 * n)
    for i, x in enumerate(codes):
        odd, even = 2 * i, abs(x) - 1
        visits[odd] = visits[even] = i
        over[odd] = x > 0
        over[even] = x < 0
    return _from_gauss(visits, over)


def connected_sum(d1, d2):
    """Band the two diagrams together across the arcs closing their traversals."""
    if not d1.crossings:
        return d2
    if not d2.crossings:
        return d1

    def relabel(d, offset):
        steps = d.traversal()
        new = {}
        for k, (c, _, s_out) in enumerate(steps):
            new[d.crossings[c][s_out]] = offset + k + 1
        xs = [[new[a] for a in x] for x in d.crossings]
        c0, s0, _ = steps[0]
        return xs, (c0, s0), offset + len(steps)

    x1, (c1, s1), last1 = relabel(d1, 0)
    x2, (c2, s2), last2 = relabel(d2, last1)
    # arc last1 now runs into d2 and arc last2 back into d1
    x1[c1][s1] = last2
    x2[c2][s2] = last1
    return _check(Diagram(tuple(tuple(x) for x in x1 + x2)))


# ---------------------------------------------------------------------------
# triangulation


def _glue(b, ta, la, tb, lb, f, rename=None):
    """Glue face ``f`` of tet ``ta`` to tet ``tb`` matching vertex labels."""
    rename = rename or {}
    img = [None] * 4
    for v in range(4):
        if v != f:
            img[v] = lb.index(rename.get(la[v], la[v]))
    img[f] = ({0, 1, 2, 3} - set(img[:f] + img[f + 1:])).pop()
    b.join(ta, f, tb, Perm4(img))


def _gadget(b, base):
    """The nine tetrahedra of one crossing with their internal gluings."""
    lab = _LABELS
    t = [base + i for i in range(TETS_PER_CROSSING)]
    _glue(b, t[_X], lab[_X], t[_A], lab[_A], 2)
    _glue(b, t[_X], lab[_X], t[_B], lab[_B], 0)
    _glue(b, t[_X], lab[_X], t[_C], lab[_C], 3)
    _glue(b, t[_X], lab[_X], t[_D], lab[_D], 1)
    _glue(b, t[_A], lab[_A], t[_B], lab[_B], 1)
    _glue(b, t[_C], lab[_C], t[_D], lab[_D], 2)
    for s in range(4):
        w = t[5 + s]
        pair = {s, (s + 1) % 4}
        top = _A if pair <= {0, 1, 3} else _B
        bot = _C if pair <= {0, 1, 2} else _D
        _glue(b, w, lab[5 + s], t[top], lab[top], 1)
        _glue(b, w, lab[5 + s], t[bot], lab[bot], 0)


def gadget_template():
    """One crossing gadget on its own: ``(tri, over edge, under edge)``.

    The eight faces of the wedges that meet neighbouring gadgets are left
    unglued, so the result is a triangulated ball.
    """
    b = Builder(TETS_PER_CROSSING)
    _gadget(b, 0)
    tri = b.build()
    sk = tri.skeleton()
    return tri, sk.edge_of[_X][EDGE_NUMBER[(1, 3)]], sk.edge_of[_X][EDGE_NUMBER[(0, 2)]]


def unknot_edge_ideal():
    """The fixed one-tetrahedron edge-ideal triangulation of the unknot."""
    b = Builder(1)
    b.join(0, 0, 0, Perm4(1, 0, 2, 3))
    b.join(0, 2, 0, Perm4(0, 1, 3, 2))
    return make_edge_ideal(b.build(), ((UNKNOT_EDGE, 1),))


UNKNOT_EDGE = 0


def build_edge_ideal(d):
    """Edge-ideal triangulation of the knot drawn by ``d``: 9n tetrahedra, loop 2n."""
    if not d.crossings:
        return unknot_edge_ideal()
    n = d.size
    b = Builder(TETS_PER_CROSSING * n)
    for c in range(n):
        _gadget(b, TETS_PER_CROSSING * c)
    tw = d.twin()
    for c in range(n):
        for s in range(4):
            # corner (c, s) continues along slot s+1 to corner twin(c, s+1)
            c2, s2 = tw[(c, (s + 1) % 4)]
            w = TETS_PER_CROSSING * c + 5 + s
            w2 = TETS_PER_CROSSING * c2 + 5 + s2
            la, lb = _LABELS[5 + s], _LABELS[5 + s2]
            a_in, a_out = (s + 1) % 4, s
            rename = {a_in: s2, a_out: (s2 + 1) % 4}
            # face opposite m_s of this wedge holds m_{s+1}
            if b.glue[w][2] is None:
                _glue(b, w, la, w2, lb, 2, rename)
    tri = b.build()
    sk = tri.skeleton()
    loop = []
    for c, s_in, s_out in d.traversal():
        x = TETS_PER_CROSSING * c
        lo, hi = sorted((s_in, s_out))
        le = EDGE_NUMBER[(lo, hi)]
        sign = sk.edge_sign[x][le] * (1 if s_in < s_out else -1)
        loop.append((sk.edge_of[x][le], sign))
    return make_edge_ideal(tri, loop)
