"""Crushing normal 2-spheres and following ideal loops through the crush.

Conventions.  A normal surface ``S`` cuts each edge class of weight ``w`` into
``w + 1`` segments, numbered ``0..w`` from the start of the class.  Within a
face, the normal arcs cutting off a corner ``v`` split the two edges at ``v``
into segments at matching depths; the region before the first arc is a
corner face and regions between consecutive arcs are parallel faces.  The
induced orbit of a segment is its closure under these relations.

Crushing keeps exactly the quad-free tetrahedra.  A face of a kept
tetrahedron is reglued by walking through the tetrahedra with quads: in
such a tetrahedron the two faces opposite a quad pair ``{x, y}`` are
identified by the transposition ``(x y)``.
"""
from dataclasses import dataclass, field
from typing import List, Optional

from .edge_ideal import EdgeIdeal, check_loop
from .errors import ContractError, InternalError
from .normal import is_admissible, quad_sep
from .perm import EDGE_NUMBER, EDGE_VERTICES, transposition
from .triangulation import Builder, components, sub_triangulation, validate
from ._union import UnionFind

TYPE0, TYPE1, TYPE2 = 0, 1, 2

LOOP = "LOOP"
NON_LOOP_EDGE = "NON_LOOP_EDGE"
NONE = "NONE"


@dataclass
class Segment:
    edge: int
    index: int
    type: int
    surviving: bool = False
    ideal: bool = False


@dataclass
class SegmentTable:
    edges: List[List[Segment]]

    def segment(self, edge, index):
        return self.edges[edge][index]

    def __iter__(self):
        for row in self.edges:
            yield from row


class _Frame:
    """Per-surface lookups shared by segments, orbits, guts and crushing."""

    def __init__(self, tri, s):
        if not validate(tri).isClosed3Manifold:
            raise ContractError("crushing requires a closed valid triangulation")
        if s.host is not tri and s.host != tri:
            raise ContractError("surface lives in a different triangulation")
        self.tri = tri
        self.s = s
        self.sk = tri.skeleton()
        self.n = tri.size
        self.weights = [s.edge_weight(e) for e in range(len(self.sk.edges))]
        self.quad = [s.quad_type(t) for t in range(self.n)]

    def T(self, t, v):
        return self.s.standard[7 * t + v]

    def seg(self, t, v, u, depth):
        """Class segment at ``depth`` from local vertex ``v`` along edge ``vu``.

        Returns ``((edge, index), dir)``; ``dir`` is +1 when "away from v"
        follows the class orientation.
        """
        le = EDGE_NUMBER[(v, u)]
        e = self.sk.edge_of[t][le]
        sgn = self.sk.edge_sign[t][le]
        d = sgn if v < u else -sgn
        return (e, depth if d > 0 else self.weights[e] - depth), d

    def corner_arcs(self, t, f, v):
        """Number of normal arcs at corner v of face f in tet t."""
        k, c = self.quad[t]
        return self.T(t, v) + (c if c and k == quad_sep(v, f) else 0)

    def side(self, t, v):
        """0 if v lies on the same side of t's quad as vertex 0, else 1."""
        k, _ = self.quad[t]
        return 0 if v == 0 or quad_sep(0, v) == k else 1

    def quad_copy(self, t, v, pos):
        """Quad copy index of the arc at position ``pos`` from corner v."""
        c = self.quad[t][1]
        i = pos - self.T(t, v)
        return i if self.side(t, v) == 0 else c - 1 - i

    def partner_face(self, t, x):
        k, _ = self.quad[t]
        return next(y for y in range(4) if y != x and quad_sep(x, y) == k)

    def face_key(self, t, f, v, j):
        u, p = self.tri.gluing(t, f)
        return min((t, f, v, j), (u, p[f], p[v], j))


def classify_segments(tri, s, loop=None):
    """Segment table: types, surviving flags (central-cell incidence), ideal flags."""
    return _classify(_Frame(tri, s), loop)


def _classify(fr, loop):
    table = []
    for e, w in enumerate(fr.weights):
        if w == 0:
            table.append([Segment(e, 0, TYPE0)])
        else:
            table.append(
                [Segment(e, k, TYPE1 if k in (0, w) else TYPE2) for k in range(w + 1)]
            )
    for t in range(fr.n):
        if fr.quad[t][1]:
            continue
        for a, b in EDGE_VERTICES:
            (e, k), _ = fr.seg(t, a, b, fr.T(t, a))
            table[e][k].surviving = True
    if loop:
        for e, _ in loop:
            for sg in table[e]:
                sg.ideal = True
    return SegmentTable(table)


@dataclass
class Orbit:
    """Segments of one induced orbit with their base complex.

    ``segments`` maps ``(edge, index)`` to the orientation of the segment
    relative to the orbit frame (0 marks an orientation clash).
    """

    segments: dict
    type: int
    faces: set = field(default_factory=set)
    cells: set = field(default_factory=set)

    @property
    def base_euler_characteristic(self):
        return len(self.segments) - len(self.faces) + len(self.cells)

    @property
    def consistent(self):
        return 0 not in self.segments.values()

    @property
    def trivial(self):
        return self.consistent and self.base_euler_characteristic == 1


class _Orbits:
    def __init__(self, fr):
        self.fr = fr
        adj, faces_of, cells_of = {}, {}, {}
        for t in range(fr.n):
            for f in range(4):
                for v in range(4):
                    if v == f:
                        continue
                    u, w = (x for x in range(4) if x not in (v, f))
                    for j in range(fr.corner_arcs(t, f, v)):
                        a, da = fr.seg(t, v, u, j)
                        b, db = fr.seg(t, v, w, j)
                        adj.setdefault(a, []).append((b, da * db))
                        adj.setdefault(b, []).append((a, da * db))
                        faces_of.setdefault(a, set()).add(fr.face_key(t, f, v, j))
            # cone cells (depth 0) and triangle prisms, one 2-cell each
            for v in range(4):
                for i in range(fr.T(t, v)):
                    a, _ = fr.seg(t, v, (v + 1) % 4, i)
                    cells_of.setdefault(a, set()).add(("tri", t, v, i))
            k, c = fr.quad[t]
            if c:
                x = next(y for y in range(1, 4) if y != k + 1)
                for j in range(1, c):
                    a, _ = fr.seg(t, 0, x, fr.T(t, 0) + j)
                    cells_of.setdefault(a, set()).add(("quad", t, j))
        self.adj, self.faces_of, self.cells_of = adj, faces_of, cells_of
        self.orbit_of = {}
        self.orbits = []

    def orbit(self, seg):
        if seg in self.orbit_of:
            return self.orbits[self.orbit_of[seg]]
        e, k = seg
        w = self.fr.weights[e]
        typ = TYPE0 if w == 0 else (TYPE1 if k in (0, w) else TYPE2)
        orient = {seg: 1}
        stack = [seg]
        while stack:
            x = stack.pop()
            for y, rel in self.adj.get(x, ()):
                want = orient[x] * rel
                if y not in orient:
                    orient[y] = want
                    stack.append(y)
                elif orient[y] != want:
                    orient[y] = 0
        faces, cells = set(), set()
        for x in orient:
            faces |= self.faces_of.get(x, set())
            cells |= self.cells_of.get(x, set())
        ob = Orbit(orient, typ, faces, cells)
        self.orbits.append(ob)
        for x in orient:
            self.orbit_of[x] = len(self.orbits) - 1
        return ob


def trace_orbit(tri, s, segment):
    """Induced orbit of ``segment = (edge, index)`` (naive closure)."""
    return _Orbits(_Frame(tri, s)).orbit(tuple(segment))


# ---------------------------------------------------------------------------
# guts: the non-parallel cells of the cut-open triangulation


def _region_cell(fr, t, f, v, j):
    """Cell of tet t containing region j at corner v of face f (v=None: centre)."""
    k, c = fr.quad[t]
    if v is None:
        if not c:
            return ("centre", t), False
        return ("wedge", t, 1 - fr.side(t, f)), False
    tv = fr.T(t, v)
    if j < tv:
        if j == 0:
            return ("corner", t, v), False
        return ("tprism", t, v, j), True
    if j == tv:
        return ("wedge", t, fr.side(t, v)), False
    m = max(fr.quad_copy(t, v, j - 1), fr.quad_copy(t, v, j))
    return ("qprism", t, m), True


def guts_count(tri, s):
    """Number of components left after deleting every parallel cell."""
    return _guts(_Frame(tri, s))


def _guts(fr):
    cells = []
    for t in range(fr.n):
        k, c = fr.quad[t]
        for v in range(4):
            if fr.T(t, v):
                cells.append(("corner", t, v))
        if c:
            cells += [("wedge", t, 0), ("wedge", t, 1)]
        else:
            cells.append(("centre", t))
    uf = UnionFind(cells)
    for t in range(fr.n):
        for f in range(4):
            u, p = fr.tri.gluing(t, f)
            if (u, p[f]) < (t, f):
                continue
            regions = [(None, 0)]
            for v in range(4):
                if v == f:
                    continue
                n = fr.corner_arcs(t, f, v)
                if n != fr.corner_arcs(u, p[f], p[v]):
                    raise InternalError("normal arcs do not match across a face")
                regions += [(v, j) for j in range(n)]
            for v, j in regions:
                a, pa = _region_cell(fr, t, f, v, j)
                b, pb = _region_cell(fr, u, p[f], None if v is None else p[v], j)
                if not pa and not pb:
                    uf.union(a, b)
    return uf.count()


def certify_quad_vertex(tri, s):
    """Sufficient test that ``s`` is a quad vertex 2-sphere: chi = 2, every
    vertex-adjacent orbit trivial, and exactly two guts components."""
    if not is_admissible(s.quad, tri):
        return False
    if s.euler_characteristic() != 2:
        return False
    fr = _Frame(tri, s)
    orbits = _Orbits(fr)
    for e, w in enumerate(fr.weights):
        if w == 0:
            continue
        for k in (0, w):
            if not orbits.orbit((e, k)).trivial:
                return False
    return _guts(fr) == 2


# ---------------------------------------------------------------------------
# crushing


@dataclass
class CrushedComponent:
    tri: object
    idealContent: str
    loop: Optional[tuple] = None
    edge: Optional[int] = None

    def edge_ideal(self):
        if self.idealContent != LOOP:
            return None
        return EdgeIdeal(self.tri, self.loop)


@dataclass
class CrushOutcome:
    components: list
    droppedSphereComponents: int

    def loop_components(self):
        return [c.edge_ideal() for c in self.components if c.idealContent == LOOP]


def _follow(fr, t, f):
    """Final gluing of face (t, f) of a kept tet after walking through quad tets."""
    tri = fr.tri
    u, p = tri.gluing(t, f)
    for _ in range(4 * fr.n + 4):
        if not fr.quad[u][1]:
            return u, p
        x = p[f]
        y = fr.partner_face(u, x)
        p = transposition(x, y) * p
        u2, g = tri.gluing(u, y)
        p = g * p
        u = u2
        if (u, p[f]) == (t, f) and not fr.quad[u][1]:
            return None
    raise InternalError("face walk through crushed tetrahedra did not terminate")


def crush_triangulation(tri, s):
    """Crushed triangulation plus the map from kept tets to new indices."""
    fr = _Frame(tri, s)
    return _crush_tri(fr)


def _crush_tri(fr):
    kept = [t for t in range(fr.n) if not fr.quad[t][1]]
    index = {t: i for i, t in enumerate(kept)}
    b = Builder(len(kept))
    for t in kept:
        for f in range(4):
            if b.glue[index[t]][f] is not None:
                continue
            res = _follow(fr, t, f)
            if res is None:
                raise InternalError("crushing glued a face to itself")
            u, p = res
            b.join(index[t], f, index[u], p)
    return b.build(), index


def crush(E, s):
    """Crush ``s`` in ``E`` and report where the ideal loop ends up.

    ``s`` must meet the loop in at most two points.  Each component of the
    crushed triangulation carries either a loop, a single non-loop edge (the
    loop collapsed onto it), or nothing.
    """
    fr = _Frame(E.tri, s)
    lw = sum(fr.weights[e] for e, _ in E.loop)
    if lw not in (0, 2):
        raise ContractError(f"sphere meets the loop {lw} times; expected 0 or 2")
    new_tri, index = _crush_tri(fr)
    nsk = new_tri.skeleton()

    # images of surviving segments
    image = {}
    for t, nt in index.items():
        for le, (a, b) in enumerate(EDGE_VERTICES):
            (e, k), d = fr.seg(t, a, b, fr.T(t, a))
            img = (nsk.edge_of[nt][le], d * nsk.edge_sign[nt][le])
            old = image.setdefault((e, k), img)
            if old != img:
                raise InternalError("surviving segment has two images")

    orbits = _Orbits(fr)

    def seg_image(x, sigma):
        ob = orbits.orbit(x)
        found = None
        for y, oy in ob.segments.items():
            if y in image:
                e_new, rel = image[y]
                if oy == 0 or ob.segments[x] == 0:
                    raise InternalError("orientation clash in an orbit with survivors")
                cand = (e_new, sigma * ob.segments[x] * oy * rel)
                if found is None:
                    found = cand
                elif found != cand:
                    raise InternalError("orbit survives as two different edges")
        return found

    # cut the loop at its intersection points into arcs of segments
    tokens = []
    for e, sigma in E.loop:
        w = fr.weights[e]
        ks = range(w + 1) if sigma > 0 else range(w, -1, -1)
        for i, k in enumerate(ks):
            if i:
                tokens.append(None)
            tokens.append(((e, k), sigma))
    if lw:
        first = tokens.index(None)
        tokens = tokens[first + 1:] + tokens[:first + 1]
    arcs, cur = [], []
    for tok in tokens:
        if tok is None:
            arcs.append(cur)
            cur = []
        else:
            cur.append(tok)
    if cur:
        arcs.append(cur)

    comps = components(new_tri)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for nt in comp:
            comp_of[nt] = ci
    content = {}
    for arc in arcs:
        steps = [im for im in (seg_image(x, sg) for x, sg in arc) if im is not None]
        if not steps:
            continue
        owners = {comp_of[nsk.edges[e][0][0]] for e, _ in steps}
        if len(owners) != 1:
            raise InternalError("an arc's image spans two components")
        ci = owners.pop()
        if ci in content:
            raise InternalError("two arcs land in the same component")
        if len(steps) == 2 and steps[0][0] == steps[1][0] and steps[0][1] == -steps[1][1]:
            content[ci] = (NON_LOOP_EDGE, steps[0][0])
        else:
            content[ci] = (LOOP, tuple(steps))

    out = []
    dropped = 0
    for ci, comp in enumerate(comps):
        sub, sub_index = sub_triangulation(new_tri, comp)
        ssk = sub.skeleton()

        def local(e):
            nt, le, sg = nsk.edges[e][0]
            st = sub_index[nt]
            return ssk.edge_of[st][le], sg * ssk.edge_sign[st][le]

        kind, data = content.get(ci, (NONE, None))
        if kind == LOOP:
            loop = []
            for e, sg in data:
                le, rel = local(e)
                loop.append((le, sg * rel))
            chk = check_loop(sub, loop)
            if not chk:
                raise InternalError(f"crushed loop is not an ideal loop: {chk.diagnostic}")
            out.append(CrushedComponent(sub, LOOP, loop=tuple(loop)))
        elif kind == NON_LOOP_EDGE:
            out.append(CrushedComponent(sub, NON_LOOP_EDGE, edge=local(data)[0]))
            dropped += 1
        else:
            out.append(CrushedComponent(sub, NONE))
            dropped += 1
    return CrushOutcome(out, dropped)
