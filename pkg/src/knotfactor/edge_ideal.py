"""Edge-ideal triangulations and the moves that carry the ideal loop along.

A loop is a tuple of steps ``(edge, sign)``; sign ``+1`` walks the edge class
from its start to its end, where the class orientation is that of its first
embedding (see ``Skeleton``).

Every move here is a local rewrite: some tetrahedra are removed, new ones are
added, and each boundary face of the removed region is either handed to a
face of a new tetrahedron (a port) or paired with another boundary face (a
fold).  Edge classes are carried through the rewrite by following an
embedding that survives, which is how the loop gets re-expressed.
"""
import random
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import ContractError, InternalError
from .homology import h1_unchecked
from .isosig import iso_signature
from .perm import EDGE_NUMBER, EDGE_VERTICES, IDENTITY, Perm4, transposition
from .triangulation import Builder, Triangulation, edge_ring, validate

MOVE_KINDS = ("2-3", "3-2", "2-0edge", "2-1edge", "4-4")


class _Refused:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "REFUSED"


REFUSED = _Refused()


@dataclass(frozen=True)
class LoopCheck:
    ok: bool
    diagnostic: Optional[str] = None

    def __bool__(self):
        return self.ok


def check_loop(tri, loop):
    """Check the ideal-loop invariants of ``loop`` inside ``tri``."""
    if not loop:
        return LoopCheck(False, "empty loop")
    sk = tri.skeleton()
    ne = len(sk.edges)
    seen = set()
    for e, s in loop:
        if not 0 <= e < ne:
            return LoopCheck(False, "edge out of range")
        if s not in (1, -1):
            return LoopCheck(False, "bad orientation sign")
        if e in seen:
            return LoopCheck(False, "repeated edge")
        seen.add(e)

    def ends(step):
        a, b = sk.edge_endpoints(step[0])
        return (a, b) if step[1] > 0 else (b, a)

    starts = []
    for i, st in enumerate(loop):
        a, b = ends(st)
        if b != ends(loop[(i + 1) % len(loop)])[0]:
            return LoopCheck(False, "broken chain")
        starts.append(a)
    if len(set(starts)) != len(starts):
        return LoopCheck(False, "repeated vertex")
    return LoopCheck(True)


@dataclass(frozen=True)
class EdgeIdeal:
    """A closed triangulation together with an embedded loop of edges."""

    tri: Triangulation
    loop: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "loop", tuple((int(e), int(s)) for e, s in self.loop))

    @property
    def size(self):
        return self.tri.size

    @property
    def loop_length(self):
        return len(self.loop)

    def loop_edges(self):
        return {e for e, _ in self.loop}

    def vertex_count(self):
        return len(self.tri.skeleton().vertices)

    def signature(self):
        """Isomorphism signature with the loop edges marked."""
        return iso_signature(self.tri, self.loop_edges())


def validate_loop(E):
    """``LoopCheck`` for the loop of an edge-ideal triangulation."""
    return check_loop(E.tri, E.loop)


def make_edge_ideal(tri, loop):
    """Build an ``EdgeIdeal`` after checking both the triangulation and the loop."""
    if not validate(tri).isClosed3Manifold:
        raise ContractError("edge-ideal triangulations need a closed valid triangulation")
    res = check_loop(tri, loop)
    if not res:
        raise ContractError(f"invalid ideal loop: {res.diagnostic}")
    return EdgeIdeal(tri, tuple(loop))


def ring(tri, e):
    """Embeddings ``(tet, perm)`` around edge class ``e``, oriented like the class."""
    t, le, _ = tri.skeleton().edges[e][0]
    return edge_ring(tri, t, le)


# ---------------------------------------------------------------------------
# the rewrite engine


class _Rewrite:
    """Replace tetrahedra ``removed`` by ``nnew`` fresh ones.

    ``port(t, f, n, fn, m)``: old face ``(t, f)`` becomes face ``fn`` of new
    tetrahedron ``n``; ``m`` sends labels of ``n`` to labels of ``t``.
    ``fold(t, f, t2, f2, m)``: old face ``(t, f)`` is pushed onto ``(t2, f2)``;
    ``m`` sends labels of ``t`` to labels of ``t2``.
    ``inner(n, fn, n2, p)``: glue two new tetrahedra directly.
    Faces of removed tetrahedra without a port or fold must be glued to each
    other (they disappear with the region).
    """

    def __init__(self, tri, removed, nnew):
        self.tri = tri
        self.removed = set(removed)
        self.nnew = nnew
        self.ports = {}
        self.inner_gluings = []

    def port(self, t, f, n, fn, m):
        self.ports[(t, f)] = ("new", n, fn, m)

    def fold(self, t, f, t2, f2, m):
        self.ports[(t, f)] = ("fold", t2, f2, m)
        self.ports[(t2, f2)] = ("fold", t, f, m.inverse())

    def inner(self, n, fn, n2, p):
        self.inner_gluings.append((n, fn, n2, p))

    def run(self):
        """Returns ``(new triangulation, old->new tet map, new tet offset)`` or None."""
        tri = self.tri
        kept = [t for t in range(tri.size) if t not in self.removed]
        index = {t: i for i, t in enumerate(kept)}
        off = len(kept)
        b = Builder(off + self.nnew)
        for t in kept:
            for f in range(4):
                u, p = tri.gluing(t, f)
                if u in index and (u, p[f]) > (t, f):
                    b.join(index[t], f, index[u], p)
        for n, fn, n2, p in self.inner_gluings:
            b.join(off + n, fn, off + n2, p)

        # every terminal is an outside face glued into the region or a new port
        def resolve(t, f, phi, start):
            """From removed face (t, f), reached across a gluing with map phi."""
            for _ in range(8 * len(self.removed) + 8):
                pr = self.ports.get((t, f))
                if pr is None:
                    raise InternalError(f"region face ({t},{f}) has no port")
                if pr[0] == "new":
                    _, n, fn, m = pr
                    return off + n, fn, m.inverse() * phi
                _, t2, f2, m = pr
                phi = m * phi
                u, p = tri.gluing(t2, f2)
                phi = p * phi
                f = p[f2]
                if u not in self.removed:
                    return index[u], f, phi
                if (u, f) == start:
                    return None
                t = u
            return None

        for t in kept:
            for f in range(4):
                u, p = tri.gluing(t, f)
                if u not in self.removed:
                    continue
                if b.glue[index[t]][f] is not None:
                    continue
                res = resolve(u, p[f], p, (t, f))
                if res is None:
                    return None
                x, xf, phi = res
                if (x, xf) == (index[t], f):
                    return None
                b.join(index[t], f, x, phi)
        for (t, f), pr in self.ports.items():
            if pr[0] != "new":
                continue
            _, n, fn, m = pr
            if b.glue[off + n][fn] is not None:
                continue
            u, p = tri.gluing(t, f)
            if u not in self.removed:
                continue  # handled from the outside
            res = resolve(u, p[f], p * m, None)
            if res is None:
                return None
            x, xf, phi = res
            if (x, xf) == (off + n, fn):
                return None
            b.join(off + n, fn, x, phi)
        for row in b.glue:
            if None in row:
                return None
        return b.build(), index, off

    def edge_map(self, new_tri, index, off):
        """Old edge class -> (new class, orientation factor) or None if destroyed."""
        tri = self.tri
        osk, nsk = tri.skeleton(), new_tri.skeleton()
        out = []
        for emb in osk.edges:
            out.append(self._carry(emb, index, off, osk, nsk))
        return out

    def _carry(self, emb, index, off, osk, nsk):
        for t, le, s in emb:
            if t in index:
                nt = index[t]
                return nsk.edge_of[nt][le], s * nsk.edge_sign[nt][le]
        for t, le, s in emb:
            a, b = EDGE_VERTICES[le]
            # walk through folds until a new port or a kept tetrahedron shows up
            frontier = [(t, a, b, s)]
            seen = set()
            while frontier:
                tt, x, y, sg = frontier.pop()
                if (tt, x, y) in seen:
                    continue
                seen.add((tt, x, y))
                if tt in index:
                    nt = index[tt]
                    nle = EDGE_NUMBER[(x, y)]
                    d = 1 if x < y else -1
                    return nsk.edge_of[nt][nle], sg * d * nsk.edge_sign[nt][nle]
                for f in range(4):
                    if f in (x, y):
                        continue
                    pr = self.ports.get((tt, f))
                    if pr is None:
                        continue
                    if pr[0] == "new":
                        _, n, fn, m = pr
                        mi = m.inverse()
                        x2, y2 = mi[x], mi[y]
                        nle = EDGE_NUMBER[(x2, y2)]
                        d = 1 if x2 < y2 else -1
                        return nsk.edge_of[off + n][nle], sg * d * nsk.edge_sign[off + n][nle]
                    _, t2, f2, m = pr
                    frontier.append((t2, m[x], m[y], sg if (m[x] < m[y]) == (x < y) else -sg))
        return None


def _sign_local(sg, x, y):
    return sg if x < y else -sg


def _finish(E, rw, require_vertices=None, check_h1=False):
    res = rw.run()
    if res is None:
        return REFUSED
    new_tri, index, off = res
    rep = validate(new_tri)
    if not rep.isClosed3Manifold:
        return REFUSED
    if require_vertices is not None and len(new_tri.skeleton().vertices) != require_vertices:
        return REFUSED
    emap = rw.edge_map(new_tri, index, off)
    loop = []
    for e, s in E.loop:
        m = emap[e]
        if m is None:
            return REFUSED
        loop.append((m[0], s * m[1]))
    if not check_loop(new_tri, loop):
        return REFUSED
    if check_h1 and h1_unchecked(new_tri) != h1_unchecked(E.tri):
        raise InternalError("move changed homology")
    out = EdgeIdeal(new_tri, tuple(loop))
    out_extra = (index, off, emap)
    object.__setattr__(out, "_rewrite_info", out_extra)
    return out


def _move_23(E, triangle):
    tri = E.tri
    sk = tri.skeleton()
    if not 0 <= triangle < len(sk.triangles):
        raise ContractError("triangle index out of range")
    t0, f0, _ = sk.triangles[triangle][0]
    t1, g = tri.gluing(t0, f0)
    if t1 == t0:
        return REFUSED
    a, b, c = (x for x in range(4) if x != f0)
    cyc = {a: (b, c), b: (c, a), c: (a, b)}
    slot = {a: 0, b: 1, c: 2}
    rw = _Rewrite(tri, [t0, t1], 3)
    for z, (x, y) in cyc.items():
        n = slot[z]
        rw.port(t0, z, n, 1, Perm4((f0, z, x, y)))
        rw.port(t1, g[z], n, 0, Perm4((g[z], g[f0], g[x], g[y])))
        rw.inner(n, 3, slot[y], Perm4((0, 1, 3, 2)))
    return _finish(E, rw)


def _move_32(E, edge):
    tri = E.tri
    if not 0 <= edge < len(tri.skeleton().edges):
        raise ContractError("edge index out of range")
    if edge in E.loop_edges():
        return REFUSED
    rg = ring(tri, edge)
    if len(rg) != 3 or len({t for t, _ in rg}) != 3:
        return REFUSED
    rw = _Rewrite(tri, [t for t, _ in rg], 2)
    for i, (t, p) in enumerate(rg):
        opp = 1 + (i + 2) % 3
        img = [0] * 4
        img[0], img[1 + i], img[1 + (i + 1) % 3], img[opp] = p[0], p[2], p[3], p[1]
        rw.port(t, p[1], 0, opp, Perm4(img))
        img = [0] * 4
        img[0], img[1 + i], img[1 + (i + 1) % 3], img[opp] = p[1], p[2], p[3], p[0]
        rw.port(t, p[0], 1, opp, Perm4(img))
    rw.inner(0, 0, 1, IDENTITY)
    return _finish(E, rw)


def _move_20(E, edge):
    tri = E.tri
    sk = tri.skeleton()
    if not 0 <= edge < len(sk.edges):
        raise ContractError("edge index out of range")
    if edge in E.loop_edges():
        return REFUSED
    rg = ring(tri, edge)
    if len(rg) != 2:
        return REFUSED
    (t0, p0), (t1, p1) = rg
    if t0 == t1:
        return REFUSED
    A, B, c, d = p0
    # the pillow's two tetrahedra agree on every label through either inner face
    h = tri.gluing(t0, c)[1]
    if tri.gluing(t0, d) != (t1, h) or tri.gluing(t0, c)[0] != t1:
        return REFUSED
    cd0 = sk.edge_of[t0][EDGE_NUMBER[(c, d)]]
    cd1 = sk.edge_of[t1][EDGE_NUMBER[(h[c], h[d])]]
    if cd0 == cd1:
        return REFUSED
    outer = [(t0, A), (t0, B), (t1, h[A]), (t1, h[B])]
    for x in outer:
        if tri.gluing(*x)[0] in (t0, t1):
            return REFUSED
    rw = _Rewrite(tri, [t0, t1], 0)
    rw.fold(t0, A, t1, h[A], h)
    rw.fold(t0, B, t1, h[B], h)
    return _finish(E, rw, require_vertices=len(sk.vertices))


def _move_21(E, edge):
    """Flatten the one-tetrahedron ball around a degree-1 edge.

    Legal when the ball's boundary sphere is embedded: the three vertex
    classes on it are pairwise distinct.  The two non-apex vertices merge.
    """
    tri = E.tri
    sk = tri.skeleton()
    if not 0 <= edge < len(sk.edges):
        raise ContractError("edge index out of range")
    if edge in E.loop_edges():
        return REFUSED
    rg = ring(tri, edge)
    if len(rg) != 1:
        return REFUSED
    (t, p), = rg
    c, d, a, b = p
    va, vc, vd = sk.vertex_of[t][a], sk.vertex_of[t][c], sk.vertex_of[t][d]
    if len({va, vc, vd}) != 3:
        return REFUSED
    if tri.gluing(t, c)[0] == t or tri.gluing(t, d)[0] == t:
        return REFUSED
    rw = _Rewrite(tri, [t], 0)
    rw.fold(t, d, t, c, transposition(c, d))
    return _finish(E, rw, require_vertices=len(sk.vertices) - 1)


def _move_44(E, edge, option):
    tri = E.tri
    if not 0 <= edge < len(tri.skeleton().edges):
        raise ContractError("edge index out of range")
    if option not in (0, 1):
        raise ContractError("4-4 option must be 0 or 1")
    if edge in E.loop_edges():
        return REFUSED
    rg = ring(tri, edge)
    if len(rg) != 4 or len({t for t, _ in rg}) != 4:
        return REFUSED
    t, p = rg[option]
    sk = tri.skeleton()
    mid = _move_23(E, sk.triangle_of[t][p[2]])
    if not mid:
        return REFUSED
    index, off, emap = mid._rewrite_info
    new_edge = emap[edge][0]
    out = _move_32(mid, new_edge)
    return out


def apply_move(E, kind, location, option=0, check=True):
    """Apply an elementary move; returns the new ``EdgeIdeal`` or ``REFUSED``.

    ``location`` is a triangle index for 2-3 and an edge index otherwise; the
    4-4 option picks which of the two diagonals of the octahedron to use.
    """
    if kind == "2-3":
        out = _move_23(E, location)
    elif kind == "3-2":
        out = _move_32(E, location)
    elif kind == "2-0edge":
        out = _move_20(E, location)
    elif kind == "2-1edge":
        out = _move_21(E, location)
    elif kind == "4-4":
        out = _move_44(E, location, option)
    else:
        raise ContractError(f"unknown move kind {kind!r}")
    if out and check and h1_unchecked(out.tri) != h1_unchecked(E.tri):
        raise InternalError(f"{kind} move changed homology")
    return out


# ---------------------------------------------------------------------------
# loop redirection, snapped balls, pinching


def _local_traversal(sk, t, x, y, sign):
    """Local endpoints of edge (t, x, y) in the direction the loop walks it."""
    le = EDGE_NUMBER[(x, y)]
    lo, hi = EDGE_VERTICES[le]
    forward = sign == sk.edge_sign[t][le]
    return (lo, hi) if forward else (hi, lo)


def _step(sk, t, x, y):
    le = EDGE_NUMBER[(x, y)]
    s = sk.edge_sign[t][le]
    return sk.edge_of[t][le], (s if x < y else -s)


def redirect_loop(E, triangle):
    """Isotope the loop across a triangle.

    Two consecutive loop edges on the triangle become its third side (length
    drops by one); a single loop edge whose two partner sides and far vertex
    avoid the loop becomes those two sides (length grows by one).
    """
    tri = E.tri
    sk = tri.skeleton()
    if not 0 <= triangle < len(sk.triangles):
        raise ContractError("triangle index out of range")
    t, f, _ = sk.triangles[triangle][0]
    verts = [x for x in range(4) if x != f]
    sides = {}
    for i in range(3):
        for j in range(i + 1, 3):
            x, y = verts[i], verts[j]
            sides[(x, y)] = sk.edge_of[t][EDGE_NUMBER[(x, y)]]
    if len(set(sides.values())) != 3:
        return REFUSED
    loop = list(E.loop)
    L = len(loop)
    pos = {e: i for i, (e, _) in enumerate(loop)}
    on = [k for k, e in sides.items() if e in pos]
    if len(on) == 2 and L >= 2:
        (k1, k2) = on
        i1, i2 = pos[sides[k1]], pos[sides[k2]]
        if (i1 + 1) % L == i2:
            first, second = k1, k2
        elif (i2 + 1) % L == i1:
            first, second = k2, k1
            i1, i2 = i2, i1
        else:
            return REFUSED
        p, r = _local_traversal(sk, t, *first, loop[i1][1])
        r2, q = _local_traversal(sk, t, *second, loop[i2][1])
        if r != r2 or p == q:
            return REFUSED
        new = _step(sk, t, p, q)
        if L == 2:
            out = [new]
        else:
            out = loop[:]
            out[i1] = new
            del out[i2]
        res = EdgeIdeal(tri, tuple(out))
        return res if validate_loop(res) else REFUSED
    if len(on) == 1:
        k = on[0]
        i = pos[sides[k]]
        p, r = _local_traversal(sk, t, *k, loop[i][1])
        w = next(x for x in verts if x not in k)
        loop_vertices = {sk.edge_endpoints(e)[0] for e, _ in loop} | {
            sk.edge_endpoints(e)[1] for e, _ in loop
        }
        if sk.vertex_of[t][w] in loop_vertices:
            return REFUSED
        out = loop[:i] + [_step(sk, t, p, w), _step(sk, t, w, r)] + loop[i + 1:]
        res = EdgeIdeal(tri, tuple(out))
        return res if validate_loop(res) else REFUSED
    return REFUSED


def _open_triangle(tri, edge, choice):
    """Locate triangle number ``choice`` around ``edge``.

    Returns ``(t, fa, u, g, v0, v1, w)``: the triangle is face ``fa`` of ``t``
    glued by ``g`` to ``u``; ``v0, v1`` are the edge's local endpoints in ``t``
    (class orientation) and ``w`` the third local vertex.
    """
    rg = ring(tri, edge)
    if not 0 <= choice < len(rg):
        raise ContractError("triangle choice out of range")
    t, p = rg[choice]
    fa = p[2]
    u, g = tri.gluing(t, fa)
    return t, fa, u, g, p[0], p[1], p[3]


def _carry_identity(E, new_tri, drop=None):
    """Re-express the loop when every old tetrahedron keeps its index."""
    osk, nsk = E.tri.skeleton(), new_tri.skeleton()
    loop = []
    for e, s in E.loop:
        if e == drop:
            continue
        t, le, sg = osk.edges[e][0]
        loop.append((nsk.edge_of[t][le], s * sg * nsk.edge_sign[t][le]))
    return tuple(loop)


def insert_snapped_ball(E, edge, choice=0):
    """Fold the triangle ``choice`` around ``edge`` shut with one new tetrahedron.

    The endpoints of ``edge`` merge; if ``edge`` is on the loop it drops out
    of the loop (it now bounds a disc and the loop closes up without it).
    """
    tri = E.tri
    sk = tri.skeleton()
    if not 0 <= edge < len(sk.edges):
        raise ContractError("edge index out of range")
    a, b = sk.edge_endpoints(edge)
    if a == b:
        return REFUSED
    t, fa, u, g, v0, v1, w = _open_triangle(tri, edge, choice)
    bld = Builder.copy_of(tri)
    bld.unjoin(t, fa)
    s = bld.new_tet()
    bld.join(s, 0, s, Perm4((1, 0, 2, 3)))
    bld.join(s, 3, t, Perm4((v0, v1, w, fa)))
    bld.join(s, 2, u, Perm4((g[v0], g[v1], g[fa], g[w])))
    new_tri = bld.build()
    if not validate(new_tri).isClosed3Manifold:
        raise InternalError("snapped ball produced an invalid triangulation")
    drop = edge if edge in E.loop_edges() else None
    loop = _carry_identity(E, new_tri, drop)
    out = EdgeIdeal(new_tri, loop)
    if not validate_loop(out):
        return REFUSED
    return out


def pinch_loop(E):
    """Pinch a length-1 loop to a point with a two-tetrahedron gadget.

    Returns ``(triangulation, vertex)`` where ``vertex`` is the class whose
    link is the boundary torus of the knot exterior.
    """
    if E.loop_length != 1:
        raise ContractError("pinch_loop needs a loop of length 1")
    tri = E.tri
    (edge, _), = E.loop
    t, fa, u, g, v0, v1, w = _open_triangle(tri, edge, 0)
    bld = Builder.copy_of(tri)
    bld.unjoin(t, fa)
    r = bld.new_tet()
    q = bld.new_tet()
    # q is folded shut around its edge 01; that edge is the tunnel
    bld.join(q, 2, q, Perm4((0, 1, 3, 2)))
    bld.join(r, 1, q, Perm4((2, 0, 1, 3)))
    bld.join(r, 2, q, Perm4((0, 3, 1, 2)))
    bld.join(r, 3, t, Perm4((v0, v1, w, fa)))
    bld.join(r, 0, u, Perm4((g[fa], g[v1], g[w], g[v0])))
    new_tri = bld.build()
    vertex = new_tri.skeleton().vertex_of[t][v0]
    return new_tri, vertex


# ---------------------------------------------------------------------------
# drivers


def _key(E):
    return (E.loop_length > 1, E.vertex_count(), E.size, E.loop_length)


def _try_reducing(E, log):
    sk = E.tri.skeleton()
    loop_edges = E.loop_edges()
    deg = sk.edge_degree
    for kind, want in (("3-2", 3), ("2-0edge", 2), ("2-1edge", 1)):
        for e in range(len(sk.edges)):
            if deg[e] != want or e in loop_edges:
                continue
            out = apply_move(E, kind, e, check=False)
            if out:
                log.append((kind, e, 0))
                return out
    return None


def _try_redirect(E, log):
    sk = E.tri.skeleton()
    if E.loop_length < 2:
        return None
    loop_edges = E.loop_edges()
    for i in range(len(sk.triangles)):
        t, f, _ = sk.triangles[i][0]
        hits = sum(
            1
            for le, (x, y) in enumerate(EDGE_VERTICES)
            if f not in (x, y) and sk.edge_of[t][le] in loop_edges
        )
        if hits != 2:
            continue
        out = redirect_loop(E, i)
        if out and out.loop_length < E.loop_length:
            log.append(("redirect", i, 0))
            return out
    return None


def _try_snap(E, log):
    sk = E.tri.skeleton()
    if len(sk.vertices) == 1:
        return None
    loop_edges = E.loop_edges()
    order = [e for e, _ in E.loop] + [e for e in range(len(sk.edges)) if e not in loop_edges]
    for e in order:
        a, b = sk.edge_endpoints(e)
        if a == b:
            continue
        out = insert_snapped_ball(E, e, 0)
        if out:
            log.append(("snap", e, 0))
            return out
    return None


def _greedy(E, log):
    while True:
        nxt = _try_reducing(E, log) or _try_redirect(E, log) or _try_snap(E, log)
        if nxt is None:
            return E
        E = nxt


def _random_44(E, rng, log, tries=8):
    sk = E.tri.skeleton()
    cands = [e for e in range(len(sk.edges)) if sk.edge_degree[e] == 4]
    rng.shuffle(cands)
    for e in cands[:tries]:
        opt = rng.randrange(2)
        out = apply_move(E, "4-4", e, opt, check=False)
        if out:
            log.append(("4-4", e, opt))
            return out
    return None


def simplify(E, budget=200, seed=0, log=None):
    """Greedy simplification with 4-4 exploration on plateaus.

    Passes run in order: tetrahedron-reducing 3-2 / 2-0 / 2-1 moves, loop
    shortening redirects, then snapped balls (shortening the loop first, then
    merging the remaining vertices).  When no pass applies, up to ``budget``
    random 4-4 moves are tried; any that opens a reducing move is kept.
    An input with loop length 1 that is already no larger than the best
    candidate is returned as is.  Returns the result; the moves applied are appended to ``log`` if given.
    """
    rng = random.Random(seed)
    own = []
    cur = _greedy(E, own)
    best, best_len = cur, len(own)
    spent = 0
    stale = 0
    while spent < budget and stale < 20:
        trial_log = []
        nxt = _random_44(cur, rng, trial_log)
        spent += 1
        if nxt is None:
            break
        nxt = _greedy(nxt, trial_log)
        own.extend(trial_log)
        cur = nxt
        if _key(cur) < _key(best):
            best, best_len = cur, len(own)
            stale = 0
        else:
            stale += 1
    own = own[:best_len]
    # vertex merging can grow a triangulation; never trade a smaller input for it
    if (E.loop_length > 1, E.size) <= (best.loop_length > 1, best.size):
        best, own = E, []
    if log is not None:
        log.extend(own)
    if h1_unchecked(best.tri) != h1_unchecked(E.tri):
        raise InternalError("simplification changed homology")
    return best


def randomize(E, heat=20, seed=0, log=None, budget=200):
    """``heat`` random 2-3 moves followed by ``simplify``."""
    rng = random.Random(seed)
    own = []
    cur = E
    for _ in range(heat):
        sk = cur.tri.skeleton()
        order = list(range(len(sk.triangles)))
        rng.shuffle(order)
        for i in order:
            out = apply_move(cur, "2-3", i, check=False)
            if out:
                own.append(("2-3", i, 0))
                cur = out
                break
    cur = simplify(cur, budget=budget, seed=rng.randrange(2**31), log=own)
    if log is not None:
        log.extend(own)
    return cur


def replay(E, moves):
    """Re-apply a logged move sequence; raises ``ContractError`` if any step is refused."""
    for kind, loc, opt in moves:
        if kind == "redirect":
            out = redirect_loop(E, loc)
        elif kind == "snap":
            out = insert_snapped_ball(E, loc, opt)
        else:
            out = apply_move(E, kind, loc, opt, check=False)
        if not out:
            raise ContractError(f"logged move {kind} at {loc} was refused on replay")
        E = out
    return E
