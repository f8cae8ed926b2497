"""Gluing tables for 3-dimensional triangulations and their skeleta.

Tetrahedron ``t`` has local vertices 0..3; face ``f`` is the face opposite
vertex ``f``.  A gluing ``(t, f) -> (u, p)`` identifies face ``f`` of ``t``
with face ``p[f]`` of ``u``, sending local vertex ``i`` of ``t`` to local
vertex ``p[i]`` of ``u``.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import ContractError, ParseError
from .perm import EDGE_NUMBER, EDGE_VERTICES, Perm4

Gluing = Optional[Tuple[int, Perm4]]


def _coerce_perm(p):
    if isinstance(p, Perm4):
        return p
    if isinstance(p, str):
        return Perm4.from_string(p)
    return Perm4(tuple(p))


class Triangulation:
    """An immutable gluing table.  Use :func:`from_gluings` to build one."""

    __slots__ = ("_glue", "_skeleton", "_validity")

    def __init__(self, glue):
        self._glue = tuple(tuple(row) for row in glue)
        self._skeleton = None
        self._validity = None

    @property
    def size(self):
        return len(self._glue)

    def gluing(self, t, f) -> Gluing:
        return self._glue[t][f]

    def adjacent(self, t, f):
        g = self._glue[t][f]
        return None if g is None else g[0]

    def rows(self):
        return self._glue

    def is_closed(self):
        return all(g is not None for row in self._glue for g in row)

    def skeleton(self):
        if self._skeleton is None:
            self._skeleton = Skeleton(self)
        return self._skeleton

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self._glue == other._glue

    def __hash__(self):
        return hash(self._glue)

    def __repr__(self):
        return f"<Triangulation size={self.size}>"


def from_gluings(table) -> Triangulation:
    """Build a triangulation from a table of rows of four gluings.

    Each entry is ``None`` (unglued) or ``(partner, perm)`` where ``perm`` is a
    :class:`Perm4`, its 4-digit string, or a sequence of images.
    """
    n = len(table)
    glue = []
    for t, row in enumerate(table):
        if len(row) != 4:
            raise ParseError(f"tetrahedron {t}: expected 4 faces, got {len(row)}")
        out = []
        for f, g in enumerate(row):
            if g is None:
                out.append(None)
                continue
            u, p = g
            if not isinstance(u, int) or not 0 <= u < n:
                raise ParseError(f"face ({t},{f}): partner {u!r} out of range")
            try:
                p = _coerce_perm(p)
            except ValueError as exc:
                raise ParseError(f"face ({t},{f}): {exc}") from None
            out.append((u, p))
        glue.append(out)
    for t in range(n):
        for f in range(4):
            g = glue[t][f]
            if g is None:
                continue
            u, p = g
            if u == t and p[f] == f:
                raise ParseError(f"face ({t},{f}) glued to itself")
            back = glue[u][p[f]]
            if back is None or back[0] != t or back[1] != p.inverse():
                raise ParseError(
                    f"face ({t},{f}) -> ({u},{p[f]}) is not matched by the reverse gluing"
                )
    return Triangulation(glue)


class Builder:
    """Mutable gluing table used while assembling or rewriting triangulations."""

    def __init__(self, size=0):
        self.glue = [[None] * 4 for _ in range(size)]

    @classmethod
    def copy_of(cls, tri):
        b = cls()
        b.glue = [list(row) for row in tri.rows()]
        return b

    def new_tet(self):
        self.glue.append([None] * 4)
        return len(self.glue) - 1

    def join(self, t, f, u, p):
        p = _coerce_perm(p)
        uf = p[f]
        if self.glue[t][f] is not None or self.glue[u][uf] is not None:
            raise ContractError(f"face ({t},{f}) or ({u},{uf}) already glued")
        if t == u and uf == f:
            raise ContractError(f"face ({t},{f}) glued to itself")
        self.glue[t][f] = (u, p)
        self.glue[u][uf] = (t, p.inverse())

    def unjoin(self, t, f):
        g = self.glue[t][f]
        if g is not None:
            u, p = g
            self.glue[t][f] = None
            self.glue[u][p[f]] = None

    def build(self):
        return Triangulation(self.glue)


def disjoint_union(*tris):
    glue = []
    for tri in tris:
        off = len(glue)
        for row in tri.rows():
            glue.append([None if g is None else (g[0] + off, g[1]) for g in row])
    return Triangulation(glue)


def relabel(tri, order, perms):
    """Renumber tetrahedra and their vertices.

    Old tetrahedron ``t`` becomes ``order[t]`` and its old local vertex ``i``
    becomes new vertex ``perms[t][i]``.
    """
    n = tri.size
    glue = [[None] * 4 for _ in range(n)]
    for t in range(n):
        pt = perms[t]
        for f in range(4):
            g = tri.gluing(t, f)
            if g is None:
                continue
            u, p = g
            q = perms[u] * p * pt.inverse()
            glue[order[t]][pt[f]] = (order[u], q)
    return Triangulation(glue)


def components(tri):
    """Connected components as sorted lists of tetrahedron indices."""
    seen = [False] * tri.size
    out = []
    for s in range(tri.size):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            t = stack.pop()
            comp.append(t)
            for f in range(4):
                u = tri.adjacent(t, f)
                if u is not None and not seen[u]:
                    seen[u] = True
                    stack.append(u)
        out.append(sorted(comp))
    return out


def sub_triangulation(tri, tets):
    """Restrict to a set of tetrahedra closed under adjacency; returns (tri, old->new)."""
    index = {t: i for i, t in enumerate(tets)}
    glue = []
    for t in tets:
        row = []
        for f in range(4):
            g = tri.gluing(t, f)
            row.append(None if g is None else (index[g[0]], g[1]))
        glue.append(row)
    return Triangulation(glue), index


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.parity = [0] * n

    def find(self, x):
        par = 0
        root = x
        while self.parent[root] != root:
            par ^= self.parity[root]
            root = self.parent[root]
        # path compression with parity bookkeeping
        cur, cur_par = x, par
        while self.parent[cur] != cur:
            nxt = self.parent[cur]
            nxt_par = cur_par ^ self.parity[cur]
            self.parent[cur] = root
            self.parity[cur] = cur_par
            cur, cur_par = nxt, nxt_par
        return root, par

    def union(self, a, b, rel=0):
        """Merge a and b with parity(a) ^ parity(b) == rel; False on conflict."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == rel
        if ra < rb:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[ra] = rb
        self.parity[ra] = pa ^ pb ^ rel
        return True


class Skeleton:
    """Vertex, edge and triangle classes of a triangulation.

    Classes are numbered by first appearance, scanning tetrahedra in order
    and local cells in order (edges as 01,02,03,12,13,23).  Each class lists
    its embeddings as ``(tet, local index, orientation)`` in scan order;
    orientation is relative to the first embedding.
    """

    def __init__(self, tri):
        n = tri.size
        self.vertices, self.edges, self.triangles = [], [], []
        self.edge_degree, self.edge_reversed = [], []

        uf = _UnionFind(4 * n)
        for t in range(n):
            for f in range(4):
                g = tri.gluing(t, f)
                if g is None:
                    continue
                u, p = g
                for v in range(4):
                    if v != f:
                        uf.union(4 * t + v, 4 * u + p[v])
        self.vertex_of = [[0] * 4 for _ in range(n)]
        label = {}
        for t in range(n):
            for v in range(4):
                r = uf.find(4 * t + v)[0]
                if r not in label:
                    label[r] = len(self.vertices)
                    self.vertices.append([])
                i = label[r]
                self.vertex_of[t][v] = i
                self.vertices[i].append((t, v, 1))

        uf = _UnionFind(6 * n)
        bad_roots = set()
        for t in range(n):
            for f in range(4):
                g = tri.gluing(t, f)
                if g is None:
                    continue
                u, p = g
                for e, (a, b) in enumerate(EDGE_VERTICES):
                    if f in (a, b):
                        continue
                    pa, pb = p[a], p[b]
                    flip = 1 if pa > pb else 0
                    if not uf.union(6 * t + e, 6 * u + EDGE_NUMBER[(pa, pb)], flip):
                        bad_roots.add(6 * t + e)
        bad = {uf.find(x)[0] for x in bad_roots}
        self.edge_of = [[0] * 6 for _ in range(n)]
        self.edge_sign = [[1] * 6 for _ in range(n)]
        label = {}
        for t in range(n):
            for e in range(6):
                r, par = uf.find(6 * t + e)
                if r not in label:
                    label[r] = (len(self.edges), par)
                    self.edges.append([])
                    self.edge_reversed.append(r in bad)
                i, par0 = label[r]
                s = -1 if par ^ par0 else 1
                self.edge_of[t][e] = i
                self.edge_sign[t][e] = s
                self.edges[i].append((t, e, s))
        self.edge_degree = [len(emb) for emb in self.edges]

        self.triangle_of = [[0] * 4 for _ in range(n)]
        self.triangle_sign = [[1] * 4 for _ in range(n)]
        for t in range(n):
            for f in range(4):
                g = tri.gluing(t, f)
                if g is not None:
                    u, p = g
                    if (u, p[f]) < (t, f):
                        i = self.triangle_of[u][p[f]]
                        self.triangle_of[t][f] = i
                        self.triangle_sign[t][f] = -1
                        self.triangles[i].append((t, f, -1))
                        continue
                self.triangle_of[t][f] = len(self.triangles)
                self.triangles.append([(t, f, 1)])

    def edge_endpoints(self, i):
        t, e, s = self.edges[i][0]
        a, b = EDGE_VERTICES[e]
        return self.vertex_of[t][a], self.vertex_of[t][b]

    def euler_characteristic(self, tet_count):
        return len(self.vertices) - len(self.edges) + len(self.triangles) - tet_count


@dataclass(frozen=True)
class ValidityReport:
    isClosed: bool
    reversedEdges: Tuple[int, ...]
    vertexLinkChecks: Tuple[Tuple[int, bool], ...]
    isClosed3Manifold: bool
    isOrientable: bool
    vertexLinkBoundary: Tuple[bool, ...] = ()


def _vertex_links(tri, sk):
    """Euler characteristic, connectedness and boundary flag of each vertex link."""
    n = tri.size
    nv = len(sk.vertices)
    corners = [0] * nv
    link_edges = [0] * nv
    has_boundary = [False] * nv
    uf = _UnionFind(16 * n)  # link vertex (t, v, w) -> 16*t + 4*v + w
    cuf = _UnionFind(4 * n)
    for t in range(n):
        for v in range(4):
            corners[sk.vertex_of[t][v]] += 1
    for t in range(n):
        for f in range(4):
            g = tri.gluing(t, f)
            for v in range(4):
                if v == f:
                    continue
                vc = sk.vertex_of[t][v]
                if g is None:
                    link_edges[vc] += 1
                    has_boundary[vc] = True
                    continue
                u, p = g
                if (u, p[f]) < (t, f):
                    continue
                link_edges[vc] += 1
                cuf.union(4 * t + v, 4 * u + p[v])
                for w in range(4):
                    if w != v and w != f:
                        uf.union(16 * t + 4 * v + w, 16 * u + 4 * p[v] + p[w])
    link_verts = [set() for _ in range(nv)]
    comps = [set() for _ in range(nv)]
    for t in range(n):
        for v in range(4):
            vc = sk.vertex_of[t][v]
            comps[vc].add(cuf.find(4 * t + v)[0])
            for w in range(4):
                if w != v:
                    link_verts[vc].add(uf.find(16 * t + 4 * v + w)[0])
    checks = tuple(
        (len(link_verts[i]) - link_edges[i] + corners[i], len(comps[i]) == 1)
        for i in range(nv)
    )
    return checks, tuple(has_boundary)


def is_orientable(tri):
    n = tri.size
    orient = [0] * n
    for s in range(n):
        if orient[s]:
            continue
        orient[s] = 1
        stack = [s]
        while stack:
            t = stack.pop()
            for f in range(4):
                g = tri.gluing(t, f)
                if g is None:
                    continue
                u, p = g
                want = -orient[t] * p.sign()
                if orient[u] == 0:
                    orient[u] = want
                    stack.append(u)
                elif orient[u] != want:
                    return False
    return True


def validate(tri) -> ValidityReport:
    if tri._validity is not None:
        return tri._validity
    sk = tri.skeleton()
    closed = tri.is_closed()
    reversed_edges = tuple(i for i, r in enumerate(sk.edge_reversed) if r)
    checks, boundary = _vertex_links(tri, sk)
    ok = closed and not reversed_edges and all(c == (2, True) for c in checks)
    rep = ValidityReport(
        isClosed=closed,
        reversedEdges=reversed_edges,
        vertexLinkChecks=checks,
        isClosed3Manifold=ok,
        isOrientable=is_orientable(tri),
        vertexLinkBoundary=boundary,
    )
    tri._validity = rep
    return rep


def edge_ring(tri, t, e):
    """Embeddings ``(tet, perm)`` around the edge through local edge ``e`` of ``t``.

    ``perm[0], perm[1]`` are the edge's endpoints (oriented as ``EDGE_VERTICES[e]``);
    each step leaves through the face opposite ``perm[2]``.  For an edge on the
    boundary the walk starts at a boundary wedge.  Requires the edge not to be
    identified with itself in reverse.
    """
    a, b = EDGE_VERTICES[e]
    c, d = (x for x in range(4) if x not in (a, b))
    start = Perm4((a, b, c, d))

    def step(tt, p):
        g = tri.gluing(tt, p[2])
        if g is None:
            return None
        u, q = g
        return u, q * p * _SWAP23

    ring = [(t, start)]
    cur = (t, start)
    while True:
        nxt = step(*cur)
        if nxt is None:
            break
        if nxt == ring[0]:
            return ring
        ring.append(nxt)
        cur = nxt
        if len(ring) > 6 * tri.size:
            raise ContractError("edge ring does not close; edge reversed?")
    # boundary edge: walk backwards from the start and prepend
    back = []
    cur = (t, start * _SWAP23)
    while True:
        nxt = step(*cur)
        if nxt is None:
            break
        back.append(nxt)
        cur = nxt
    return [(u, p * _SWAP23) for u, p in reversed(back)] + ring


_SWAP23 = Perm4((0, 1, 3, 2))


def edge_rings(tri):
    """Ring of embeddings for every edge class, oriented like the class."""
    sk = tri.skeleton()
    rings = []
    for i, emb in enumerate(sk.edges):
        t, e, s = emb[0]
        rings.append(edge_ring(tri, t, e))
    return rings


# ----------------------------------------------------------------------------
# serialization


def to_text(tri, loop=None):
    lines = [f"tri {tri.size}"]
    for t in range(tri.size):
        parts = []
        for f in range(4):
            g = tri.gluing(t, f)
            parts.append("-" if g is None else f"{g[0]}({g[1]})")
        lines.append(f"{t}: " + " ".join(parts))
    if loop is not None:
        lines.append("loop " + " ".join(f"{e}{'+' if s > 0 else '-'}" for e, s in loop))
    return "\n".join(lines) + "\n"


def from_text(text):
    """Parse the text form; returns ``(triangulation, loop steps or None)``."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("tri"):
        raise ParseError("expected a 'tri <count>' header")
    head = lines[0].split()
    if len(head) != 2 or not head[1].isdigit():
        raise ParseError(f"bad header {lines[0]!r}")
    n = int(head[1])
    if len(lines) < n + 1:
        raise ParseError(f"expected {n} tetrahedron lines, got {len(lines) - 1}")
    table = []
    for t in range(n):
        ln = lines[1 + t]
        label, _, rest = ln.partition(":")
        if label.strip() != str(t):
            raise ParseError(f"line {t + 2}: expected label {t}")
        toks = rest.split()
        if len(toks) != 4:
            raise ParseError(f"line {t + 2}: expected 4 faces")
        row = []
        for f, tok in enumerate(toks):
            if tok == "-":
                row.append(None)
                continue
            if not tok.endswith(")") or "(" not in tok:
                raise ParseError(f"line {t + 2}: bad face token {tok!r}")
            u, perm = tok[:-1].split("(")
            if not u.isdigit():
                raise ParseError(f"line {t + 2}: bad partner {u!r}")
            row.append((int(u), perm))
        table.append(row)
    tri = from_gluings(table)
    loop = None
    rest = lines[n + 1:]
    if rest:
        if len(rest) > 1 or not rest[0].startswith("loop"):
            raise ParseError(f"unexpected trailing content {rest[0]!r}")
        loop = []
        for tok in rest[0].split()[1:]:
            if len(tok) < 2 or tok[-1] not in "+-" or not tok[:-1].isdigit():
                raise ParseError(f"bad loop step {tok!r}")
            loop.append((int(tok[:-1]), 1 if tok[-1] == "+" else -1))
    return tri, loop


def to_json(tri, loop=None):
    doc = {
        "tetCount": tri.size,
        "gluings": [
            [None if g is None else [g[0], str(g[1])] for g in row] for row in tri.rows()
        ],
    }
    if loop is not None:
        doc["loop"] = [[e, s] for e, s in loop]
    return doc


def from_json(doc):
    try:
        n = doc["tetCount"]
        rows = doc["gluings"]
    except (KeyError, TypeError):
        raise ParseError("JSON triangulation needs 'tetCount' and 'gluings'") from None
    if len(rows) != n:
        raise ParseError("tetCount does not match the number of gluing rows")
    table = [[None if g is None else (g[0], g[1]) for g in row] for row in rows]
    tri = from_gluings(table)
    loop = doc.get("loop")
    if loop is not None:
        loop = [(int(e), int(s)) for e, s in loop]
    return tri, loop
