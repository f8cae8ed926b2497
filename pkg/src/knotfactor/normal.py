"""Normal surfaces in quadrilateral coordinates.

Quad type ``k`` (stored at index ``k - 1``) separates the vertex pair
``{0, k}`` from the complementary pair.  Matching equations follow the
usual ring formulation: for every embedding ``(t, p)`` of an edge, the quad
``{p0, p2} | {p1, p3}`` contributes +1 and ``{p0, p3} | {p1, p2}`` contributes
-1.  All arithmetic is exact.
"""
from fractions import Fraction
from math import gcd

from .errors import BudgetExceeded, ContractError, InternalError, ParseError, ResourceError
from .kernels import adjacent_pairs
from .perm import EDGE_VERTICES
from .triangulation import edge_rings, from_text, to_text, validate

DISC_CAP = 10**7


def quad_sep(a, b):
    """Index (0..2) of the quad type separating vertices ``a, b`` from the other two."""
    if a == 0:
        return b - 1
    if b == 0:
        return a - 1
    return 5 - a - b


def _require_closed(tri):
    if not validate(tri).isClosed3Manifold:
        raise ContractError("expected a closed valid triangulation")


def quad_matching_matrix(tri):
    """One row per edge class, in edge index order; ``3 * size`` columns."""
    _require_closed(tri)
    ncols = 3 * tri.size
    rows = []
    for ring in edge_rings(tri):
        row = [0] * ncols
        for t, p in ring:
            row[3 * t + quad_sep(p[0], p[2])] += 1
            row[3 * t + quad_sep(p[0], p[3])] -= 1
        rows.append(row)
    return rows


def _quad_ok(q, n):
    for t in range(n):
        if sum(1 for x in q[3 * t:3 * t + 3] if x) > 1:
            return False
    return True


def is_admissible(q, tri):
    n = tri.size
    if len(q) != 3 * n:
        raise ContractError(f"quad vector has length {len(q)}, expected {3 * n}")
    if any(x < 0 for x in q):
        return False
    if not _quad_ok(q, n):
        return False
    return all(sum(a * b for a, b in zip(row, q)) == 0 for row in quad_matching_matrix(tri))


def _primitive(v):
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


class _Rank:
    """Incremental rank of a growing set of integer rows."""

    def __init__(self):
        self.pivots = {}

    def add(self, row):
        r = [Fraction(x) for x in row]
        for col, prow in self.pivots.items():
            if r[col]:
                c = r[col] / prow[col]
                r = [a - c * b for a, b in zip(r, prow)]
        for col, x in enumerate(r):
            if x:
                self.pivots[col] = r
                return True
        return False

    def __len__(self):
        return len(self.pivots)


def enumerate_quad_vertex(tri, visitor=None, budget=None, matrix=None):
    """Admissible extreme rays of the quad solution cone, primitive, sorted.

    Double description: start from the unit rays of the orthant, insert the
    matching equations in edge order, combine adjacent positive/negative
    pairs and discard any pair whose union of supports breaks the quad
    constraints.  ``visitor(q)`` may return True to stop the emission early.
    ``budget`` bounds the number of candidate pairs examined; exceeding it
    raises :class:`BudgetExceeded`.
    """
    rows = quad_matching_matrix(tri) if matrix is None else matrix
    n = tri.size
    if n == 0:
        return []
    dim = 3 * n
    rays = [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]
    masks = [1 << j for j in range(dim)]
    low = sum(1 << (3 * t) for t in range(n))
    rank = _Rank()
    work = 0
    for h in rows:
        if not any(h):
            continue
        nz = [(i, x) for i, x in enumerate(h) if x]
        vals = [sum(x * r[i] for i, x in nz) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        if not pos and not neg:
            rank.add(h)
            continue
        work += len(pos) * len(neg)
        if budget is not None and work > budget:
            raise BudgetExceeded(f"quad vertex enumeration exceeded {budget} pair tests")
        pairs = adjacent_pairs(pos, neg, masks, len(rank) + 2, low) if pos and neg else []
        new_rays, new_masks = [], []
        for k, v in enumerate(vals):
            if v == 0:
                new_rays.append(rays[k])
                new_masks.append(masks[k])
        for i, j in pairs:
            a, b = vals[i], -vals[j]
            ri, rj = rays[i], rays[j]
            c = _primitive([a * y + b * x for x, y in zip(ri, rj)])
            new_rays.append(c)
            new_masks.append(masks[i] | masks[j])
        rays, masks = new_rays, new_masks
        rank.add(h)
    out = sorted(_primitive(r) for r in rays)
    emitted = []
    for q in out:
        emitted.append(q)
        if visitor is not None and visitor(q):
            break
    return emitted


def quad_to_canonical_standard(q, tri):
    """Standard vector (7 per tet: triangles t0..t3, quads q1..q3) with no vertex links."""
    n = tri.size
    if len(q) != 3 * n or any(x < 0 for x in q) or not _quad_ok(q, n):
        raise ContractError("quad vector is not admissible")
    _require_closed(tri)
    sk = tri.skeleton()
    tri_coord = [[None] * 4 for _ in range(n)]
    for vclass in sk.vertices:
        t0, v0, _ = vclass[0]
        tri_coord[t0][v0] = 0
        stack = [(t0, v0)]
        while stack:
            t, v = stack.pop()
            base = tri_coord[t][v]
            for f in range(4):
                if f == v:
                    continue
                u, p = tri.gluing(t, f)
                w = p[v]
                val = base + q[3 * t + quad_sep(v, f)] - q[3 * u + quad_sep(w, p[f])]
                if tri_coord[u][w] is None:
                    tri_coord[u][w] = val
                    stack.append((u, w))
                elif tri_coord[u][w] != val:
                    raise ContractError("quad vector fails the matching equations")
        m = min(tri_coord[t][v] for t, v, _ in vclass)
        for t, v, _ in vclass:
            tri_coord[t][v] -= m
    out = []
    for t in range(n):
        out.extend(tri_coord[t])
        out.extend(q[3 * t:3 * t + 3])
    return tuple(out)


def standard_is_admissible(v, tri):
    """Nonnegative, satisfies the standard matching equations and the quad constraints."""
    n = tri.size
    if len(v) != 7 * n or any(x < 0 for x in v):
        return False
    if not _quad_ok([x for t in range(n) for x in v[7 * t + 4:7 * t + 7]], n):
        return False
    for t in range(n):
        for f in range(4):
            g = tri.gluing(t, f)
            if g is None:
                continue
            u, p = g
            for w in range(4):
                if w == f:
                    continue
                lhs = v[7 * t + w] + v[7 * t + 4 + quad_sep(w, f)]
                rhs = v[7 * u + p[w]] + v[7 * u + 4 + quad_sep(p[w], p[f])]
                if lhs != rhs:
                    return False
    return True


class NormalSurface:
    """A normal surface given by its standard vector (quad part cached)."""

    def __init__(self, tri, standard, quad=None):
        self.host = tri
        self.standard = tuple(standard)
        n = tri.size
        if quad is None:
            quad = tuple(x for t in range(n) for x in self.standard[7 * t + 4:7 * t + 7])
        self.quad = tuple(quad)
        self._geometry = None

    @classmethod
    def from_quad(cls, tri, q):
        return cls(tri, quad_to_canonical_standard(q, tri), q)

    def triangles(self, t, v):
        return self.standard[7 * t + v]

    def quad_type(self, t):
        """(type index, count) of the quad in tet ``t``, or (None, 0)."""
        for k in range(3):
            c = self.standard[7 * t + 4 + k]
            if c:
                return k, c
        return None, 0

    def has_quads(self):
        return any(self.quad)

    def edge_weight(self, e):
        sk = self.host.skeleton()
        t, le, _ = sk.edges[e][0]
        return self.local_edge_weight(t, le)

    def local_edge_weight(self, t, le):
        a, b = EDGE_VERTICES[le]
        w = self.standard[7 * t + a] + self.standard[7 * t + b]
        k, c = self.quad_type(t)
        if c and k != quad_sep(a, b):
            w += c
        return w

    def geometry(self):
        if self._geometry is None:
            self._geometry = surface_geometry(self)
        return self._geometry

    def euler_characteristic(self):
        return sum(self.geometry().chis)

    def is_connected(self):
        return len(self.geometry().chis) == 1

    def __repr__(self):
        return f"<NormalSurface quad={self.quad}>"


class Geometry:
    __slots__ = ("disc_component", "chis", "disc_index", "point_component")

    def __init__(self, disc_component, chis, disc_index, point_component):
        self.disc_component = disc_component
        self.chis = chis
        self.disc_index = disc_index
        self.point_component = point_component

    @property
    def connected(self):
        return len(self.chis) == 1

    @property
    def components(self):
        return len(self.chis)


def arc_position(s, t, f, corner, disc):
    """Position (0 = nearest the corner) of a disc's arc in face ``f`` of ``t``.

    ``disc`` is ``('t', v, i)`` for the i-th triangle at vertex v, or
    ``('q', j)`` for the j-th quad copy (copy 0 nearest the pair containing 0).
    """
    if disc[0] == "t":
        return disc[2]
    k, c = s.quad_type(t)
    j = disc[1]
    tv = s.standard[7 * t + corner]
    if corner == 0 or quad_sep(0, corner) == k:
        return tv + j
    return tv + (c - 1 - j)


class _DiscIndex:
    """Disc number of ``("t", corner, i)`` or ``("q", j)`` in tet t.

    A class rather than a closure so a ``Geometry`` survives pickling.
    """

    def __init__(self, std, base):
        self.std = std
        self.base = base

    def __call__(self, t, d):
        off, std = self.base[t], self.std
        if d[0] == "t":
            return off + sum(std[7 * t:7 * t + d[1]]) + d[2]
        return off + sum(std[7 * t:7 * t + 4]) + d[1]


def surface_geometry(s, cap=DISC_CAP):
    """Components and per-component Euler characteristic by explicit disc gluing."""
    tri = s.host
    n = tri.size
    sk = tri.skeleton()
    std = s.standard
    total = sum(std)
    if total > cap:
        raise ResourceError(f"surface has {total} discs, above the cap {cap}")
    # disc numbering
    base = []
    idx = 0
    for t in range(n):
        base.append(idx)
        idx += sum(std[7 * t:7 * t + 7])
    ndiscs = idx
    parent = list(range(ndiscs))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    disc_id = _DiscIndex(std, base)

    # discs at corner `corner` of face f of t, indexed by arc position
    def corner_arcs(t, f, corner):
        tv = std[7 * t + corner]
        k, c = s.quad_type(t)
        arcs = [("t", corner, i) for i in range(tv)]
        if c and k == quad_sep(corner, f):
            # the quad's arc in this face sits at this corner
            if corner == 0 or quad_sep(0, corner) == k:
                arcs += [("q", j) for j in range(c)]
            else:
                arcs += [("q", c - 1 - j) for j in range(c)]
        return arcs

    arcs_total = 0
    for t in range(n):
        for f in range(4):
            u, p = tri.gluing(t, f)
            if (u, p[f]) < (t, f):
                continue
            for corner in range(4):
                if corner == f:
                    continue
                mine = corner_arcs(t, f, corner)
                theirs = corner_arcs(u, p[f], p[corner])
                if len(mine) != len(theirs):
                    raise ContractError("vector fails the standard matching equations")
                arcs_total += len(mine)
                for a, b in zip(mine, theirs):
                    ra, rb = find(disc_id(t, a)), find(disc_id(u, b))
                    if ra != rb:
                        parent[ra] = rb

    # intersection points with edges, identified by (edge class, position)
    def edge_points(t):
        k, c = s.quad_type(t)
        for le, (a, b) in enumerate(EDGE_VERTICES):
            cls = sk.edge_of[t][le]
            sign = sk.edge_sign[t][le]
            ta, tb = std[7 * t + a], std[7 * t + b]
            qc = c if c and k != quad_sep(a, b) else 0
            w = ta + tb + qc
            seq = [("t", a, i) for i in range(ta)]
            if qc:
                if a == 0 or quad_sep(0, a) == k:
                    seq += [("q", j) for j in range(qc)]
                else:
                    seq += [("q", qc - 1 - j) for j in range(qc)]
            seq += [("t", b, tb - 1 - i) for i in range(tb)]
            for pos, d in enumerate(seq):
                gp = pos if sign > 0 else w - 1 - pos
                yield (cls, gp), d

    comp_of_root = {}
    disc_component = [0] * ndiscs
    for x in range(ndiscs):
        r = find(x)
        if r not in comp_of_root:
            comp_of_root[r] = len(comp_of_root)
        disc_component[x] = comp_of_root[r]
    ncomp = len(comp_of_root)
    discs = [0] * ncomp
    for x in range(ndiscs):
        discs[disc_component[x]] += 1
    arc_count = [0] * ncomp
    for t in range(n):
        for v in range(4):
            for i in range(std[7 * t + v]):
                arc_count[disc_component[disc_id(t, ("t", v, i))]] += 3
        k, c = s.quad_type(t)
        for j in range(c):
            arc_count[disc_component[disc_id(t, ("q", j))]] += 4
    point_component = {}
    for t in range(n):
        for key, d in edge_points(t):
            comp = disc_component[disc_id(t, d)]
            prev = point_component.setdefault(key, comp)
            if prev != comp:
                raise ContractError("inconsistent disc gluing around an edge")
    points = [0] * ncomp
    for comp in point_component.values():
        points[comp] += 1
    chis = tuple(points[i] - arc_count[i] // 2 + discs[i] for i in range(ncomp))
    return Geometry(disc_component, chis, disc_id, point_component)


def loop_weight(s, loop_steps):
    return sum(s.edge_weight(e) for e, _ in loop_steps)


def edge_weight(s, e):
    return s.edge_weight(e)


class SphereSearch:
    """Result of ``find_crushable_sphere``.

    ``edge_ideal`` is the triangulation the surface lives in, reached from the
    input by the logged ``moves`` (empty unless a retry randomized it).
    ``surface`` is None when a completed enumeration found no sphere.
    """

    def __init__(self, edge_ideal, surface, moves, rounds):
        self.edge_ideal = edge_ideal
        self.surface = surface
        self.moves = moves
        self.rounds = rounds

    def __bool__(self):
        return self.surface is not None


def crushable_spheres(tri, loop, visitor=None, budget=None):
    """Connected quad vertex 2-spheres meeting ``loop`` 0 or 2 times, in emission order."""
    out = []

    def visit(q):
        s = NormalSurface.from_quad(tri, q)
        g = s.geometry()
        if g.connected and g.chis[0] == 2 and loop_weight(s, loop) in (0, 2):
            out.append(s)
            return visitor is not None and visitor(s)
        return False

    enumerate_quad_vertex(tri, visitor=visit, budget=budget)
    return out


def find_crushable_sphere(E, budget=None, seed=0, heat=20, rounds=8):
    """First crushable sphere of ``E``, retrying on randomized copies if the budget runs out.

    Round r enumerates with ``budget * 2**r`` pair tests, alternating between
    the input and a fresh randomization of it; the last round has no budget,
    so a negative answer always comes from a completed enumeration.
    """
    from .edge_ideal import randomize

    for r in range(rounds):
        cap = None if budget is None or r == rounds - 1 else budget * 2**r
        moves = []
        cur = E
        if r % 2 == 1:
            cur = randomize(E, heat=heat, seed=seed + r, log=moves)
        try:
            hits = crushable_spheres(cur.tri, cur.loop, visitor=lambda s: True, budget=cap)
        except BudgetExceeded:
            continue
        return SphereSearch(cur, hits[0] if hits else None, moves, r + 1)
    raise InternalError("unreachable: the final round runs without a budget")


# ---------------------------------------------------------------------------
# serialization: a ``surf`` line after the triangulation record


def surface_line(q):
    return "surf " + " ".join(str(int(x)) for x in q)


def to_record(tri, loop=None, quad=None):
    """Triangulation text, plus a ``surf`` line when ``quad`` is given."""
    text = to_text(tri, loop)
    return text if quad is None else text + surface_line(quad) + "\n"


def from_record(text):
    """Inverse of ``to_record``: ``(tri, loop or None, quad or None)``."""
    body, quad = [], None
    for ln in text.strip().splitlines():
        if ln.strip().startswith("surf"):
            if quad is not None:
                raise ParseError("more than one surf line")
            toks = ln.split()[1:]
            if not all(t.isdigit() for t in toks):
                raise ParseError(f"bad surf entries {ln.strip()!r}")
            quad = tuple(int(t) for t in toks)
        else:
            body.append(ln)
    tri, loop = from_text("\n".join(body))
    if quad is not None and len(quad) != 3 * tri.size:
        raise ParseError(f"surf line has {len(quad)} entries, expected {3 * tri.size}")
    return tri, loop, quad
