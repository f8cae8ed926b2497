"""Exhaustive generation of small closed triangulations, up to isomorphism."""
from .isosig import iso_signature
from .perm import ALL_PERMS, EDGE_NUMBER, EDGE_VERTICES, IDENTITY, Perm4
from .triangulation import Builder, components, validate


def _perms_sending(f, g):
    return [p for p in ALL_PERMS if p[f] == g]


_SWAP23 = Perm4((0, 1, 3, 2))


def _quick_valid(glue):
    """Cheap closed-manifold test: no reversed edge and Euler characteristic 0.

    With every edge link a circle, V - E + F - T equals the sum over vertices
    of 1 - chi(link)/2, so it vanishes exactly when every link is a sphere.
    """
    n = len(glue)
    seen = [[False] * 6 for _ in range(n)]
    edges = 0
    for t in range(n):
        for e in range(6):
            if seen[t][e]:
                continue
            edges += 1
            a, b = EDGE_VERTICES[e]
            c, d = (x for x in range(4) if x not in (a, b))
            p = Perm4((a, b, c, d))
            cur = t
            while True:
                seen[cur][EDGE_NUMBER[(p[0], p[1])]] = True
                u, g = glue[cur][p[2]]
                p = g * p * _SWAP23
                cur = u
                if seen[cur][EDGE_NUMBER[(p[0], p[1])]]:
                    if cur != t or (p[0], p[1]) != (a, b):
                        return False
                    break
    parent = list(range(4 * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in range(n):
        for f in range(4):
            u, g = glue[t][f]
            for v in range(4):
                if v != f:
                    ra, rb = find(4 * t + v), find(4 * u + g[v])
                    if ra != rb:
                        parent[ra] = rb
    verts = len({find(x) for x in range(4 * n)})
    return verts - edges + 2 * n - n == 0


_SENDING = {(f, g): _perms_sending(f, g) for f in range(4) for g in range(4)}


def closed_triangulations(n, valid_only=True):
    """All connected closed triangulations with exactly ``n`` tetrahedra.

    Each isomorphism class appears once, ordered by signature.  With
    ``valid_only`` only closed 3-manifold triangulations are kept.
    """
    found = {}
    b = Builder(1)

    def rec(used):
        # lowest unglued face among the tetrahedra introduced so far
        slot = None
        for t in range(used):
            row = b.glue[t]
            for f in range(4):
                if row[f] is None:
                    slot = (t, f)
                    break
            if slot:
                break
        if slot is None:
            if used == n:
                if valid_only and not _quick_valid(b.glue):
                    return
                tri = b.build()
                if valid_only and not validate(tri).isClosed3Manifold:
                    return
                if len(components(tri)) == 1:
                    found.setdefault(iso_signature(tri), tri)
            return
        t, f = slot
        if used < n:
            u = b.new_tet()
            b.join(t, f, u, IDENTITY)
            rec(used + 1)
            b.unjoin(t, f)
            b.glue.pop()
        for u in range(t, used):
            for g in range(4):
                if b.glue[u][g] is not None or (u == t and g == f):
                    continue
                for p in _SENDING[(f, g)]:
                    b.join(t, f, u, p)
                    rec(used)
                    b.unjoin(t, f)

    if n == 0:
        return []
    rec(1)
    return [found[k] for k in sorted(found)]
