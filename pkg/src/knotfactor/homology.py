"""Integer Smith normal form and first homology of triangulations."""
from .errors import ContractError
from .perm import EDGE_NUMBER, face_vertices
from .triangulation import validate


def smith_diagonal(matrix):
    """Nonzero diagonal entries of the Smith normal form, in divisibility order.

    ``matrix`` is a list of rows of Python ints; it is not modified.  Pivots
    are chosen by minimal absolute value, so intermediate entries stay small
    on the sparse boundary matrices seen here.
    """
    a = [list(r) for r in matrix if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    diag = []
    while a:
        # pick the entry of minimal nonzero absolute value
        best = None
        for i, row in enumerate(a):
            for j in range(ncols):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        a[0], a[pi] = a[pi], a[0]
        for row in a:
            row[0], row[pj] = row[pj], row[0]
        while True:
            p = a[0][0]
            dirty = False
            # clear column 0
            for i in range(1, len(a)):
                x = a[i][0]
                if x:
                    q = x // p
                    if q:
                        ri, r0 = a[i], a[0]
                        for j in range(ncols):
                            if r0[j]:
                                ri[j] -= q * r0[j]
                    if a[i][0]:
                        dirty = True
            # clear row 0
            r0 = a[0]
            for j in range(1, ncols):
                x = r0[j]
                if x:
                    q = x // p
                    if q:
                        for row in a:
                            if row[0]:
                                row[j] -= q * row[0]
                    if r0[j]:
                        dirty = True
            if not dirty:
                break
            # move a smaller remainder into the pivot position
            best = None
            for i in range(1, len(a)):
                x = a[i][0]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, 0)
            for j in range(1, ncols):
                x = a[0][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), 0, j)
            _, pi, pj = best
            if pi:
                a[0], a[pi] = a[pi], a[0]
            else:
                for row in a:
                    row[0], row[pj] = row[pj], row[0]
        p = abs(a[0][0])
        bad = next(
            (i for i in range(1, len(a)) if any(x % p for x in a[i][1:])),
            None,
        )
        if bad is not None:
            # fold the offending row into row 0 and clear again
            a[0] = [a[0][0]] + a[bad][1:]
            continue
        diag.append(p)
        ncols -= 1
        a = [r[1:] for r in a[1:] if any(r[1:])]
    diag.sort()
    return diag


def rank_and_torsion(matrix):
    d = smith_diagonal(matrix)
    return len(d), [x for x in d if x > 1]


def boundary_matrices(tri):
    """Cellular boundary maps (d1: edges -> vertices, d2: triangles -> edges).

    Returned as row lists: ``d1[e]`` is the boundary of edge class ``e`` in
    vertex coordinates and ``d2[f]`` of triangle class ``f`` in edge coordinates.
    """
    sk = tri.skeleton()
    nv, ne = len(sk.vertices), len(sk.edges)
    d1 = []
    for i in range(ne):
        row = [0] * nv
        a, b = sk.edge_endpoints(i)
        row[b] += 1
        row[a] -= 1
        d1.append(row)
    d2 = []
    for emb in sk.triangles:
        t, f, _ = emb[0]
        x, y, z = face_vertices(f)
        row = [0] * ne
        for (u, v), c in (((y, z), 1), ((x, z), -1), ((x, y), 1)):
            e = EDGE_NUMBER[(u, v)]
            row[sk.edge_of[t][e]] += c * sk.edge_sign[t][e]
        d2.append(row)
    return d1, d2


def h1_unchecked(tri):
    sk = tri.skeleton()
    ne = len(sk.edges)
    d1, d2 = boundary_matrices(tri)
    r1, _ = rank_and_torsion(d1)
    r2, torsion = rank_and_torsion(d2)
    free = ne - r1 - r2
    return torsion + [0] * free


def homology_h1(tri):
    """Invariant factors of H1; free rank appears as trailing zeros."""
    if not validate(tri).isClosed3Manifold:
        raise ContractError("homology_h1 requires a closed valid triangulation")
    return h1_unchecked(tri)


def abelian_invariants(relators, ngens):
    """Invariant factors of the abelianization of a finitely presented group."""
    rows = []
    for w in relators:
        row = [0] * ngens
        for g in w:
            row[abs(g) - 1] += 1 if g > 0 else -1
        rows.append(row)
    if ngens == 0:
        return []
    r, torsion = rank_and_torsion(rows) if rows else (0, [])
    return torsion + [0] * (ngens - r)
