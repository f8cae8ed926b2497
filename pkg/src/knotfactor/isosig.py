"""Canonical isomorphism signatures for (edge-marked) triangulations.

For each component we try every root (tetrahedron, labelling), relabel by
breadth-first traversal and keep the lexicographically smallest code.  The
code records, face by face, the partner's new index and the gluing
permutation in new labels, followed by one mark bit per local edge.
"""
from .perm import ALL_PERMS, EDGE_NUMBER, EDGE_VERTICES
from .triangulation import components

_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+-"


def _root_code(tri, start, phi0, marked, best):
    """Code for one root, or None as soon as it exceeds ``best``."""
    order = [start]
    phis = {start: phi0}
    newidx = {start: 0}
    code = []
    append = code.append
    pos = 0
    cmp = 0 if best is not None else -1  # -1: already smaller, 0: equal so far

    def push(x):
        nonlocal pos, cmp
        if cmp == 0:
            b = best[pos]
            if x > b:
                return False
            if x < b:
                cmp = -1
        append(x)
        pos += 1
        return True

    k = 0
    while k < len(order):
        t = order[k]
        phi = phis[t]
        for f in range(4):
            g = tri.gluing(t, phi[f])
            if g is None:
                if not push(-1) or not push(0):
                    return None
                continue
            u, p = g
            if u not in newidx:
                newidx[u] = len(order)
                order.append(u)
                phis[u] = p * phi
            q = phis[u].inverse() * p * phi
            if not push(newidx[u]) or not push(q.index):
                return None
        k += 1
    if marked:
        for t in order:
            phi = phis[t]
            for a, b in EDGE_VERTICES:
                bit = 1 if marked(t, EDGE_NUMBER[(phi[a], phi[b])]) else 0
                if not push(bit):
                    return None
    return code


def _component_code(tri, comp, marked):
    best = None
    for s in comp:
        for phi in ALL_PERMS:
            c = _root_code(tri, s, phi, marked, best)
            if c is not None and (best is None or c < best):
                best = c
    return best


def _encode(n, code):
    width = 1
    while 64 ** width <= max(n + 1, 24):
        width += 1
    out = [_ALPHABET[min(width, 63)]]
    nn = n
    digits = []
    for _ in range(width):
        digits.append(_ALPHABET[nn % 64])
        nn //= 64
    out.extend(digits)
    for x in code:
        x += 1  # unglued partner is -1
        for _ in range(width):
            out.append(_ALPHABET[x % 64])
            x //= 64
    return "".join(out)


def iso_signature(tri, marks=None):
    """Canonical string: equal iff isomorphic by a mark-preserving relabelling."""
    sk = tri.skeleton()
    if marks:
        mset = set(marks)
        edge_of = sk.edge_of

        def marked(t, e):
            return edge_of[t][e] in mset
    else:
        marked = None
    codes = []
    for comp in components(tri):
        code = _component_code(tri, comp, marked)
        codes.append((len(comp), code))
    codes.sort()
    if not codes:
        return "~"
    return ".".join(_encode(n, c) for n, c in codes)
