"""Pure-Python versions of the hot loops.  See ``kernels`` for selection."""


def popcount(x):
    return bin(x).count("1")


def adjacent_pairs(pos, neg, masks, max_support, quad_low=0):
    """Pairs ``(i, j)`` (``i`` in ``pos``, ``j`` in ``neg``) passing the combinatorial test.

    ``masks[k]`` is the support bitmask of ray ``k``.  A pair is kept when the
    union of supports has at most ``max_support`` bits, respects the quad
    constraints (no two of the three bits of one tetrahedron set, with
    ``quad_low`` marking the lowest bit of each tetrahedron), and no other ray
    has support inside that union.
    """
    out = []
    nrays = len(masks)
    low = quad_low
    for i in pos:
        mi = masks[i]
        for j in neg:
            u = mi | masks[j]
            if popcount(u) > max_support:
                continue
            if low:
                a = u & (u >> 1)
                b = u & (u >> 2)
                c = (u >> 1) & (u >> 2)
                if (a | b | c) & low:
                    continue
            notu = ~u
            ok = True
            for k in range(nrays):
                if k != i and k != j and not (masks[k] & notu):
                    ok = False
                    break
            if ok:
                out.append((i, j))
    return out

