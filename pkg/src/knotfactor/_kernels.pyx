# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled version of ``_kernels_py.adjacent_pairs``.

Support masks are repacked into 63-bit words holding 21 tetrahedra each, so
the three quad bits of a tetrahedron never straddle a word boundary.
"""
from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

DEF CHUNK = 63
cdef uint64_t FULL = (<uint64_t>1 << CHUNK) - 1


cdef void _pack(object m, uint64_t* out, int words):
    cdef int w
    for w in range(words):
        out[w] = <uint64_t>((m >> (CHUNK * w)) & FULL)


def adjacent_pairs(pos, neg, masks, int max_support, quad_low=0):
    cdef Py_ssize_t nrays = len(masks)
    cdef int width = 1
    cdef object m
    for m in masks:
        if m.bit_length() > width:
            width = m.bit_length()
    if quad_low and quad_low.bit_length() > width:
        width = quad_low.bit_length()
    cdef int W = (width + CHUNK - 1) // CHUNK
    cdef uint64_t* M = <uint64_t*>malloc(nrays * W * sizeof(uint64_t))
    cdef uint64_t* L = <uint64_t*>malloc(W * sizeof(uint64_t))
    cdef uint64_t* U = <uint64_t*>malloc(W * sizeof(uint64_t))
    if M == NULL or L == NULL or U == NULL:
        free(M)
        free(L)
        free(U)
        raise MemoryError()
    cdef Py_ssize_t k, i, j, a, b
    cdef int w, bits
    cdef bint ok
    cdef uint64_t u, q
    out = []
    try:
        for k in range(nrays):
            _pack(masks[k], M + k * W, W)
        _pack(quad_low or 0, L, W)
        for a in range(len(pos)):
            i = pos[a]
            for b in range(len(neg)):
                j = neg[b]
                bits = 0
                for w in range(W):
                    U[w] = M[i * W + w] | M[j * W + w]
                    bits += __builtin_popcountll(U[w])
                if bits > max_support:
                    continue
                ok = True
                for w in range(W):
                    u = U[w]
                    q = (u & (u >> 1)) | (u & (u >> 2)) | ((u >> 1) & (u >> 2))
                    if q & L[w]:
                        ok = False
                        break
                if not ok:
                    continue
                for k in range(nrays):
                    if k == i or k == j:
                        continue
                    ok = False
                    for w in range(W):
                        if M[k * W + w] & ~U[w]:
                            ok = True
                            break
                    if not ok:
                        break
                if ok:
                    out.append((i, j))
    finally:
        free(M)
        free(L)
        free(U)
    return out
