"""Permutations of {0, 1, 2, 3}.

A ``Perm4`` is an immutable tuple of images: ``p[i]`` is where ``i`` goes.
Composition follows function composition, ``(p * q)[i] == p[q[i]]``.
All 24 instances are interned, so identity comparison is cheap and
``p.index`` gives a stable position in lexicographic order.
"""
from itertools import permutations


class Perm4(tuple):
    __slots__ = ()

    def __new__(cls, *images):
        if len(images) == 1 and not isinstance(images[0], int):
            images = tuple(images[0])
        try:
            return _BY_IMAGES[images]
        except (KeyError, NameError):
            pass
        if sorted(images) != [0, 1, 2, 3]:
            raise ValueError(f"not a permutation of 0..3: {images!r}")
        return tuple.__new__(cls, images)

    @classmethod
    def from_string(cls, text):
        if len(text) != 4 or not text.isdigit():
            raise ValueError(f"bad permutation string {text!r}")
        return cls(tuple(int(c) for c in text))

    def __mul__(self, other):
        return _BY_IMAGES[(self[other[0]], self[other[1]], self[other[2]], self[other[3]])]

    def inverse(self):
        return _INVERSE[self]

    @property
    def index(self):
        return _INDEX[self]

    def sign(self):
        return _SIGN[self]

    def __str__(self):
        return "".join(map(str, self))

    def __repr__(self):
        return f"Perm4({str(self)})"

    def __reduce__(self):
        return (Perm4, (tuple(self),))


def _sign_of(images):
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if images[i] > images[j]:
                s = -s
    return s


_BY_IMAGES = {}
for _imgs in permutations(range(4)):
    _BY_IMAGES[_imgs] = tuple.__new__(Perm4, _imgs)
ALL_PERMS = [_BY_IMAGES[i] for i in sorted(_BY_IMAGES)]
_INDEX = {p: i for i, p in enumerate(ALL_PERMS)}
_SIGN = {p: _sign_of(p) for p in ALL_PERMS}
_INVERSE = {}
for _p in ALL_PERMS:
    _inv = [0] * 4
    for _i, _v in enumerate(_p):
        _inv[_v] = _i
    _INVERSE[_p] = _BY_IMAGES[tuple(_inv)]

IDENTITY = _BY_IMAGES[(0, 1, 2, 3)]


def transposition(a, b):
    images = [0, 1, 2, 3]
    images[a], images[b] = b, a
    return _BY_IMAGES[tuple(images)]


# Local edge numbering: edge i joins EDGE_VERTICES[i].
EDGE_VERTICES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_NUMBER = {}
for _e, (_a, _b) in enumerate(EDGE_VERTICES):
    EDGE_NUMBER[(_a, _b)] = _e
    EDGE_NUMBER[(_b, _a)] = _e


def face_vertices(f):
    """Vertices of face ``f`` (the face opposite vertex ``f``), ascending."""
    return tuple(v for v in range(4) if v != f)
