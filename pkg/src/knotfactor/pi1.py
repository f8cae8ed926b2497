"""Knot groups from edge-ideal triangulations, and verdicts on knottedness.

Words are tuples of nonzero integers: ``g + 1`` is generator g and
``-(g + 1)`` its inverse.  Permutation representations are tuples of
images, one permutation of ``range(k)`` per generator, acting on the right:
the image of point x under the word ``a b`` is ``b[a[x]]``.
"""
from dataclasses import dataclass, field
from math import factorial
from typing import List, Optional, Tuple

from .edge_ideal import insert_snapped_ball, pinch_loop
from .errors import ContractError, InternalError
from .homology import abelian_invariants
from .triangulation import edge_rings

TRIVIAL, NONTRIVIAL, UNKNOWN = "TRIVIAL", "NONTRIVIAL", "UNKNOWN"


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    w = list(free_reduce(word))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def inverse(word):
    return tuple(-x for x in reversed(word))


def _canonical(word):
    """Smallest rotation of the word or its inverse, for duplicate detection."""
    best = None
    for w in (word, inverse(word)):
        for i in range(len(w)):
            r = w[i:] + w[:i]
            if best is None or r < best:
                best = r
    return best


@dataclass(frozen=True)
class Presentation:
    generatorCount: int
    relators: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for w in self.relators:
            for x in w:
                if x == 0 or abs(x) > self.generatorCount:
                    raise ContractError(f"letter {x} out of range")

    @classmethod
    def make(cls, ngens, relators):
        """Free and cyclic reduction, dropping empty and repeated relators."""
        seen = set()
        rels = []
        for w in relators:
            w = cyclic_reduce(w)
            if not w:
                continue
            key = _canonical(w)
            if key in seen:
                continue
            seen.add(key)
            rels.append(w)
        return cls(ngens, tuple(rels))

    def abelianization(self):
        return abelian_invariants(self.relators, self.generatorCount)

    def is_free_cyclic(self):
        return self.generatorCount == 1 and not self.relators

    def to_json(self):
        return {"generators": self.generatorCount, "relators": [list(w) for w in self.relators]}

    @classmethod
    def from_json(cls, doc):
        return cls(int(doc["generators"]), tuple(tuple(int(x) for x in w) for w in doc["relators"]))


# ---------------------------------------------------------------------------
# presentations from triangulations


def dual_presentation(tri, skip_edges=()):
    """pi1 of the complement of the vertices and of the edges in ``skip_edges``.

    Generators are the triangle classes off a spanning tree of the dual
    graph; each remaining edge class gives the relator read around its ring.
    """
    sk = tri.skeleton()
    n = tri.size
    in_tree = set()
    reached = {0} if n else set()
    queue = [0] if n else []
    while queue:
        t = queue.pop(0)
        for f in range(4):
            u, p = tri.gluing(t, f)
            if u not in reached:
                reached.add(u)
                in_tree.add(sk.triangle_of[t][f])
                queue.append(u)
    gen_of = {}
    for i in range(len(sk.triangles)):
        if i not in in_tree:
            gen_of[i] = len(gen_of) + 1
    skip = set(skip_edges)
    rels = []
    for e, ring in enumerate(edge_rings(tri)):
        if e in skip:
            continue
        w = []
        for t, p in ring:
            f = p[2]
            i = sk.triangle_of[t][f]
            if i in gen_of:
                w.append(gen_of[i] * sk.triangle_sign[t][f])
        rels.append(w)
    return Presentation.make(len(gen_of), rels)


def _check_knot_group(P):
    if P.abelianization() != [0]:
        raise InternalError("not a knot exterior: abelianization is %r" % (P.abelianization(),))
    return P


def shorten_loop(E):
    """Snap loop edges until the loop has length 1."""
    while E.loop_length > 1:
        e = E.loop[0][0]
        out = insert_snapped_ball(E, e, 0)
        if not out:
            raise InternalError("snapped ball refused on a loop edge")
        E = out
    return E


def complement_presentation(E):
    """Knot group via the pinched triangulation (loop shortened, then pinched)."""
    tri, _ = pinch_loop(shorten_loop(E))
    return _check_knot_group(dual_presentation(tri))


def drilled_presentation(E):
    """Knot group read off directly, with the dual cells of loop edges removed."""
    return _check_knot_group(dual_presentation(E.tri, E.loop_edges()))


# ---------------------------------------------------------------------------
# Tietze moves


def _substitute(word, g, repl):
    out = []
    for x in word:
        if x == g:
            out.extend(repl)
        elif x == -g:
            out.extend(inverse(repl))
        else:
            out.append(x)
    return tuple(out)


def _eliminate(P, rel_index, g):
    """Remove generator ``g`` (1-based) using relator ``rel_index`` where it occurs once."""
    r = P.relators[rel_index]
    i = next(j for j, x in enumerate(r) if abs(x) == g)
    rot = r[i:] + r[:i]
    # rot = g^s w  ==>  g = w^-s
    rest = rot[1:]
    repl = inverse(rest) if rot[0] > 0 else rest
    rels = []
    for j, w in enumerate(P.relators):
        if j != rel_index:
            rels.append(_substitute(w, g, repl))

    def shift(x):
        a = abs(x)
        return x if a < g else (x - 1 if x > 0 else x + 1)

    rels = [tuple(shift(x) for x in w) for w in rels]
    return Presentation.make(P.generatorCount - 1, rels)


def _once(word, g):
    return sum(1 for x in word if abs(x) == g) == 1


def tietze_simplify(P, budget=200, max_length=400):
    """Eliminate generators through relators in which they occur exactly once.

    Short relators go first.  Returns ``(presentation, trace)``; each trace
    entry is ``(generator, relator)`` with the relator given verbatim, so
    ``replay_tietze`` can redo every step.
    """
    P = Presentation.make(P.generatorCount, P.relators)
    trace = []
    for _ in range(budget):
        best = None
        for j, r in enumerate(P.relators):
            for x in r:
                g = abs(x)
                if not _once(r, g):
                    continue
                occ = sum(1 for w in P.relators for y in w if abs(y) == g)
                cost = (len(r), (occ - 1) * (len(r) - 1), g, j)
                if best is None or cost < best[0]:
                    best = (cost, j, g)
        if best is None:
            break
        _, j, g = best
        new = _eliminate(P, j, g)
        if sum(len(w) for w in new.relators) > max_length:
            break
        trace.append((g, P.relators[j]))
        P = new
    return P, trace


def replay_tietze(P, trace):
    """Redo a Tietze trace, checking every step; returns the final presentation."""
    P = Presentation.make(P.generatorCount, P.relators)
    for g, rel in trace:
        rel = tuple(rel)
        try:
            j = P.relators.index(rel)
        except ValueError:
            raise ContractError(f"trace relator {rel} not present") from None
        if not _once(rel, g):
            raise ContractError(f"generator {g} does not occur once in {rel}")
        P = _eliminate(P, j, g)
    return P


# ---------------------------------------------------------------------------
# permutation representations


def _word_image(rep, word, x, k):
    for y in word:
        x = rep[y - 1][x] if y > 0 else rep[-y - 1].index(x)
    return x


def is_representation(P, rep, k):
    if len(rep) != P.generatorCount:
        return False
    for p in rep:
        if sorted(p) != list(range(k)):
            return False
    return all(_word_image(rep, w, x, k) == x for w in P.relators for x in range(k))


def is_transitive(rep, k):
    seen = {0}
    todo = [0]
    while todo:
        x = todo.pop()
        for p in rep:
            for y in (p[x], p.index(x)):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
    return len(seen) == k


class _Table:
    """Partial action of the generators on ``range(k)``: fwd[g][x], bwd[g][x]."""

    def __init__(self, ngens, k):
        self.k = k
        self.fwd = [[None] * k for _ in range(ngens)]
        self.bwd = [[None] * k for _ in range(ngens)]

    def copy(self):
        t = _Table.__new__(_Table)
        t.k = self.k
        t.fwd = [row[:] for row in self.fwd]
        t.bwd = [row[:] for row in self.bwd]
        return t

    def act(self, x, y):
        if y > 0:
            return self.fwd[y - 1][x]
        return self.bwd[-y - 1][x]

    def define(self, x, y, z):
        """Set x . y = z; False on a clash."""
        if y < 0:
            x, y, z = z, -y, x
        g = y - 1
        a, b = self.fwd[g][x], self.bwd[g][z]
        if a is not None or b is not None:
            return a == z and b == x
        self.fwd[g][x] = z
        self.bwd[g][z] = x
        return True


def _scan(tab, relators):
    """Scan every relator at every point, making forced deductions.

    Returns False when a relator cannot close.
    """
    changed = True
    while changed:
        changed = False
        for r in relators:
            n = len(r)
            for x0 in range(tab.k):
                x, i = x0, 0
                while i < n:
                    y = tab.act(x, r[i])
                    if y is None:
                        break
                    x, i = y, i + 1
                if i == n:
                    if x != x0:
                        return False
                    continue
                z, j = x0, n
                while j > i:
                    y = tab.act(z, -r[j - 1])
                    if y is None:
                        break
                    z, j = y, j - 1
                if j == i:
                    if x != z:
                        return False
                elif j == i + 1:
                    if not tab.define(x, r[i], z):
                        return False
                    changed = True
    return True


def _first_gap(tab, used):
    for x in range(used):
        for g in range(len(tab.fwd)):
            if tab.fwd[g][x] is None:
                return x, g + 1
            if tab.bwd[g][x] is None:
                return x, -(g + 1)
    return None


def transitive_tables(P, k):
    """One transitive action per index-k subgroup, points numbered in order of discovery.

    Standard low-index enumeration: the first undefined entry is filled with
    an existing point or with the next unused one, after which every relator
    is scanned at every point.
    """
    if P.generatorCount == 0:
        if k == 1:
            yield ()
        return
    tab = _Table(P.generatorCount, k)
    rels = P.relators
    stack = [(tab, 1)]
    while stack:
        tab, used = stack.pop()
        gap = _first_gap(tab, used)
        if gap is None:
            if used == k:
                yield tuple(tuple(row) for row in tab.fwd)
            continue
        x, y = gap
        choices = list(range(used)) + ([used] if used < k else [])
        for z in reversed(choices):
            t2 = tab.copy()
            if not t2.define(x, y, z):
                continue
            if not _scan(t2, rels):
                continue
            stack.append((t2, max(used, z + 1)))


def count_transitive_reps(P, k):
    """Number of homomorphisms onto a transitive subgroup of the symmetric group on k points.

    Every index-k subgroup gives (k-1)! such homomorphisms, one per labelling
    of the cosets that keeps the subgroup at point 0.
    """
    if not 1 <= k <= 7:
        raise ContractError("k must lie in 1..7")
    return factorial(k - 1) * sum(1 for _ in transitive_tables(P, k))


def _schreier(P, rep, point):
    """Reidemeister-Schreier presentation of the stabiliser of ``point``."""
    k = len(rep[0]) if rep else 1
    ngens = P.generatorCount
    # spanning tree of the Schreier graph, breadth first from point
    tree = {}
    order = [point]
    seen = {point}
    for x in order:
        for g in range(ngens):
            y = rep[g][x]
            if y not in seen:
                seen.add(y)
                order.append(y)
                tree[(x, g)] = True
    if len(seen) != k:
        raise ContractError("representation is not transitive")
    gen_index = {}
    for x in range(k):
        for g in range(ngens):
            if (x, g) not in tree:
                gen_index[(x, g)] = len(gen_index) + 1
    rels = []
    for r in P.relators:
        for x0 in range(k):
            w = []
            x = x0
            for y in r:
                if y > 0:
                    g = y - 1
                    if (x, g) in gen_index:
                        w.append(gen_index[(x, g)])
                    x = rep[g][x]
                else:
                    g = -y - 1
                    x = rep[g].index(x)
                    if (x, g) in gen_index:
                        w.append(-gen_index[(x, g)])
            rels.append(w)
    return Presentation.make(len(gen_index), rels)


def stabilizer_abelianization(P, rep, point=0):
    """Invariant factors of the abelianised stabiliser of ``point``."""
    return _schreier(P, rep, point).abelianization()


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class NontrivialityVerdict:
    verdict: str
    witness: Optional[dict] = None
    presentation: Optional[Presentation] = None
    trace: List = field(default_factory=list)


def verify_witness(P, witness):
    """Re-check a NONTRIVIAL witness against presentation ``P``."""
    try:
        kind = witness["type"]
        k = int(witness["k"])
        if kind == "count":
            c = count_transitive_reps(P, k)
            return c == witness["count"] and c != factorial(k - 1)
        if kind == "stabilizer":
            rep = tuple(tuple(int(v) for v in p) for p in witness["rep"])
            if not is_representation(P, rep, k) or not is_transitive(rep, k):
                return False
            f = stabilizer_abelianization(P, rep, int(witness["point"]))
            return f == list(witness["factors"]) and f != [0]
    except (KeyError, TypeError, ValueError, IndexError, ContractError):
        return False
    return False


def group_verdict(P, rep_cap=6, tietze_budget=200):
    """TRIVIAL, NONTRIVIAL or UNKNOWN for a group with abelianization Z."""
    Q, trace = tietze_simplify(P, tietze_budget)
    if Q.is_free_cyclic():
        return NontrivialityVerdict(TRIVIAL, None, Q, trace)
    for k in range(2, rep_cap + 1):
        tables = list(transitive_tables(Q, k))
        count = factorial(k - 1) * len(tables)
        if count != factorial(k - 1):
            return NontrivialityVerdict(
                NONTRIVIAL, {"type": "count", "k": k, "count": count}, Q, trace
            )
        for rep in tables:
            f = stabilizer_abelianization(Q, rep, 0)
            if f != [0]:
                w = {"type": "stabilizer", "k": k, "rep": [list(p) for p in rep], "point": 0, "factors": f}
                return NontrivialityVerdict(NONTRIVIAL, w, Q, trace)
    return NontrivialityVerdict(UNKNOWN, None, Q, trace)


def rep_signature(P, kmax=5):
    """Transitive representation counts for k = 2..kmax."""
    return tuple(count_transitive_reps(P, k) for k in range(2, kmax + 1))


def nontriviality_verdict(E, rep_cap=6, tietze_budget=200):
    """Decide whether the ideal loop of ``E`` is knotted, with a witness."""
    return group_verdict(complement_presentation(E), rep_cap, tietze_budget)
