"""Prime factorisation by repeatedly crushing quad vertex 2-spheres.

The worklist is a list of edge-ideal triangulations.  Items before the
cursor are finished; the item at the cursor is simplified and searched for
a crushable sphere.  A hit removes the item and appends the loop-carrying
pieces of the crush; a miss leaves the item in place and asks ``pi1``
whether its loop is knotted.

The certificate records every crush as a step on this list, plus one
terminal entry per finished item, so a verifier can rebuild the whole run
from the input alone.
"""
import json
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import List, Optional

from .crush import certify_quad_vertex, crush
from .diagram import Diagram, build_edge_ideal
from .edge_ideal import EdgeIdeal, randomize, replay, simplify, validate_loop
from .errors import ContractError, InternalError, KnotFactorError
from .homology import h1_unchecked
from .normal import NormalSurface, find_crushable_sphere, is_admissible, loop_weight
from .pi1 import (
    NONTRIVIAL,
    TRIVIAL,
    UNKNOWN,
    NontrivialityVerdict,
    complement_presentation,
    group_verdict,
    rep_signature,
    replay_tietze,
    verify_witness,
)

CERT_FORMAT = "knotfactor-certificate/1"


@dataclass
class Config:
    seed: int = 0
    enumerationBudget: Optional[int] = 200000
    randomizeHeat: int = 20
    repDegreeCap: int = 6
    unknownPolicy: str = "abort"
    outputFormat: str = "text"
    parallel: bool = False
    simplifyBudget: int = 200

    def __post_init__(self):
        if not 2 <= self.repDegreeCap <= 7:
            raise ContractError("repDegreeCap must lie in 2..7")
        if self.unknownPolicy not in ("abort", "flag"):
            raise ContractError("unknownPolicy must be 'abort' or 'flag'")
        if self.outputFormat not in ("text", "json"):
            raise ContractError("outputFormat must be 'text' or 'json'")


@dataclass
class Summand:
    edgeIdeal: EdgeIdeal
    signature: str
    nontriviality: NontrivialityVerdict
    flagged: bool = False

    def rep_signature(self, kmax=5):
        return rep_signature(self.nontriviality.presentation, kmax)


@dataclass
class FactorisationResult:
    summands: List[Summand]
    unknownCount: int = 0
    stats: dict = field(default_factory=dict)
    aborted: bool = False
    message: str = ""

    @property
    def count(self):
        return len(self.summands)


class UnknownVerdict(KnotFactorError):
    """Raised under the abort policy; carries the partial result."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


def state_signature(state):
    return "|".join(sorted(E.signature() for E in state))


def initial_edge_ideal(inp):
    if isinstance(inp, Diagram):
        return build_edge_ideal(inp)
    if isinstance(inp, EdgeIdeal):
        if not validate_loop(inp):
            raise ContractError("input loop is invalid")
        return inp
    raise ContractError(f"cannot factorize a {type(inp).__name__}")


def _search_job(E, budget, seed, heat):
    return find_crushable_sphere(E, budget=budget, seed=seed, heat=heat)


def _race(E, cfg):
    """Search the item and two randomized copies at once; first finisher wins."""
    starts = [(E, [])]
    for j in (1, 2):
        log = []
        starts.append((randomize(E, cfg.randomizeHeat, cfg.seed + 1000 * j, log), log))
    with ProcessPoolExecutor(max_workers=len(starts)) as pool:
        futs = {
            pool.submit(_search_job, F, cfg.enumerationBudget, cfg.seed, cfg.randomizeHeat): log
            for F, log in starts
        }
        done, pending = wait(futs, return_when=FIRST_COMPLETED)
        for f in pending:
            f.cancel()
        f = next(iter(done))
        res = f.result()
        res.moves = futs[f] + res.moves
        return res


def _sphere_entry(q):
    return [int(x) for x in q]


def factorize(inp, config=None):
    """Run the worklist; returns ``(FactorisationResult, certificate dict)``."""
    cfg = config or Config()
    t0 = time.perf_counter()
    E0 = initial_edge_ideal(inp)
    state = [E0]
    cursor = 0
    chain, terminal = [], []
    summands = []
    unknown = 0
    stats = {"crushes": 0, "enumerationRounds": 0, "droppedComponents": 0}
    cert = {"format": CERT_FORMAT, "initialSignature": state_signature(state), "chain": chain, "terminal": terminal}

    def finish(aborted=False, message=""):
        stats["wallTime"] = time.perf_counter() - t0
        cert["summandCount"] = sum(1 for t in terminal if t["verdict"] == NONTRIVIAL)
        return FactorisationResult(summands, unknown, stats, aborted, message)

    while cursor < len(state):
        item = state[cursor]
        before = state_signature(state)
        moves = []
        cur = simplify(item, budget=cfg.simplifyBudget, seed=cfg.seed, log=moves)
        if cfg.parallel:
            found = _race(cur, cfg)
        else:
            found = find_crushable_sphere(
                cur, budget=cfg.enumerationBudget, seed=cfg.seed, heat=cfg.randomizeHeat
            )
        stats["enumerationRounds"] += found.rounds
        moves += found.moves
        cur = found.edge_ideal
        if found:
            s = found.surface
            w = loop_weight(s, cur.loop)
            out = crush(cur, s)
            stats["crushes"] += 1
            for comp in out.components:
                if comp.idealContent != "LOOP" and h1_unchecked(comp.tri) != []:
                    raise InternalError("discarded crush component is not a homology sphere")
            stats["droppedComponents"] += out.droppedSphereComponents
            chain.append({
                "signatureBefore": before,
                "crushedComponent": cursor,
                "moves": [list(m) for m in moves],
                "sphere": _sphere_entry(s.quad),
                "loopWeight": w,
            })
            state = state[:cursor] + state[cursor + 1:] + out.loop_components()
            continue
        v = group_verdict(complement_presentation(cur), cfg.repDegreeCap)
        entry = {
            "component": cursor,
            "moves": [list(m) for m in moves],
            "verdict": v.verdict,
            "trace": [[g, list(r)] for g, r in v.trace],
        }
        if v.verdict == NONTRIVIAL:
            entry["witness"] = v.witness
            summands.append(Summand(cur, cur.signature(), v))
        elif v.verdict == UNKNOWN:
            unknown += 1
            if cfg.unknownPolicy == "abort":
                terminal.append(entry)
                res = finish(True, "nontriviality undecided for a summand; aborting")
                raise UnknownVerdict(res.message, (res, cert))
            summands.append(Summand(cur, cur.signature(), v, flagged=True))
        terminal.append(entry)
        cursor += 1
    return finish(), cert


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyResult:
    ok: bool
    failure: Optional[str] = None
    step: Optional[str] = None

    def __bool__(self):
        return self.ok


def _fail(step, why):
    return VerifyResult(False, why, step)


def verify_certificate(inp, cert):
    """Replay a certificate against the input; returns a ``VerifyResult``."""
    try:
        if cert.get("format") != CERT_FORMAT:
            return _fail("format", "unknown certificate format")
        state = [initial_edge_ideal(inp)]
    except (KnotFactorError, AttributeError) as exc:
        return _fail("input", str(exc))
    if state_signature(state) != cert.get("initialSignature"):
        return _fail("input", "rebuilt triangulation does not match the initial signature")
    for i, st in enumerate(cert.get("chain", [])):
        where = f"chain[{i}]"
        try:
            if state_signature(state) != st["signatureBefore"]:
                return _fail(where, "signature mismatch")
            p = int(st["crushedComponent"])
            if not 0 <= p < len(state):
                return _fail(where, "component index out of range")
            E = replay(state[p], [tuple(m) for m in st["moves"]])
            q = tuple(int(x) for x in st["sphere"])
            if len(q) != 3 * E.size or not is_admissible(q, E.tri):
                return _fail(where, "sphere vector is not admissible")
            s = NormalSurface.from_quad(E.tri, q)
            w = loop_weight(s, E.loop)
            if w not in (0, 2) or w != st["loopWeight"]:
                return _fail(where, "loop weight is not 0 or 2")
            if not certify_quad_vertex(E.tri, s):
                return _fail(where, "sphere is not certified as a quad vertex 2-sphere")
            out = crush(E, s)
        except (KnotFactorError, KeyError, TypeError, ValueError) as exc:
            return _fail(where, f"replay failed: {exc}")
        state = state[:p] + state[p + 1:] + out.loop_components()
    terms = cert.get("terminal", [])
    if sorted(t.get("component") for t in terms) != list(range(len(state))):
        return _fail("terminal", "terminal entries do not cover the final components")
    k = 0
    for j, t in enumerate(terms):
        where = f"terminal[{j}]"
        try:
            E = replay(state[t["component"]], [tuple(m) for m in t["moves"]])
            Q = replay_tietze(complement_presentation(E), [(g, tuple(r)) for g, r in t["trace"]])
        except (KnotFactorError, KeyError, TypeError, ValueError) as exc:
            return _fail(where, f"replay failed: {exc}")
        if t["verdict"] == TRIVIAL:
            if not Q.is_free_cyclic():
                return _fail(where, "trace does not reach the free group of rank one")
        elif t["verdict"] == NONTRIVIAL:
            if not verify_witness(Q, t.get("witness") or {}):
                return _fail(where, "nontriviality witness does not verify")
            k += 1
        else:
            return _fail(where, f"verdict {t['verdict']} cannot be certified")
    if k != cert.get("summandCount", -1):
        return _fail("terminal", "summand count does not match the verified witnesses")
    return VerifyResult(True)


def certificate_json(cert):
    return json.dumps(cert, indent=1, sort_keys=True)
