"""Command-line driver: ``knotfactor factor|verify|info|build``.

Exit codes: 0 success, 1 bad input (or a rejected certificate), 2 when a
summand's nontriviality is undecided under ``--unknown=abort``.
"""
import argparse
import json
import os
import sys

from .diagram import build_edge_ideal, parse_dt, parse_pd
from .edge_ideal import EdgeIdeal, make_edge_ideal, simplify
from .errors import KnotFactorError
from .factorize import Config, UnknownVerdict, certificate_json, factorize, verify_certificate
from .homology import h1_unchecked
from .triangulation import from_json, from_text, to_text, validate

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2


class InputError(Exception):
    pass


def _read(arg):
    """Treat ``arg`` as a path if one exists, else as inline text."""
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def detect_format(text):
    s = text.lstrip()
    if s.startswith("tri"):
        return "tri"
    if s.startswith("{"):
        return "json"
    if s.startswith("X[") or s.startswith("PD"):
        return "pd"
    if not s or s[0].isdigit() or s[0] in "-[":
        return "dt"
    raise InputError(f"cannot tell the input format from {s[:20]!r}; pass --format")


def load_input(arg, fmt=None):
    """Return a ``Diagram`` or an ``EdgeIdeal`` parsed from a path or inline code."""
    text = _read(arg)
    fmt = fmt or detect_format(text)
    try:
        if fmt == "pd":
            return parse_pd(text.strip().removeprefix("PD"))
        if fmt == "dt":
            return parse_dt(text)
        if fmt == "json":
            tri, loop = from_json(json.loads(text))
        else:
            tri, loop = from_text(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON: {exc}") from None
    except KnotFactorError as exc:
        raise InputError(str(exc)) from None
    if loop is None:
        return tri
    try:
        return make_edge_ideal(tri, loop)
    except KnotFactorError as exc:
        raise InputError(str(exc)) from None


def _witness_summary(v):
    w = v.witness
    if not w:
        return v.verdict
    if w["type"] == "count":
        return f"{v.verdict} ({w['count']} transitive reps into S{w['k']})"
    return f"{v.verdict} (stabilizer of a degree {w['k']} rep has H1 {w['factors']})"


def _report(res, cert_path):
    return {
        "summandCount": res.count,
        "unknownCount": res.unknownCount,
        "aborted": res.aborted,
        "message": res.message,
        "certificate": cert_path,
        "stats": res.stats,
        "summands": [
            {
                "signature": s.signature,
                "tetCount": s.edgeIdeal.size,
                "verdict": s.nontriviality.verdict,
                "flagged": s.flagged,
                "witness": s.nontriviality.witness,
            }
            for s in res.summands
        ],
    }


def cmd_factor(args):
    inp = load_input(args.input, args.format)
    if not isinstance(inp, EdgeIdeal) and not hasattr(inp, "crossings"):
        raise InputError("factor needs a diagram or a triangulation with a loop line")
    cfg = Config(
        seed=args.seed,
        enumerationBudget=args.budget,
        randomizeHeat=args.heat,
        repDegreeCap=args.rep_cap,
        unknownPolicy=args.unknown,
        outputFormat="json" if args.json else "text",
        parallel=args.parallel,
    )
    code = EXIT_OK
    try:
        res, cert = factorize(inp, cfg)
    except UnknownVerdict as exc:
        res, cert = exc.partial
        code = EXIT_UNKNOWN
    if args.emit_cert:
        with open(args.emit_cert, "w") as fh:
            fh.write(certificate_json(cert))
    if args.json:
        print(json.dumps(_report(res, args.emit_cert), indent=1))
    else:
        n = res.count
        print(f"{n} prime summand{'' if n == 1 else 's'}")
        for i, s in enumerate(res.summands, 1):
            flag = " [flagged]" if s.flagged else ""
            tets = f"{s.edgeIdeal.size} tet{'' if s.edgeIdeal.size == 1 else 's'}"
            print(f"  {i}: {s.signature}  {tets}  {_witness_summary(s.nontriviality)}{flag}")
        if res.aborted:
            print(f"aborted: {res.message}")
        if args.emit_cert:
            print(f"certificate written to {args.emit_cert}")
    return code


def cmd_verify(args):
    try:
        with open(args.cert) as fh:
            cert = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read certificate: {exc}") from None
    inp = load_input(args.input, args.format)
    res = verify_certificate(inp, cert)
    if res:
        print("certificate verified")
        return EXIT_OK
    print(f"certificate rejected at {res.step}: {res.failure}")
    return EXIT_INPUT


def cmd_info(args):
    inp = load_input(args.input, args.format)
    if hasattr(inp, "crossings"):
        inp = build_edge_ideal(inp)
    E = inp if isinstance(inp, EdgeIdeal) else None
    tri = E.tri if E else inp
    rep = validate(tri)
    sk = tri.skeleton()
    h1 = h1_unchecked(tri) if rep.isClosed else None
    h1_text = "H1 trivial" if h1 == [] else f"H1 {h1}" if h1 is not None else "H1 n/a"
    tets = f"{tri.size} tet{'' if tri.size == 1 else 's'}"
    print(f"{tets}, {'valid' if rep.isClosed3Manifold else 'invalid'}, {h1_text}")
    print(f"vertices {len(sk.vertices)}  edges {len(sk.edges)}  triangles {len(sk.triangles)}")
    if not rep.isClosed3Manifold:
        print(f"closed {rep.isClosed}  reversed edges {rep.reversedEdges}  links {rep.vertexLinkChecks}")
    if E:
        print(f"loop length {E.loop_length}")
        print(f"signature {E.signature()}")
    return EXIT_OK if rep.isClosed3Manifold else EXIT_INPUT


def cmd_build(args):
    inp = load_input(args.input, args.format)
    if not hasattr(inp, "crossings"):
        raise InputError("build needs a PD or DT code")
    E = build_edge_ideal(inp)
    if args.simplify:
        E = simplify(E, seed=args.seed)
    sys.stdout.write(to_text(E.tri, E.loop))
    return EXIT_OK


def parser():
    ap = argparse.ArgumentParser(prog="knotfactor", description="Prime factorisation of knots.")
    sub = ap.add_subparsers(dest="command", required=True)
    fmt = dict(choices=["pd", "dt", "tri", "json"], default=None, help="input format (default: auto)")

    f = sub.add_parser("factor", help="factorise a knot")
    f.add_argument("input", help="path, inline PD/DT code, or - for stdin")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--budget", type=int, default=200000, help="enumeration steps before randomizing")
    f.add_argument("--heat", type=int, default=20, help="random 2-3 moves per randomization")
    f.add_argument("--rep-cap", type=int, default=6, help="largest symmetric group degree tried")
    f.add_argument("--unknown", choices=["abort", "flag"], default="abort")
    f.add_argument("--emit-cert", metavar="PATH")
    f.add_argument("--format", **fmt)
    f.add_argument("--json", action="store_true")
    f.add_argument("--parallel", action="store_true")
    f.set_defaults(run=cmd_factor)

    v = sub.add_parser("verify", help="check a certificate against its input")
    v.add_argument("cert")
    v.add_argument("input")
    v.add_argument("--format", **fmt)
    v.set_defaults(run=cmd_verify)

    i = sub.add_parser("info", help="describe a triangulation or diagram")
    i.add_argument("input")
    i.add_argument("--format", **fmt)
    i.set_defaults(run=cmd_info)

    b = sub.add_parser("build", help="print the edge-ideal triangulation of a diagram")
    b.add_argument("input")
    b.add_argument("--simplify", action="store_true")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--format", **fmt)
    b.set_defaults(run=cmd_build)
    return ap


def main(argv=None):
    args = parser().parse_args(argv)
    try:
        return args.run(args)
    except (InputError, KnotFactorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
