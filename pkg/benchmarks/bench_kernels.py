"""Compare the compiled and pure-Python ``adjacent_pairs`` kernels.

Times quad vertex enumeration on diagram builds, once per backend, and checks
both backends return the same vertex set.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

from knotfactor import _kernels_py, normal
from knotfactor.diagram import build_edge_ideal, connected_sum, parse_pd
from knotfactor.edge_ideal import randomize, simplify

TREFOIL = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"
FIGURE8 = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"


def cases():
    t, f = parse_pd(TREFOIL), parse_pd(FIGURE8)
    for name, d in [("3_1", t), ("4_1", f), ("3_1#3_1", connected_sum(t, t)), ("3_1#4_1", connected_sum(t, f))]:
        E = simplify(build_edge_ideal(d))
        yield name, E.tri
    yield "3_1#3_1 r", randomize(simplify(build_edge_ideal(connected_sum(t, t))), 20, 1).tri
    yield "3_1 raw", build_edge_ideal(t).tri


def run(tri, kernel, repeat):
    saved = normal.adjacent_pairs
    normal.adjacent_pairs = kernel
    try:
        best, out = float("inf"), None
        for _ in range(repeat):
            t0 = time.perf_counter()
            out = normal.enumerate_quad_vertex(tri)
            best = min(best, time.perf_counter() - t0)
        return best, out
    finally:
        normal.adjacent_pairs = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        from knotfactor import _kernels as compiled
    except ImportError:
        compiled = None
        print("compiled kernels not built; timing the Python fallback only")
    print(f"{'case':<10} {'tets':>4} {'vertices':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, tri in cases():
        tp, vp = run(tri, _kernels_py.adjacent_pairs, args.repeat)
        if compiled is None:
            print(f"{name:<10} {tri.size:>4} {len(vp):>8} {tp:>10.4f}")
            continue
        tc, vc = run(tri, compiled.adjacent_pairs, args.repeat)
        if sorted(vp) != sorted(vc):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<10} {tri.size:>4} {len(vp):>8} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
