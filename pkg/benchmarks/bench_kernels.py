"""Time the numba kernels against the numpy fallback on a synthetic basemap.

    python3 benchmarks/bench_kernels.py [--nodes 250] [--repeat 5]

Each kernel runs once per backend to warm up (numba compiles on first call),
then the best of ``--repeat`` runs is reported.  Outputs of the two backends
are compared so a speedup never hides a divergence.  The layout column can
show a visible difference: force-directed updates amplify last-bit rounding
differences over many iterations, even though both kernels apply the same
update rule.
"""

import argparse
import math
import time

import numpy as np

from scidiv import kernels
from scidiv.basemap import CitationMatrix, build_basemap


def random_basemap(n, seed):
    rng = np.random.default_rng(seed)
    # sparse-ish citation counts so the thresholded map has a few edges per node
    counts = (rng.random((n, n)) < 0.02) * rng.integers(1, 50, size=(n, n))
    counts += np.eye(n, dtype=np.int64) * 60
    names = tuple(f"SC{i}" for i in range(n))
    cm = CitationMatrix(names, counts)
    return cm, build_basemap(cm, 0.15)


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=250)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    cm, bm = random_basemap(args.nodes, args.seed)
    indptr, indices, w = bm.csr()
    n = len(bm.nodes)
    rng = np.random.default_rng(args.seed)
    p = rng.dirichlet(np.ones(n))
    d = rng.random((n, n))
    d = d + d.T
    pos0 = rng.random((n, 2)) - 0.5
    src = np.array([bm.index[u] for u, _ in bm.edges], dtype=np.int64)
    dst = np.array([bm.index[v] for _, v in bm.edges], dtype=np.int64)
    sims = np.array(list(bm.edges.values()))
    x = cm.counts.astype(np.float64)

    cases = {
        "cosine_matrix": lambda b: kernels.cosine_matrix(x, backend=b),
        "weighted_apsp": lambda b: kernels.weighted_apsp(indptr, indices, w, backend=b),
        "hop_apsp": lambda b: kernels.hop_apsp(indptr, indices, backend=b),
        "stirling_sum": lambda b: kernels.stirling_sum(p, d, backend=b),
        "fr_layout": lambda b: kernels.fr_layout(pos0, src, dst, sims, 50, math.sqrt(1 / n), 0.1, backend=b),
    }

    print(f"basemap: {n} nodes, {bm.n_edges} edges; best of {args.repeat}")
    print(f"{'kernel':<15}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}  max |diff|")
    for name, fn in cases.items():
        t_nb, out_nb = best_of(lambda: fn("numba"), args.repeat)
        t_np, out_np = best_of(lambda: fn("numpy"), args.repeat)
        a, b = np.asarray(out_nb, dtype=float), np.asarray(out_np, dtype=float)
        finite = np.isfinite(a) & np.isfinite(b)
        diff = float(np.max(np.abs(a[finite] - b[finite]), initial=0.0))
        if not np.array_equal(np.isfinite(a), np.isfinite(b)):
            diff = math.inf
        print(f"{name:<15}{t_nb:>12.5f}{t_np:>12.5f}{t_np / t_nb:>10.2f}  {diff:.3g}")


if __name__ == "__main__":
    main()
