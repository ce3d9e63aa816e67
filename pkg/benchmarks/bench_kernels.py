"""Benchmark the hot snapshot kernels: numba JIT versus the numpy fallback.

Run directly; the script re-executes itself once per backend via the
COORDGEO_NUMBA environment flag and prints a timing table.

    python benchmarks/bench_kernels.py [--cells N] [--repeats R]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def run_backend(cells, repeats):
    import numpy as np

    import coordgeo as cg
    from coordgeo import kernels

    catalog = cg.build_catalog()
    disc = cg.derive_discretizer(cg.collect_pool(catalog))
    frame = cg.make_lattice("fcc", cells, noise=0.004, seed=1)
    rcut = 0.85

    # warm-up (JIT compilation on the numba path)
    warm = cg.make_lattice("fcc", 2)
    nl = cg.neighbours_cutoff(warm, rcut)
    cg.per_particle_e(warm, nl, disc)
    cg.classify(warm, nl, catalog, disc)

    timings = {}
    t0 = time.perf_counter()
    for _ in range(repeats):
        nl = cg.neighbours_cutoff(frame, rcut)
    timings["neighbours"] = (time.perf_counter() - t0) / repeats

    t0 = time.perf_counter()
    for _ in range(repeats):
        e, kk, mm = cg.per_particle_e(frame, nl, disc)
    timings["profile"] = (time.perf_counter() - t0) / repeats

    t0 = time.perf_counter()
    for _ in range(repeats):
        labels, dists = cg.classify(frame, nl, catalog, disc)
    timings["classify"] = (time.perf_counter() - t0) / repeats

    frac = sum(1 for s in labels if s == "FCC") / frame.n
    return {
        "backend": "numba" if kernels.HAVE_NUMBA else "numpy",
        "n_particles": int(frame.n),
        "mean_e": float(np.nanmean(e)),
        "fcc_fraction": frac,
        "timings": timings,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cells", type=int, default=10,
                    help="conventional cells per axis (4 atoms per cell)")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.worker:
        print(json.dumps(run_backend(args.cells, args.repeats)))
        return

    results = []
    for flag in ("1", "0"):
        env = dict(os.environ, COORDGEO_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, __file__, "--worker", "--cells", str(args.cells),
             "--repeats", str(args.repeats)],
            capture_output=True, text=True, env=env, check=True)
        results.append(json.loads(proc.stdout.strip().splitlines()[-1]))

    numba, numpy_ = results
    print(f"N = {numba['n_particles']} particles, "
          f"{args.repeats} repeats, mean E = {numba['mean_e']:.3f}, "
          f"FCC fraction = {numba['fcc_fraction']:.3f}")
    print(f"{'kernel':<12} {'numba [s]':>12} {'numpy [s]':>12} {'speedup':>9}")
    for key in ("neighbours", "profile", "classify"):
        tn = numba["timings"][key]
        tp = numpy_["timings"][key]
        print(f"{key:<12} {tn:>12.4f} {tp:>12.4f} {tp / tn:>8.1f}x")


if __name__ == "__main__":
    main()
