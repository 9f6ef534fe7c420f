#!/usr/bin/env python3
"""Benchmark the numba-compiled hot kernels against the pure-Python/numpy
fallback (MATCHLIM_NO_NUMBA=1).

Runs each workload in two subprocesses (one per backend) so the accelerator
choice is fixed at import time, checks that both backends produce identical
results, and prints a timing table.

Usage: python scripts/benchmark_kernels.py [--quick]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
import matchlim as ml
from matchlim.pathtree import build_path_tree, solve_rep_z
from matchlim import RootedGraph

quick = json.loads(sys.argv[1])
scale = 4 if quick else 1
results = {}
timings = {}

def bench(name, fn, repeats=3):
    fn()  # warm-up (includes jit compilation on the numba backend)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    results[name] = out
    timings[name] = best

g = ml.gen_erdos_renyi(40_000 // scale, 2.0, seed=0)
bench("blossom_er_c2", lambda: ml.matching_number(g, force=True))

gb = ml.gen_left_regular(100_000 // scale, 0.95, 3, seed=0)
bench("hopcroft_karp_cuckoo", lambda: ml.matching_number(gb))

pt = build_path_tree(RootedGraph(g, 0), 18)
bench("pathtree_rep_z", lambda: round(solve_rep_z(pt, 0.3), 14))

d = ml.DegreeDistribution.poisson(2)
bench(
    "population_z",
    lambda: round(
        ml.population_dynamics_z(d, 0.5, pop_size=200_000 // scale, sweeps=30, seed=0).root_mean, 14
    ),
)
bench(
    "population_zero",
    lambda: round(
        ml.population_dynamics_zero(d, pop_size=200_000 // scale, sweeps=30, seed=0).root_mean, 14
    ),
)

json.dump({"results": results, "timings": timings}, sys.stdout)
"""


def run_backend(disable_numba, quick):
    env = dict(os.environ)
    if disable_numba:
        env["MATCHLIM_NO_NUMBA"] = "1"
    else:
        env.pop("MATCHLIM_NO_NUMBA", None)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(quick)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    print("running numba backend ...", flush=True)
    fast = run_backend(disable_numba=False, quick=args.quick)
    print("running fallback backend (MATCHLIM_NO_NUMBA=1) ...", flush=True)
    slow = run_backend(disable_numba=True, quick=args.quick)

    mismatches = [
        k for k in fast["results"] if fast["results"][k] != slow["results"][k]
    ]
    print()
    print(f"{'kernel':<24}{'numba (s)':>12}{'fallback (s)':>14}{'speedup':>10}")
    for k in fast["timings"]:
        tf, ts = fast["timings"][k], slow["timings"][k]
        print(f"{k:<24}{tf:>12.4f}{ts:>14.4f}{ts / tf:>9.1f}x")
    print()
    if mismatches:
        print(f"RESULT MISMATCH between backends: {mismatches}")
        return 1
    print("both backends produced identical results")
    return 0


if __name__ == "__main__":
    sys.exit(main())
