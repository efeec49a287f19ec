"""Certify every registered relation on standard observable sets and print a table.

Writes one JSON report per run.  Exit status 3 if a relation claimed tight
fails or any soundness violation is found.
"""

import argparse
import math
import time
from pathlib import Path

import numpy as np

from qubit_uncertainty.oracle import RELATIONS, Sampler, certify_tightness
from qubit_uncertainty.pseudo import build_set, tetrahedron_directions


def pair(ab):
    return build_set([[1, 0, 0], [ab, math.sqrt(1 - ab * ab), 0]])


def runs(quick: bool):
    grid = 0.02 if quick else 0.005
    for ab in (0.0, 0.5, 0.9):
        for rid, spec in RELATIONS.items():
            if spec.n == 2:
                yield f"{rid}_ab{ab}", pair(ab), rid, grid, 2 * grid
    tri = build_set([[1, 0, 0], [0.6, 0.8, 0], [0, 0.6, 0.8]])
    for rid in ("triple", "expectation_triple", "n_observable", "ellipsoid"):
        yield f"{rid}_triple", tri, rid, 0.05 if quick else 0.02, 0.1 if quick else 0.04
    tet = build_set(tetrahedron_directions())
    yield "ellipsoid_tetrahedron", tet, "ellipsoid", 0.1, 0.1
    yield "ellipsoid_realizable_tetrahedron", tet, "ellipsoid_realizable", 0.02 if quick else 0.01, \
        0.02 if quick else 0.01


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", default="out/certify")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--quick", action="store_true", help="coarse grids for a fast smoke run")
    args = p.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    failed = False
    print(f"{'run':40s} {'tight?':>6s} {'viol':>5s} {'gap':>8s} {'eps':>6s} {'verdict':>7s} {'time':>6s}")
    for name, S, rid, grid, eps in runs(args.quick):
        t0 = time.perf_counter()
        rep = certify_tightness(S, rid, grid, Sampler(seed=args.seed, count=args.samples), eps)
        dt = time.perf_counter() - t0
        (out / f"{name}.json").write_text(rep.to_json() + "\n")
        bad = rep.soundness_violations > 0 or (rep.claimed_tight and not rep.passed)
        failed |= bad
        print(f"{name:40s} {str(rep.claimed_tight):>6s} {rep.soundness_violations:5d} "
              f"{rep.completeness_gap:8.4f} {eps:6.3f} {rep.verdict:>7s} {dt:5.1f}s{'  <--' if bad else ''}")
    raise SystemExit(3 if failed else 0)
