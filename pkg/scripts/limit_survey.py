#!/usr/bin/env python3
"""Survey limit-root structure across the datum corpus.

For each datum: affine standard parabolics, cluster counts at increasing
depth, and the classification of each extrapolated cluster center.  Shows
how the singleton / two-point / many-point trichotomy emerges at desk
depth.

Usage: python3 scripts/limit_survey.py [max_depth]
"""

import sys
from pathlib import Path

import numpy as np

import coxlimits as cx

CORPUS = ["a2", "afftilde1", "afftilde2", "dih15", "twin_affine", "tri101"]


def survey(name: str, path: Path, max_depth: int) -> None:
    d = cx.load_datum(path)
    print(f"== {name} (rank {d.rank})")
    parabolics = cx.affine_standard_parabolics(d)
    if parabolics:
        for members in parabolics:
            eta = cx.affine_limit_root(d, members)
            labels = ",".join(d.name(i) for i in members)
            print(f"   affine parabolic {{{labels}}} -> {np.round(eta.coords, 6)}")
    else:
        print("   no affine standard parabolics")

    slice_ = cx.generate_roots(d, max_depth)
    for depth in range(max_depth // 2, max_depth + 1, max(1, max_depth // 4)):
        clusters = cx.approx_limit_roots(d, depth, 0, 1e-2, slice_=slice_)
        print(f"   depth {depth:2d}: {len(clusters)} cluster(s)")

    clusters = cx.approx_limit_roots(d, max_depth, 0, 1e-2, slice_=slice_)
    for c in clusters[:6]:
        if not c.extrapolated or c.isotropy_defect > 1e-4:
            continue
        point = cx.classify_limit_root(d, c.center, slice_)
        print(
            f"   center {np.round(c.center, 6)} -> "
            f"{point.classification.kind.value} "
            f"pos={point.pos_estimate[0]}"
        )
    print()


def main() -> None:
    data = Path(__file__).resolve().parent.parent / "data"
    max_depth = int(sys.argv[1]) if len(sys.argv) > 1 else 14
    for name in CORPUS:
        survey(name, data / f"{name}.cox", max_depth)


if __name__ == "__main__":
    main()
