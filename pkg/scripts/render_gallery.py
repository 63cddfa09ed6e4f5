#!/usr/bin/env python3
"""Render normalized-root pictures for every datum in data/.

Usage: python3 scripts/render_gallery.py [outdir]
"""

import sys
from pathlib import Path

import coxlimits as cx
from coxlimits.svg import PlotSpec, emit_svg

DEPTHS = {
    "a2": 4,
    "b2": 4,
    "h3": 16,
    "afftilde1": 16,
    "afftilde2": 12,
    "dih15": 14,
    "twin_affine": 10,
    "tri101": 12,
    "triuniv": 12,
}


def main() -> None:
    data = Path(__file__).resolve().parent.parent / "data"
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("gallery")
    outdir.mkdir(parents=True, exist_ok=True)
    for path in sorted(data.glob("*.cox")):
        name = path.stem
        depth = DEPTHS.get(name, 8)
        d = cx.load_datum(path)
        slice_ = cx.generate_roots(d, depth)
        clusters = cx.approx_limit_roots(d, depth, 0, 1e-2, slice_=slice_)
        spec = PlotSpec.for_rank(d.rank)
        svg = emit_svg(spec, slice_, clusters, note=f"{name} depth {depth}")
        target = outdir / f"{name}.svg"
        target.write_text(svg, encoding="utf-8")
        print(
            f"{target}  roots={len(slice_)}  clusters={len(clusters)}  "
            f"projection={spec.projection}"
        )


if __name__ == "__main__":
    main()
