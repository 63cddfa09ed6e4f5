"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 computation error
(budget exhausted, degenerate spectrum, rank cap).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import dominance as dom
from . import limits as lim
from . import subgroups as sub
from .datum import CoxeterDatum, bilinear, graph_components, load_datum
from .errors import ComputationError, DatumError
from .roots import RootSlice, act, generate_roots, support
from .svg import PlotSpec, emit_svg

USAGE_ERROR = 1
COMPUTATION_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; we reserve 2
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _fmt_vector(v: np.ndarray) -> str:
    return " ".join(f"{x:.6f}" for x in v)


def _load(args) -> CoxeterDatum:
    path = Path(args.file)
    if not path.exists():
        print(f"datum file not found: {path}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    return load_datum(path)


def _slice(d: CoxeterDatum, depth: int) -> RootSlice:
    return generate_roots(d, depth)


def _cmd_roots(args) -> int:
    d = _load(args)
    slice_ = _slice(d, args.depth)
    for i in range(len(slice_)):
        root = slice_.root(i)
        witness = " ".join(str(x) for x in root.witness + (root.seed,))
        print(f"{root.depth}\t{_fmt_vector(root.coords)}\t{witness}")
    return 0


def _cmd_dominance(args) -> int:
    d = _load(args)
    slice_ = _slice(d, args.depth)
    part = dom.partition_Dn(d, slice_, args.search_len)
    print(f"# {len(slice_)} positive roots at depth <= {args.depth}")
    for n, members in part.classes.items():
        print(f"D_{n}: {len(members)} roots")
        for i in members:
            stable = "stable" if part.stabilized[i] else "lower-bound"
            print(f"  {_fmt_vector(slice_.coords[i])}  [{stable}]")
    if part.uncertified_pairs:
        print("# uncertified pairs (direction heuristic):")
        for i, j in part.uncertified_pairs:
            print(f"  {_fmt_vector(slice_.coords[i])}  ~  {_fmt_vector(slice_.coords[j])}")
    else:
        print("# no uncertified pairs")
    return 0


def _dihedral_type(d: CoxeterDatum, value: float) -> str:
    if value <= -1.0 - d.tolerance:
        return f"infinite non-affine (value {value:.6f})"
    if abs(value + 1.0) <= d.tolerance:
        return "infinite affine (value -1)"
    m = max(2, round(math.pi / math.acos(max(-1.0, min(1.0, -value)))))
    return f"finite m={m} (value {value:.6f})"


def _cmd_subgroup(args) -> int:
    d = _load(args)
    slice_ = _slice(d, args.depth)
    try:
        indices = [int(tok) for tok in args.roots.split(",") if tok.strip()]
    except ValueError:
        print("--roots expects comma-separated indices", file=sys.stderr)
        return USAGE_ERROR
    if not indices or any(not 0 <= i < len(slice_) for i in indices):
        print(f"root indices must lie in [0, {len(slice_)})", file=sys.stderr)
        return USAGE_ERROR
    canonical = sub.canonicalize(d, [slice_.coords[i] for i in indices])
    print(f"# canonical generators ({len(canonical)} roots)")
    for r in canonical.roots:
        print(f"  {_fmt_vector(r)}")
    k = len(canonical)
    for i in range(k):
        for j in range(i + 1, k):
            value = float(canonical.pairwise_values[i, j])
            print(f"pair ({i},{j}): {_dihedral_type(d, value)}")
    return 0


def _cmd_parabolics(args) -> int:
    d = _load(args)
    found = sub.affine_standard_parabolics(d)
    if not found:
        print("# no affine standard parabolic subgroups")
        return 0
    for members in found:
        ptype = sub.classify_parabolic(d, members)
        names = ",".join(d.name(i) for i in members)
        print(f"{{{names}}}\tkernel {_fmt_vector(ptype.kernel_vector)}")
    return 0


def _cluster_record(c: lim.Cluster) -> dict:
    return {
        "center": [round(float(x), 9) for x in c.center],
        "members": int(len(c)),
        "radius": round(c.radius, 9),
        "isotropy_defect": round(c.isotropy_defect, 9),
        "extrapolated": bool(c.extrapolated),
    }


def _cmd_limits(args) -> int:
    d = _load(args)
    clusters = lim.approx_limit_roots(d, args.depth, args.min_depth, args.eps)
    if args.json:
        print(json.dumps([_cluster_record(c) for c in clusters], indent=2))
        return 0
    print(f"# {len(clusters)} cluster(s)")
    for c in clusters:
        tag = "extrapolated" if c.extrapolated else "paved"
        print(
            f"center {_fmt_vector(c.center)}  members {len(c)}  "
            f"defect {c.isotropy_defect:.3e}  [{tag}]"
        )
    return 0


def _classification_record(d: CoxeterDatum, point: lim.LimitPoint) -> dict:
    cls = point.classification
    record = {
        "coords": [round(float(x), 9) for x in point.coords],
        "classification": cls.kind.value,
        "host": list(cls.host) if cls.host is not None else None,
        "components": [list(c) for c in cls.components] if cls.components else None,
        "weights": [round(float(w), 9) for w in cls.weights]
        if cls.weights is not None
        else None,
        "reducer": list(cls.reducer) if cls.reducer is not None else None,
        "pos_count": point.pos_estimate[0] if point.pos_estimate else None,
        "stabilized": point.pos_estimate[1] if point.pos_estimate else None,
    }
    return record


def _cmd_classify(args) -> int:
    d = _load(args)
    try:
        coords = np.array([float(tok) for tok in args.point.split(",")])
    except ValueError:
        print("--point expects comma-separated coordinates", file=sys.stderr)
        return USAGE_ERROR
    if coords.shape != (d.rank,):
        print(f"--point must have {d.rank} coordinates", file=sys.stderr)
        return USAGE_ERROR
    slice_ = _slice(d, args.depth)
    try:
        point = lim.classify_limit_root(d, coords, slice_, max_iter=args.max_iter)
    except ValueError as exc:
        print(f"cannot classify: {exc}", file=sys.stderr)
        return USAGE_ERROR
    record = _classification_record(d, point)
    if args.json:
        print(json.dumps(record, indent=2))
    else:
        print(f"point {_fmt_vector(point.coords)}")
        print(f"classification {record['classification']}")
        if record["host"] is not None:
            print("host {" + ",".join(d.name(i) for i in record["host"]) + "}")
        if record["components"] is not None:
            names = " + ".join(
                "{" + ",".join(d.name(i) for i in comp) + "}"
                for comp in record["components"]
            )
            weights = " ".join(f"{w:.6f}" for w in record["weights"])
            print(f"components {names}  weights {weights}")
        print(f"pos_count {record['pos_count']}  stabilized {record['stabilized']}")
    return 0


def _cmd_plot(args) -> int:
    d = _load(args)
    slice_ = _slice(d, args.depth)
    clusters = lim.approx_limit_roots(
        d, args.depth, args.min_depth, args.eps, slice_=slice_
    )
    spec = PlotSpec.for_rank(d.rank, args.width, args.height)
    note = f"{Path(args.file).name} depth {args.depth} {spec.projection}"
    svg = emit_svg(spec, slice_, clusters, note=note)
    Path(args.output).write_text(svg, encoding="utf-8")
    print(f"wrote {args.output} ({len(clusters)} clusters, {len(slice_)} roots)")
    return 0


def _cmd_check(args) -> int:
    d = _load(args)
    failures = 0

    def report(name: str, ok: bool, info: str = "") -> None:
        nonlocal failures
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        suffix = f"  ({info})" if info else ""
        print(f"{status}  {name}{suffix}")

    report(
        "datum-gram-symmetric-unit-diagonal",
        bool(
            np.allclose(d.gram, d.gram.T)
            and np.allclose(np.diag(d.gram), 1.0)
        ),
    )

    depth = min(args.depth, 6)
    slice_ = _slice(d, depth)
    norms = np.einsum("ij,jk,ik->i", slice_.coords, d.gram, slice_.coords)
    report("roots-unit-norm", bool(np.max(np.abs(norms - 1.0)) < 1e-6))

    ok = True
    for i in range(len(slice_)):
        root = slice_.root(i)
        rebuilt = act(d, root.witness, d.simple_root(root.seed))
        if np.max(np.abs(rebuilt - root.coords)) > 1e-8:
            ok = False
            break
    report("roots-witness-reproduction", ok)

    ok = all(
        len(graph_components(d, support(slice_.coords[i], d.tolerance))) == 1
        for i in range(len(slice_))
    )
    report("roots-support-connected", ok)

    sums = slice_.coords.sum(axis=1)
    normalized = slice_.coords / sums[:, None]
    report(
        "normalized-roots-in-simplex",
        bool(
            np.min(normalized) >= -d.tolerance
            and np.max(normalized) <= 1.0 + d.tolerance
        ),
    )

    small = _slice(d, min(3, depth))
    values = small.gram_products()
    ok = True
    for i in range(len(small)):
        for j in range(i + 1, len(small)):
            verdict = dom.dominance_between(d, small.coords[i], small.coords[j], 8)
            comparable = verdict.relation in (
                dom.Relation.FIRST_DOMINATES,
                dom.Relation.SECOND_DOMINATES,
            )
            if comparable != bool(values[i, j] >= 1.0 - d.tolerance):
                ok = False
    report("dominance-bilinear-criterion", ok)

    clusters = lim.approx_limit_roots(d, args.depth, 0, 1e-2)
    if clusters:
        worst = max(c.isotropy_defect for c in clusters)
        report("cluster-isotropy", worst < 0.05, f"max defect {worst:.3e}")
    else:
        report("cluster-isotropy", True, "no clusters (finite at this depth)")

    parabolics = sub.affine_standard_parabolics(d)
    if parabolics:
        rng = np.random.default_rng(7)
        ok = True
        for members in parabolics:
            anchor = lim.affine_limit_root(d, members).coords
            for _ in range(5):
                word = tuple(int(x) for x in rng.integers(0, d.rank, size=4))
                _, back = lim.reduce_to_K(d, lim.dot_act(d, word, anchor))
                if np.max(np.abs(back - anchor)) > 1e-9:
                    ok = False
        report("fundamental-domain-uniqueness", ok)
    else:
        report("fundamental-domain-uniqueness", True, "no affine parabolics")

    if clusters and len(clusters) > 1:
        rng = np.random.default_rng(11)
        center = clusters[0].center
        reached = 0
        targets = [c.center for c in clusters[1:]]
        orbit = [center]
        for _ in range(200):
            word = tuple(int(x) for x in rng.integers(0, d.rank, size=6))
            try:
                orbit.append(lim.dot_act(d, word, center))
            except ValueError:
                continue
        for t in targets:
            if min(float(np.linalg.norm(p - t)) for p in orbit) < 5e-2:
                reached += 1
        print(f"INFO  dot-minimality-probe: reached {reached}/{len(targets)} clusters")

    return 0 if failures == 0 else COMPUTATION_ERROR


def build_parser() -> _Parser:
    parser = _Parser(prog="coxeter-limits", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", "--file", required=True, help="datum file")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("roots", parents=[common], help="list positive roots")
    p.add_argument("--depth", type=int, default=6)
    p.set_defaults(func=_cmd_roots)

    p = subparsers.add_parser(
        "dominance", parents=[common], help="partition a slice into D_n classes"
    )
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--search-len", type=int, default=12)
    p.set_defaults(func=_cmd_dominance)

    p = subparsers.add_parser(
        "subgroup", parents=[common], help="canonical generators for chosen roots"
    )
    p.add_argument("--roots", required=True, help="comma-separated slice indices")
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(func=_cmd_subgroup)

    p = subparsers.add_parser(
        "parabolics", parents=[common], help="affine standard parabolic subgroups"
    )
    p.set_defaults(func=_cmd_parabolics)

    p = subparsers.add_parser(
        "limits", parents=[common], help="cluster normalized roots"
    )
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--min-depth", type=int, default=0)
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_limits)

    p = subparsers.add_parser(
        "classify", parents=[common], help="classify an isotropic point"
    )
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_classify)

    p = subparsers.add_parser("plot", parents=[common], help="emit an SVG picture")
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--min-depth", type=int, default=0)
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=640)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_plot)

    p = subparsers.add_parser(
        "check", parents=[common], help="run the invariant suite on a datum"
    )
    p.add_argument("--depth", type=int, default=10)
    p.set_defaults(func=_cmd_check)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except BrokenPipeError:
        return 0
    except DatumError as exc:
        print(f"invalid datum: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ComputationError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return COMPUTATION_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
