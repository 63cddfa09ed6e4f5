"""Normalized roots, limit-root approximation and imaginary-cone tests.

Normalization cuts the positive cone with the affine hyperplane of
coordinate sum 1, where the accumulation points of normalized roots live
on the isotropic conic.  This module approximates those accumulation
points from a finite slice, decides membership in the fundamental domain
of the imaginary cone, reduces points into it, and classifies isotropic
points as affine limits, convex sums of affine limits, or neither.

Clustering detail: normalized roots of an affine family approach their
limit linearly in 1/|x|_1, too slowly for a fixed-radius linkage to
collapse opposite approach directions at desk depths.  Each linkage
cluster is therefore fitted with the first-order model
``point = center + slope / |x|_1``; clusters whose fitted limits agree are
merged, and clusters that do not fit a single convergent family are paved
into radius-bounded pieces instead of being extrapolated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .datum import CoxeterDatum, bilinear, graph_components
from .errors import ReductionError
from .roots import RootSlice, Word, act, full_support_root, generate_roots, reflect
from .subgroups import classify_parabolic

DEFAULT_ISO_TOLERANCE = 1e-6
DEFAULT_CLUSTER_EPS = 1e-2
DEFAULT_MAX_ITER = 10_000


def normalize(v: Sequence[float], tolerance: float = 1e-9) -> np.ndarray:
    """Intersection of the ray of ``v`` with the coordinate-sum-1 hyperplane."""
    v = np.asarray(v, dtype=float)
    s = float(v.sum())
    if abs(s) <= tolerance:
        raise ValueError("cannot normalize a vector with coordinate sum zero")
    return v / s


def dot_act(d: CoxeterDatum, word: Iterable[int], x: Sequence[float]) -> np.ndarray:
    """Projective action: apply the word, then renormalize to sum 1."""
    return normalize(act(d, word, x), d.tolerance)


# ---------------------------------------------------------------------------
# limit-root approximation


@dataclass(frozen=True, eq=False)
class Cluster:
    """A bundle of normalized roots accumulating at ``center``.

    ``extrapolated`` marks centers obtained from the convergence model;
    for paved (model-free) clusters the center is the member mean.
    ``radius`` is the largest member distance to the center, a diagnostic
    rather than a bound for extrapolated clusters.
    """

    center: np.ndarray
    members: np.ndarray
    member_depths: np.ndarray
    radius: float
    isotropy_defect: float
    extrapolated: bool

    def __len__(self) -> int:
        return self.members.shape[0]


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def _single_linkage(points: np.ndarray, eps: float) -> list[list[int]]:
    """Connected components of the eps-proximity graph, in first-seen order.

    Cells of side eps/sqrt(dim) make same-cell points automatic neighbors;
    cross-cell edges are resolved by vectorized min-distance tests between
    nearby cells.  Exact single linkage without the quadratic scan.
    """
    n_points, dim = points.shape
    uf = _UnionFind(n_points)
    # The grid pays off only for huge low-rank clouds; the neighbor-offset
    # count grows like 7^dim, so high ranks always take the direct path.
    if n_points <= 30_000 or dim > 6:
        for i in range(n_points):
            dist = np.linalg.norm(points[i + 1 :] - points[i], axis=1)
            for j in np.nonzero(dist <= eps)[0]:
                uf.union(i, i + 1 + int(j))
    else:
        side = eps / math.sqrt(dim)
        cells: dict[tuple[int, ...], list[int]] = {}
        for i in range(n_points):
            key = tuple(np.floor(points[i] / side).astype(np.int64))
            cells.setdefault(key, []).append(i)
        for idxs in cells.values():
            for j in idxs[1:]:
                uf.union(idxs[0], j)
        reach = int(math.ceil(math.sqrt(dim)))
        offsets = [
            off
            for off in product(range(-reach, reach + 1), repeat=dim)
            if off > (0,) * dim
        ]
        for key, idxs in cells.items():
            a = points[idxs]
            for off in offsets:
                neighbor = tuple(k + o for k, o in zip(key, off))
                other = cells.get(neighbor)
                if other is None:
                    continue
                if uf.find(idxs[0]) == uf.find(other[0]):
                    continue
                b = points[other]
                d2 = ((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
                if float(d2.min()) <= eps * eps:
                    uf.union(idxs[0], other[0])
    groups: dict[int, list[int]] = {}
    order: list[int] = []
    for i in range(n_points):
        root = uf.find(i)
        if root not in groups:
            groups[root] = []
            order.append(root)
        groups[root].append(i)
    return [groups[r] for r in order]


def _fit_limit(points: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, float] | None:
    """Least-squares fit of ``point = limit + slope * t``; returns (limit, max residual)."""
    if points.shape[0] < 2 or float(t.max() - t.min()) < 1e-12:
        return None
    design = np.stack([np.ones_like(t), t], axis=1)
    coef, *_ = np.linalg.lstsq(design, points, rcond=None)
    limit = coef[0]
    residual = float(np.linalg.norm(points - design @ coef, axis=1).max())
    if not np.all(np.isfinite(limit)):
        return None
    return limit, residual


def approx_limit_roots(
    d: CoxeterDatum,
    max_depth: int,
    min_depth: int = 0,
    cluster_eps: float = DEFAULT_CLUSTER_EPS,
    slice_: RootSlice | None = None,
) -> list[Cluster]:
    """Cluster normalized roots into estimates of the accumulation set.

    Pipeline: normalize all positive roots with depth in
    [min_depth, max_depth]; single-linkage cluster at radius cluster_eps;
    drop clusters with no member in the deepest two levels (they do not
    accumulate); fit each cluster with the 1/|x|_1 convergence model and
    merge clusters whose fitted limits agree within cluster_eps.  A finite
    group yields the empty list.
    """
    if min_depth >= max_depth:
        raise ValueError("min_depth must be smaller than max_depth")
    if slice_ is None:
        slice_ = generate_roots(d, max_depth)
    sel = np.nonzero((slice_.depths >= min_depth) & (slice_.depths <= max_depth))[0]
    if sel.size == 0:
        return []
    raw = slice_.coords[sel]
    norms = raw.sum(axis=1)
    points = raw / norms[:, None]
    depths = slice_.depths[sel]

    linkage = _single_linkage(points, cluster_eps)
    deep_cut = max_depth - 1

    prototype: list[dict] = []
    for member_rows in linkage:
        rows = np.array(member_rows)
        if int(depths[rows].max()) < deep_cut:
            continue
        pts = points[rows]
        t = 1.0 / norms[rows]
        fit = _fit_limit(pts, t)
        deepest = pts[int(np.argmax(norms[rows]))]
        if fit is not None:
            limit, residual = fit
            sane = (
                residual <= cluster_eps
                and float(np.linalg.norm(limit - deepest)) <= 10.0 * cluster_eps
            )
            if sane:
                prototype.append(
                    {"rows": rows, "center": limit, "extrapolated": True}
                )
                continue
            # Not a single convergent family: pave into radius-bounded cells,
            # keeping only cells that still touch the deepest two levels.
            cells: dict[tuple[int, ...], list[int]] = {}
            for r in member_rows:
                key = tuple(np.floor(points[r] / cluster_eps).astype(np.int64))
                cells.setdefault(key, []).append(r)
            for cell_rows in cells.values():
                crows = np.array(cell_rows)
                if int(depths[crows].max()) < deep_cut:
                    continue
                prototype.append(
                    {
                        "rows": crows,
                        "center": points[crows].mean(axis=0),
                        "extrapolated": False,
                    }
                )
        else:
            prototype.append(
                {"rows": rows, "center": deepest.copy(), "extrapolated": False}
            )

    # Merge extrapolated limit estimates that agree within cluster_eps.
    uf = _UnionFind(len(prototype))
    extrapolated = [i for i, c in enumerate(prototype) if c["extrapolated"]]
    for pos_a in range(len(extrapolated)):
        for pos_b in range(pos_a + 1, len(extrapolated)):
            i, j = extrapolated[pos_a], extrapolated[pos_b]
            if (
                np.linalg.norm(prototype[i]["center"] - prototype[j]["center"])
                <= cluster_eps
            ):
                uf.union(i, j)

    merged: dict[int, list[int]] = {}
    order: list[int] = []
    for i in range(len(prototype)):
        root = uf.find(i)
        if root not in merged:
            merged[root] = []
            order.append(root)
        merged[root].append(i)

    clusters: list[Cluster] = []
    for root in order:
        parts = merged[root]
        rows = np.concatenate([prototype[i]["rows"] for i in parts])
        weights = np.array([len(prototype[i]["rows"]) for i in parts], dtype=float)
        centers = np.array([prototype[i]["center"] for i in parts])
        center = (centers * weights[:, None]).sum(axis=0) / weights.sum()
        member_pts = points[rows]
        radius = float(np.linalg.norm(member_pts - center, axis=1).max())
        clusters.append(
            Cluster(
                center=center,
                members=member_pts,
                member_depths=depths[rows].copy(),
                radius=radius,
                isotropy_defect=abs(bilinear(d, center, center)),
                extrapolated=all(prototype[i]["extrapolated"] for i in parts),
            )
        )
    return clusters


# ---------------------------------------------------------------------------
# exact limit points


class LimitKind(Enum):
    AFFINE = "AffineLimit"
    AFFTYPE_SUM = "AffTypeSum"
    NON_AFFINE = "NonAffineType"
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True, eq=False)
class Classification:
    kind: LimitKind
    host: tuple[int, ...] | None = None
    components: tuple[tuple[int, ...], ...] | None = None
    weights: np.ndarray | None = None
    reducer: Word | None = None


@dataclass(frozen=True, eq=False)
class LimitPoint:
    coords: np.ndarray
    classification: Classification
    pos_estimate: tuple[int, bool] | None = None


def affine_limit_root(d: CoxeterDatum, members: Iterable[int]) -> LimitPoint:
    """The unique limit direction of a connected affine standard parabolic."""
    members = tuple(sorted(set(int(i) for i in members)))
    ptype = classify_parabolic(d, members)
    if ptype.tag != "affine":
        raise ValueError(f"subset {members} is of {ptype.tag} type, not affine")
    coords = np.zeros(d.rank)
    coords[list(members)] = ptype.kernel_vector
    return LimitPoint(
        coords=coords,
        classification=Classification(
            LimitKind.AFFINE, host=members, reducer=()
        ),
    )


def dihedral_limit_roots(d: CoxeterDatum, pair) -> list[np.ndarray]:
    """Limit directions of a dihedral subgroup given by a canonical pair.

    Empty for finite dihedrals, one point when the Gram value is -1, two
    closed-form points on the isotropic conic when it is below -1.
    """
    if len(pair.roots) != 2:
        raise ValueError("expected a canonical set of size 2")
    a, b = pair.roots
    value = float(pair.pairwise_values[0, 1])
    tol = d.tolerance
    if abs(value) < 1.0 - tol:
        return []
    if abs(value + 1.0) <= tol:
        return [normalize(a + b)]
    cosh_t = -value
    sinh_t = math.sqrt(cosh_t * cosh_t - 1.0)
    return [
        normalize((cosh_t + sinh_t) * a + b),
        normalize((cosh_t - sinh_t) * a + b),
    ]


def chebyshev_coeff(i: int, cosh_t: float) -> float:
    """The dihedral coefficient c_i by its three-term recurrence.

    c_0 = 0, c_1 = 1, c_{k+1} = 2*cosh_t*c_k - c_{k-1}; agrees with
    sinh(i*theta)/sinh(theta) for cosh_t > 1.
    """
    if i < 0:
        raise ValueError("index must be nonnegative")
    if cosh_t < 1.0:
        raise ValueError("cosh_t must be at least 1")
    prev, cur = 0.0, 1.0
    if i == 0:
        return prev
    for _ in range(i - 1):
        prev, cur = cur, 2.0 * cosh_t * cur - prev
    return cur


@dataclass(frozen=True)
class PosCount:
    count: int
    stabilized: bool


def pos_count(d: CoxeterDatum, point: Sequence[float], slice_: RootSlice) -> PosCount:
    """Number of slice roots pairing strictly positively with ``point``.

    Stabilized means no root of the deepest two populated levels
    contributes, i.e. the count shows no sign of still growing.
    """
    point = np.asarray(point, dtype=float)
    values = slice_.coords @ (d.gram @ point)
    contributing = values > d.tolerance
    if len(slice_) == 0:
        return PosCount(0, True)
    deepest = int(slice_.depths.max())
    tail = slice_.depths >= deepest - 1
    return PosCount(
        count=int(np.count_nonzero(contributing)),
        stabilized=not bool(np.any(contributing & tail)),
    )


def in_K(d: CoxeterDatum, v: Sequence[float]) -> bool:
    """Membership in the fundamental domain: inside the positive cone and
    pairing nonpositively with every simple root."""
    v = np.asarray(v, dtype=float)
    tol = d.tolerance
    if float(v.min()) < -tol:
        return False
    return float((d.gram @ v).max()) <= tol


def reduce_to_K(
    d: CoxeterDatum,
    point: Sequence[float],
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[Word, np.ndarray]:
    """Steepest descent of the dot-action into the fundamental domain.

    While some simple root pairs positively with the current point, reflect
    by the worst violator (ties by index).  For points of the imaginary
    cone each step strictly shortens the reducing word, so the loop
    terminates; anything else exhausts ``max_iter`` and raises.
    Returns ``(w, p)`` with ``p = w . point`` the unique fundamental
    representative of the orbit.
    """
    current = normalize(np.asarray(point, dtype=float), d.tolerance)
    tol = d.tolerance
    word: tuple[int, ...] = ()
    for _ in range(max_iter):
        values = d.gram @ current
        worst = int(np.argmax(values))
        if values[worst] <= tol:
            if float(current.min()) >= -tol:
                return word, current
            raise ReductionError(
                "descent reached a point outside the positive cone; "
                "the input is not in the imaginary cone"
            )
        current = current.copy()
        current[worst] -= 2.0 * float(values[worst])
        current = normalize(current, tol)
        word = (worst,) + word
    raise ReductionError(
        f"no fundamental-domain representative found within {max_iter} steps"
    )


def classify_limit_root(
    d: CoxeterDatum,
    point: Sequence[float],
    slice_: RootSlice,
    max_iter: int = DEFAULT_MAX_ITER,
    iso_tolerance: float = DEFAULT_ISO_TOLERANCE,
) -> LimitPoint:
    """Classify an isotropic direction against the affine-limit taxonomy.

    Reduction into the fundamental domain with connected support certifies
    an affine limit; disconnected support certifies a convex combination of
    affine limits, with weights read off the component radical directions.
    Failed reduction plus an unstabilized positive-pairing count indicates
    a non-affine-type point; anything else stays unresolved.
    """
    point = normalize(np.asarray(point, dtype=float), d.tolerance)
    self_value = bilinear(d, point, point)
    if abs(self_value) > iso_tolerance:
        raise ValueError(
            f"point is not isotropic: self-pairing is {self_value:.3e}"
        )
    pc = pos_count(d, point, slice_)
    estimate = (pc.count, pc.stabilized)
    try:
        word, reduced = reduce_to_K(d, point, max_iter)
    except ReductionError:
        if pc.count > 0 and not pc.stabilized:
            return LimitPoint(point, Classification(LimitKind.NON_AFFINE), estimate)
        return LimitPoint(point, Classification(LimitKind.UNRESOLVED), estimate)

    supp = tuple(int(i) for i in np.nonzero(np.abs(reduced) > d.tolerance)[0])
    components = graph_components(d, supp)
    kernels = []
    for comp in components:
        ptype = classify_parabolic(d, comp)
        if ptype.tag != "affine":
            return LimitPoint(point, Classification(LimitKind.UNRESOLVED), estimate)
        full = np.zeros(d.rank)
        full[list(comp)] = ptype.kernel_vector
        kernels.append(full)

    if len(components) == 1:
        if float(np.max(np.abs(reduced - kernels[0]))) > iso_tolerance:
            return LimitPoint(point, Classification(LimitKind.UNRESOLVED), estimate)
        return LimitPoint(
            point,
            Classification(LimitKind.AFFINE, host=components[0], reducer=word),
            estimate,
        )

    basis = np.array(kernels).T
    weights, *_ = np.linalg.lstsq(basis, reduced, rcond=None)
    residual = float(np.max(np.abs(basis @ weights - reduced)))
    if residual > iso_tolerance or float(weights.min()) < -iso_tolerance:
        return LimitPoint(point, Classification(LimitKind.UNRESOLVED), estimate)
    weights = weights / weights.sum()
    return LimitPoint(
        point,
        Classification(
            LimitKind.AFFTYPE_SUM,
            components=tuple(components),
            weights=weights,
            reducer=word,
        ),
        estimate,
    )


# ---------------------------------------------------------------------------
# convex combinations of affine limit roots as actual root limits


def _component_dihedral(
    d: CoxeterDatum, members: tuple[int, ...]
) -> tuple[np.ndarray, np.ndarray]:
    """An affine dihedral (alpha, delta) inside the parabolic on ``members``.

    alpha is a simple root of the component; delta = alpha + gamma spans the
    component radical, with gamma the reflection image of a root dominating
    alpha.  Then alpha + l*delta is a root for every natural l.
    """
    from .datum import CoxeterDatum as _Datum

    members = tuple(sorted(members))
    sub_gram = d.gram[np.ix_(members, members)]
    sub_labels = d.labels[np.ix_(members, members)]
    sub = _Datum(
        rank=len(members),
        labels=sub_labels,
        gram=sub_gram,
        names=tuple(d.names[i] for i in members),
        tolerance=d.tolerance,
    )
    alpha_local = 0
    beta_local = None
    for depth in (4, 8, 12):
        sub_slice = generate_roots(sub, depth)
        values = sub_slice.coords @ sub_gram[:, alpha_local]
        hits = np.nonzero(values >= 1.0 - d.tolerance)[0]
        for i in hits:
            candidate = sub_slice.coords[int(i)]
            if np.max(np.abs(candidate - np.eye(len(members))[alpha_local])) > d.tolerance:
                beta_local = candidate
                break
        if beta_local is not None:
            break
    if beta_local is None:
        raise ValueError(f"no dominating root found inside component {members}")

    alpha = np.zeros(d.rank)
    alpha[members[alpha_local]] = 1.0
    beta = np.zeros(d.rank)
    beta[list(members)] = beta_local
    gamma = reflect(d, alpha, beta)
    if abs(bilinear(d, alpha, gamma) + 1.0) > 1e-7:
        raise ValueError("component construction failed the (alpha,gamma)=-1 check")
    return alpha, alpha + gamma


def afftype_convex_sequence(
    d: CoxeterDatum,
    components: Sequence[tuple[int, ...]],
    weights: Sequence[float],
    steps: int,
) -> list[np.ndarray]:
    """A root sequence whose normalizations converge to a convex combination
    of the components' affine limit roots.

    Each step reflects a fixed full-support root by one commuting affine
    root per component; the integer translation amounts are chosen from the
    exact coordinate-sum polynomials so that the weight split matches the
    target as closely as integers allow.
    """
    components = [tuple(sorted(c)) for c in components]
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1 or len(weights) != len(components):
        raise ValueError("need one weight per component")
    if float(weights.min()) < -1e-12 or abs(float(weights.sum()) - 1.0) > 1e-9:
        raise ValueError("weights must be nonnegative and sum to 1")
    for i, a in enumerate(components):
        if classify_parabolic(d, a).tag != "affine":
            raise ValueError(f"component {a} is not of affine type")
        for b in components[i + 1 :]:
            if any(abs(d.gram[p, q]) > d.tolerance for p in a for q in b):
                raise ValueError(f"components {a} and {b} are not disconnected")

    x = full_support_root(d).coords
    active = [i for i in range(len(components)) if weights[i] > 1e-12]
    alphas: dict[int, np.ndarray] = {}
    deltas: dict[int, np.ndarray] = {}
    p: dict[int, float] = {}
    q: dict[int, float] = {}
    for i in active:
        alpha, delta = _component_dihedral(d, components[i])
        alphas[i], deltas[i] = alpha, delta
        p[i] = -2.0 * bilinear(d, x, alpha)
        q[i] = -2.0 * bilinear(d, x, delta)
        if q[i] <= d.tolerance:
            raise ValueError("full-support seed does not pair negatively with a component radical")

    target = np.zeros(d.rank)
    for i in active:
        target += weights[i] * normalize(deltas[i])

    def block_sum(i: int, ell: float) -> float:
        da = float(deltas[i].sum())
        base = float(x[list(components[i])].sum())
        return base + (p[i] + ell * q[i]) + (ell * p[i] + ell * ell * q[i]) * da

    anchor = min(active, key=lambda i: (weights[i], i))

    def sequence_entry(n: int) -> np.ndarray:
        ells = {anchor: n}
        for i in active:
            if i == anchor:
                continue
            goal = (weights[i] / weights[anchor]) * block_sum(anchor, n)
            da = float(deltas[i].sum())
            a2 = q[i] * da
            a1 = q[i] + p[i] * da
            a0 = float(x[list(components[i])].sum()) + p[i] - goal
            disc = a1 * a1 - 4.0 * a2 * a0
            ell = (-a1 + math.sqrt(max(disc, 0.0))) / (2.0 * a2)
            ells[i] = max(1, int(round(ell)))
        # refine non-anchor amounts by exact evaluation
        def build(e: dict[int, int]) -> np.ndarray:
            y = x.copy()
            for i in active:
                y = reflect(d, alphas[i] + e[i] * deltas[i], y)
            return y

        best, best_err = None, math.inf
        options = [
            [max(1, ells[i] + delta) for delta in (-1, 0, 1)] if i != anchor else [n]
            for i in active
        ]
        for combo in product(*options):
            e = dict(zip(active, combo))
            y = build(e)
            err = float(np.linalg.norm(normalize(y) - target))
            if err < best_err:
                best, best_err = y, err
        return best

    return [sequence_entry(n) for n in range(1, steps + 1)]
