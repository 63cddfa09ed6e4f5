"""Deterministic SVG pictures of normalized roots and limit clusters.

Rank 2 plots the normalized segment, rank 3 the barycentric triangle with
the trace of the normalized isotropic conic, higher ranks a 2-D principal
component projection of the normalized root cloud itself (the projection
matrix is part of the returned metadata so pictures are reproducible).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datum import CoxeterDatum, bilinear
from .limits import Cluster
from .roots import RootSlice


@dataclass(frozen=True)
class PlotSpec:
    projection: str  # "coords2" | "barycentric3" | "pca2"
    width: int = 640
    height: int = 640
    margin: int = 40

    @staticmethod
    def for_rank(rank: int, width: int = 640, height: int = 640) -> "PlotSpec":
        if rank == 2:
            return PlotSpec("coords2", width, height)
        if rank == 3:
            return PlotSpec("barycentric3", width, height)
        return PlotSpec("pca2", width, height)


def _depth_color(depth: int, max_depth: int) -> str:
    t = depth / max_depth if max_depth > 0 else 0.0
    r = int(round(44 + t * (215 - 44)))
    g = int(round(123 + t * (25 - 123)))
    b = int(round(182 + t * (28 - 182)))
    return f"#{r:02x}{g:02x}{b:02x}"


def _project(
    spec: PlotSpec, points: np.ndarray, fit_count: int | None = None
) -> tuple[np.ndarray, np.ndarray | None]:
    """Map sum-1 points to the plane; returns (xy, projection matrix or None).

    For the PCA projection the basis is fitted on the first ``fit_count``
    rows (the normalized root cloud), then applied to everything.
    """
    if spec.projection == "coords2":
        xy = np.stack([points[:, 0], np.zeros(len(points))], axis=1)
        return xy, None
    if spec.projection == "barycentric3":
        corners = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2.0]])
        return points @ corners, None
    cloud = points[: fit_count if fit_count else len(points)]
    if cloud.shape[0] == 0:
        cloud = points
    mean = cloud.mean(axis=0, keepdims=True) if len(cloud) else np.zeros((1, points.shape[1]))
    centered_cloud = cloud - mean
    cov = centered_cloud.T @ centered_cloud
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    basis = eigenvectors[:, ::-1][:, :2]
    for col in range(2):
        lead = np.nonzero(np.abs(basis[:, col]) > 1e-12)[0]
        if lead.size and basis[lead[0], col] < 0:
            basis[:, col] = -basis[:, col]
    return (points - mean) @ basis, basis


def _conic_trace(d: CoxeterDatum, samples: int = 256) -> list[np.ndarray]:
    """Points of the normalized isotropic conic, rank 3 only.

    Walks rays from the simplex centroid inside the sum-zero plane and
    solves the quadratic (c + t u, c + t u) = 0 along each ray.
    """
    center = np.full(3, 1.0 / 3.0)
    u1 = np.array([1.0, -1.0, 0.0]) / math.sqrt(2.0)
    u2 = np.array([1.0, 1.0, -2.0]) / math.sqrt(6.0)
    points: list[np.ndarray] = []
    for k in range(samples):
        phi = 2.0 * math.pi * k / samples
        direction = math.cos(phi) * u1 + math.sin(phi) * u2
        a = bilinear(d, direction, direction)
        b = 2.0 * bilinear(d, center, direction)
        c = bilinear(d, center, center)
        if abs(a) < 1e-14:
            continue
        disc = b * b - 4.0 * a * c
        if disc < 0:
            continue
        for sign in (1.0, -1.0):
            t = (-b + sign * math.sqrt(disc)) / (2.0 * a)
            if t > 0:
                points.append(center + t * direction)
                break
    return points


def emit_svg(
    spec: PlotSpec,
    slice_: RootSlice,
    clusters: list[Cluster],
    note: str = "",
) -> str:
    """Render normalized roots (depth color ramp) and cluster crosses."""
    d = slice_.datum
    if len(slice_):
        sums = slice_.coords.sum(axis=1)
        normalized = slice_.coords / sums[:, None]
    else:
        normalized = np.empty((0, d.rank))

    all_points = [normalized]
    conic = _conic_trace(d) if spec.projection == "barycentric3" else []
    if conic:
        all_points.append(np.array(conic))
    for c in clusters:
        all_points.append(c.center[None, :])
    stacked = np.vstack(all_points) if all_points else np.empty((0, d.rank))

    if stacked.shape[0]:
        xy_all, basis = _project(spec, stacked, fit_count=len(normalized))
    else:
        xy_all, basis = np.empty((0, 2)), None
    lo = xy_all.min(axis=0) if len(xy_all) else np.zeros(2)
    hi = xy_all.max(axis=0) if len(xy_all) else np.ones(2)
    span = np.maximum(hi - lo, 1e-9)

    def place(p: np.ndarray) -> tuple[float, float]:
        inner_w = spec.width - 2 * spec.margin
        inner_h = spec.height - 2 * spec.margin
        x = spec.margin + (p[0] - lo[0]) / span[0] * inner_w
        y = spec.height - spec.margin - (p[1] - lo[1]) / span[1] * inner_h
        return x, y

    n_roots = len(normalized)
    xy_roots = xy_all[:n_roots]
    offset = n_roots
    xy_conic = xy_all[offset : offset + len(conic)]
    offset += len(conic)
    xy_clusters = xy_all[offset:]

    out: list[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">'
    )
    out.append(f'<rect width="{spec.width}" height="{spec.height}" fill="white"/>')
    if note:
        out.append(
            f'<text x="{spec.margin}" y="{spec.margin - 12}" '
            f'font-size="12" fill="#444">{note}</text>'
        )
    out.append(
        f'<rect x="{spec.margin}" y="{spec.margin}" '
        f'width="{spec.width - 2 * spec.margin}" '
        f'height="{spec.height - 2 * spec.margin}" fill="none" stroke="#ccc"/>'
    )

    if len(xy_conic):
        coords = " ".join(
            f"{place(p)[0]:.2f},{place(p)[1]:.2f}" for p in xy_conic
        )
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="#999" '
            'stroke-dasharray="4 3" stroke-width="1"/>'
        )

    max_depth = int(slice_.depths.max()) if len(slice_) else 0
    for i in range(n_roots):
        x, y = place(xy_roots[i])
        color = _depth_color(int(slice_.depths[i]), max_depth)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2" fill="{color}"/>')

    for i in range(len(xy_clusters)):
        x, y = place(xy_clusters[i])
        out.append(
            f'<path d="M {x - 6:.2f} {y:.2f} L {x + 6:.2f} {y:.2f} '
            f'M {x:.2f} {y - 6:.2f} L {x:.2f} {y + 6:.2f}" '
            'stroke="black" stroke-width="1.5"/>'
        )

    out.append("</svg>")
    svg = "\n".join(out) + "\n"
    if basis is not None:
        rows = "; ".join(
            " ".join(f"{v:+.6f}" for v in basis[:, col]) for col in range(2)
        )
        svg = svg.replace(
            "</svg>", f"<!-- pca basis columns: {rows} -->\n</svg>"
        )
    return svg
