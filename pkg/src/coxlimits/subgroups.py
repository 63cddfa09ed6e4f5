"""Reflection subgroups: canonical generators, parabolic types, hosts.

The canonical roots of a reflection subgroup are characterized by their
pairwise bilinear values lying in ``{-cos(pi/n) : n >= 2} U (-inf, -1]``.
``canonicalize`` repairs an arbitrary generating set of positive roots by
repeatedly replacing a violating pair with the canonical pair of the
dihedral subgroup it generates, which preserves the generated group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .datum import CoxeterDatum, bilinear, graph_components, is_connected
from .errors import CanonicalBudgetError, RankCapError, SpectrumError
from .roots import Root, RootSlice, Word, reflect, sign_of

DEFAULT_CLOSURE_BUDGET = 64
DEFAULT_CANONICALIZE_BUDGET = 256
DEFAULT_RANK_CAP = 20


def is_canonical_value(value: float, tolerance: float = 1e-9) -> bool:
    """Whether a bilinear value is admissible between canonical roots."""
    if value <= -1.0 + tolerance:
        return True
    if value > tolerance:
        return False
    # value in (-1, 0]: must match -cos(pi/n) for an integer n >= 2
    n = round(math.pi / math.acos(-value)) if value < -tolerance else 2
    n = max(n, 2)
    return abs(value + math.cos(math.pi / n)) <= tolerance


@dataclass(frozen=True, eq=False)
class CanonicalSet:
    """Canonical roots of a reflection subgroup, with cached Gram values."""

    roots: tuple[np.ndarray, ...]
    pairwise_values: np.ndarray

    def __len__(self) -> int:
        return len(self.roots)

    @classmethod
    def from_roots(cls, d: CoxeterDatum, roots: Sequence[np.ndarray]) -> "CanonicalSet":
        ordered = sorted(
            (np.asarray(r, dtype=float) for r in roots),
            key=lambda r: tuple(np.round(r, 9)),
        )
        mat = np.array(ordered) if ordered else np.empty((0, d.rank))
        values = mat @ d.gram @ mat.T if len(ordered) else np.empty((0, 0))
        return cls(tuple(ordered), values)

    def satisfies_criterion(self, tolerance: float = 1e-9) -> bool:
        k = len(self.roots)
        return all(
            is_canonical_value(float(self.pairwise_values[i, j]), tolerance)
            for i in range(k)
            for j in range(i + 1, k)
        )


def _plane_angles(
    basis_x: np.ndarray, basis_y: np.ndarray, roots: list[np.ndarray]
) -> np.ndarray:
    """Angles of roots inside span{x, y}, measured from the cone interior.

    All subsystem positive roots lie in a half-plane, so angles relative to
    the mean direction never wrap.
    """
    basis = np.stack([basis_x, basis_y], axis=1)
    coeffs, *_ = np.linalg.lstsq(basis, np.array(roots).T, rcond=None)
    planar = coeffs.T
    planar = planar / np.linalg.norm(planar, axis=1, keepdims=True)
    mean = planar.sum(axis=0)
    mean = mean / np.linalg.norm(mean)
    perp = np.array([-mean[1], mean[0]])
    return np.arctan2(planar @ perp, planar @ mean)


def dihedral_canonical_pair(
    d: CoxeterDatum,
    x,
    y,
    budget: int = DEFAULT_CLOSURE_BUDGET,
) -> CanonicalSet:
    """Canonical roots of the dihedral subgroup generated by r_x and r_y.

    Generates the rank-2 subsystem by closing {x, y} under the two
    reflections, keeping positive representatives, and returns the two
    angular extremes in the plane: the unique pair whose nonnegative span
    contains every positive subsystem root.  Stops once two consecutive
    closure rounds produce no new extremes.
    """
    vx = np.asarray(x.coords if isinstance(x, Root) else x, dtype=float)
    vy = np.asarray(y.coords if isinstance(y, Root) else y, dtype=float)
    tol = d.tolerance
    if np.max(np.abs(vx - vy)) <= tol:
        return CanonicalSet.from_roots(d, [vx])

    def key(v: np.ndarray) -> bytes:
        return np.round(v / 1e-6).astype(np.int64).tobytes()

    roots: list[np.ndarray] = [vx, vy]
    seen = {key(vx), key(vy)}
    extremes: tuple[bytes, bytes] | None = None
    stable_rounds = 0

    for _ in range(budget):
        new: list[np.ndarray] = []
        for mirror in (vx, vy):
            for r in roots:
                image = reflect(d, mirror, r)
                if sign_of(d, image) < 0:
                    image = -image
                k = key(image)
                if k not in seen:
                    seen.add(k)
                    new.append(image)
        grew = bool(new)
        roots.extend(new)
        angles = _plane_angles(vx, vy, roots)
        lo, hi = int(np.argmin(angles)), int(np.argmax(angles))
        current = (key(roots[lo]), key(roots[hi]))
        if extremes == current:
            stable_rounds += 1
        else:
            stable_rounds = 0
            extremes = current
        if not grew or stable_rounds >= 2:
            return CanonicalSet.from_roots(d, [roots[lo], roots[hi]])
    raise CanonicalBudgetError(
        "dihedral closure did not stabilize within the round budget"
    )


def canonicalize(
    d: CoxeterDatum,
    delta: Iterable,
    budget: int = DEFAULT_CANONICALIZE_BUDGET,
) -> CanonicalSet:
    """Rewrite a set of positive roots into canonical generators.

    While some pair violates the canonical criterion, the pair is replaced
    by the canonical pair of its dihedral subgroup; the reflection subgroup
    generated by the working set is preserved at every step.
    """
    working: dict[bytes, np.ndarray] = {}
    for r in delta:
        v = np.asarray(r.coords if isinstance(r, Root) else r, dtype=float)
        working[np.round(v / 1e-6).astype(np.int64).tobytes()] = v
    if not working:
        raise ValueError("canonicalize needs a nonempty set of roots")

    for _ in range(budget):
        items = sorted(working.values(), key=lambda v: tuple(np.round(v, 9)))
        violating = None
        for a, b in combinations(items, 2):
            if not is_canonical_value(bilinear(d, a, b), d.tolerance):
                violating = (a, b)
                break
        if violating is None:
            return CanonicalSet.from_roots(d, items)
        a, b = violating
        replacement = dihedral_canonical_pair(d, a, b)
        for v in (a, b):
            working.pop(np.round(v / 1e-6).astype(np.int64).tobytes(), None)
        for v in replacement.roots:
            working[np.round(v / 1e-6).astype(np.int64).tobytes()] = v
    raise CanonicalBudgetError("canonicalize exceeded its replacement budget")


@dataclass(frozen=True, eq=False)
class ParabolicType:
    """Classification of a connected standard parabolic subgroup.

    ``kernel_vector`` is present exactly for affine type: the strictly
    positive radical direction over the members of M, normalized to unit
    coordinate sum.
    """

    tag: str  # "finite" | "affine" | "indefinite"
    kernel_vector: np.ndarray | None = None


def classify_parabolic(d: CoxeterDatum, members: Iterable[int]) -> ParabolicType:
    """Finite / affine / indefinite type of a connected subset of simple roots.

    Decided by the spectrum of the restricted Gram matrix.  Affine type
    requires a one-dimensional kernel with a constant-sign eigenvector
    (guaranteed for connected subsets); ambiguous spectra raise instead of
    guessing.
    """
    members = sorted(set(int(i) for i in members))
    if not members:
        raise ValueError("empty subset has no parabolic type")
    if not is_connected(d, members):
        raise ValueError("classify_parabolic expects a connected subset")
    sub = d.gram[np.ix_(members, members)]
    eigenvalues, eigenvectors = np.linalg.eigh(sub)
    tol = d.tolerance
    smallest = eigenvalues[0]
    if smallest > tol:
        return ParabolicType("finite")
    if smallest < -tol:
        return ParabolicType("indefinite")
    if len(eigenvalues) > 1 and eigenvalues[1] <= tol:
        raise SpectrumError(
            "second eigenvalue is also within tolerance of zero; "
            "cannot certify a one-dimensional radical"
        )
    kernel = eigenvectors[:, 0]
    if kernel.sum() < 0:
        kernel = -kernel
    if np.min(kernel) <= tol:
        raise SpectrumError(
            "kernel eigenvector is not of constant sign within tolerance"
        )
    kernel = kernel / kernel.sum()
    return ParabolicType("affine", kernel_vector=kernel)


def affine_standard_parabolics(
    d: CoxeterDatum, rank_cap: int = DEFAULT_RANK_CAP
) -> list[tuple[int, ...]]:
    """All connected subsets of simple roots of affine type, lexicographic."""
    if d.rank > rank_cap:
        raise RankCapError(
            f"rank {d.rank} above the exhaustive enumeration cap {rank_cap}"
        )
    found: list[tuple[int, ...]] = []
    for mask in range(1, 1 << d.rank):
        members = tuple(i for i in range(d.rank) if mask & (1 << i))
        if not is_connected(d, members):
            continue
        if classify_parabolic(d, members).tag == "affine":
            found.append(members)
    found.sort()
    return found


def is_affine_dihedral(d: CoxeterDatum, pair: CanonicalSet) -> bool:
    """True iff a canonical pair generates an infinite affine dihedral group."""
    if len(pair) != 2:
        raise ValueError("expected a canonical set of size 2")
    value = float(pair.pairwise_values[0, 1])
    return abs(value + 1.0) <= d.tolerance


def find_nonaffine_dihedral(
    d: CoxeterDatum, slice_: RootSlice
) -> tuple[Root, Root] | None:
    """First slice pair with bilinear value strictly below -1, if any.

    Every irreducible infinite non-affine group exposes such a pair at
    sufficient depth; absence at this depth is a valid answer.
    """
    values = slice_.gram_products()
    tol = d.tolerance
    hits = np.argwhere(values <= -1.0 - tol)
    for i, j in hits:
        if i < j:
            return slice_.root(int(i)), slice_.root(int(j))
    return None


def host_parabolic(
    d: CoxeterDatum,
    pair: CanonicalSet,
    max_iter: int = 10_000,
) -> tuple[Word, tuple[int, ...]]:
    """Standard affine parabolic hosting an affine dihedral subgroup.

    Reduces the subgroup's unique limit direction into the fundamental
    domain; the support of the reduced point names the parabolic, and the
    reducing word conjugates the subgroup into it.
    """
    from .limits import normalize, reduce_to_K

    if not is_affine_dihedral(d, pair):
        raise ValueError("host_parabolic expects an affine dihedral pair")
    direction = normalize(pair.roots[0] + pair.roots[1])
    word, reduced = reduce_to_K(d, direction, max_iter=max_iter)
    members = tuple(
        int(i) for i in np.nonzero(np.abs(reduced) > d.tolerance)[0]
    )
    if classify_parabolic(d, members).tag != "affine":
        raise SpectrumError("reduced support did not classify as affine")
    return word, members
