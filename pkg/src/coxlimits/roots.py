"""Root system enumeration by reflection closure.

Positive roots are generated breadth-first from the simple roots, applying
all simple reflections to each frontier level.  The slice keeps, for every
root, its minimal word depth together with a witness: a word ``w`` and a
seed index ``s`` such that the root equals ``act(w, simple_root(s))``.

Enumeration is the hot path of the package.  Slices therefore store flat
numpy arrays (coordinates, depths, parent pointers) and materialize
``Root`` objects lazily; level updates are vectorized over the whole BFS
frontier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .datum import CoxeterDatum, bilinear
from .errors import SliceLimitError

# Grid used for hashing root coordinates.  Coarser than the comparison
# tolerance so that one root never splits across keys in practice; a key
# hit is confirmed by an exact tolerance comparison.
DEDUP_GRID = 1e-6

DEFAULT_DEPTH_CAP = 40
DEFAULT_MAX_ROOTS = 2_000_000

Word = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Root:
    """A root with its minimal-depth witness.

    ``coords == act(witness, simple_root(seed))`` and ``len(witness) == depth``.
    """

    coords: np.ndarray
    sign: int
    depth: int
    witness: Word
    seed: int

    def support(self, tolerance: float = 1e-9) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(np.abs(self.coords) > tolerance)[0])


def _coords_key(coords: np.ndarray) -> bytes:
    return np.round(coords / DEDUP_GRID).astype(np.int64).tobytes()


def sign_of(d: CoxeterDatum, v: np.ndarray) -> int:
    """+1 for positive vectors, -1 for negative, 0 otherwise."""
    tol = d.tolerance
    lo, hi = float(np.min(v)), float(np.max(v))
    if lo >= -tol and hi > tol:
        return 1
    if hi <= tol and lo < -tol:
        return -1
    return 0


def reflect(d: CoxeterDatum, x: Sequence[float], v: Sequence[float]) -> np.ndarray:
    """Reflect ``v`` in the hyperplane of the non-isotropic vector ``x``."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    xx = bilinear(d, x, x)
    if abs(xx) <= d.tolerance:
        raise ValueError("cannot reflect in an isotropic vector")
    return v - (2.0 * bilinear(d, v, x) / xx) * x


def simple_reflect(d: CoxeterDatum, i: int, v: np.ndarray) -> np.ndarray:
    """Reflection in the i-th simple root (unit vector, so no division)."""
    out = np.array(v, dtype=float)
    out[i] -= 2.0 * float(v @ d.gram[:, i])
    return out


def act(d: CoxeterDatum, word: Iterable[int], v: Sequence[float]) -> np.ndarray:
    """Apply a word of simple reflections to ``v``, rightmost letter first."""
    out = np.asarray(v, dtype=float).copy()
    letters = tuple(word)
    for i in reversed(letters):
        out[i] -= 2.0 * float(out @ d.gram[:, i])
    return out


class RootSlice:
    """All positive roots of depth <= max_depth, deduplicated and indexed.

    Witnesses are stored compressed: each root keeps the index of the root
    it was reflected from and the letter used, so full words are recovered
    by walking parent pointers.
    """

    def __init__(self, datum: CoxeterDatum, max_depth: int):
        self.datum = datum
        self.max_depth = max_depth
        self._coords: np.ndarray = np.empty((0, datum.rank))
        self._depths: np.ndarray = np.empty(0, dtype=np.int32)
        self._parents: np.ndarray = np.empty(0, dtype=np.int64)
        self._letters: np.ndarray = np.empty(0, dtype=np.int32)
        self._seeds: np.ndarray = np.empty(0, dtype=np.int32)
        self.lookup: dict[bytes, int] = {}

    def __len__(self) -> int:
        return self._coords.shape[0]

    def __iter__(self) -> Iterator[Root]:
        return (self.root(i) for i in range(len(self)))

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def depths(self) -> np.ndarray:
        return self._depths

    def witness(self, index: int) -> Word:
        letters: list[int] = []
        i = int(index)
        while self._parents[i] >= 0:
            letters.append(int(self._letters[i]))
            i = int(self._parents[i])
        return tuple(letters)

    def root(self, index: int) -> Root:
        index = int(index)
        return Root(
            coords=self._coords[index].copy(),
            sign=1,
            depth=int(self._depths[index]),
            witness=self.witness(index),
            seed=int(self._seeds[index]),
        )

    def index_of(self, coords: Sequence[float]) -> int | None:
        coords = np.asarray(coords, dtype=float)
        i = self.lookup.get(_coords_key(coords))
        if i is None:
            return None
        if np.max(np.abs(self._coords[i] - coords)) <= max(
            self.datum.tolerance, 1e-6 * np.max(np.abs(coords))
        ):
            return i
        return None

    def at_depth(self, depth: int) -> np.ndarray:
        return np.nonzero(self._depths == depth)[0]

    def restrict(self, max_depth: int) -> np.ndarray:
        """Indices of roots with depth <= max_depth."""
        return np.nonzero(self._depths <= max_depth)[0]

    def gram_products(self) -> np.ndarray:
        """Matrix of pairwise bilinear values between slice roots."""
        return self._coords @ self.datum.gram @ self._coords.T

    def _append(self, coords, depths, parents, letters, seeds) -> None:
        base = len(self)
        self._coords = np.vstack([self._coords, coords])
        self._depths = np.concatenate([self._depths, depths])
        self._parents = np.concatenate([self._parents, parents])
        self._letters = np.concatenate([self._letters, letters])
        self._seeds = np.concatenate([self._seeds, seeds])
        for offset in range(coords.shape[0]):
            self.lookup[_coords_key(coords[offset])] = base + offset


def generate_roots(
    d: CoxeterDatum,
    max_depth: int,
    max_roots: int = DEFAULT_MAX_ROOTS,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> RootSlice:
    """BFS closure of the simple roots under simple reflections.

    Applies every simple reflection to each frontier root, keeps the images
    that are positive and new, and records minimal depth plus witness.
    Deterministic: frontier roots are processed in index order and letters
    in ascending order.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if max_depth > depth_cap:
        raise SliceLimitError(
            f"max_depth {max_depth} exceeds depth cap {depth_cap}; "
            "raise depth_cap explicitly if this is intended"
        )

    n = d.rank
    slice_ = RootSlice(d, max_depth)
    eye = np.eye(n)
    slice_._append(
        eye,
        np.zeros(n, dtype=np.int32),
        np.full(n, -1, dtype=np.int64),
        np.full(n, -1, dtype=np.int32),
        np.arange(n, dtype=np.int32),
    )

    frontier = np.arange(n)
    tol = d.tolerance
    for depth in range(1, max_depth + 1):
        if frontier.size == 0:
            break
        base_coords = slice_._coords[frontier]
        images: list[np.ndarray] = []
        keeps: list[np.ndarray] = []
        keys: list[np.ndarray] = []
        for letter in range(n):
            img = base_coords.copy()
            img[:, letter] -= 2.0 * (base_coords @ d.gram[:, letter])
            images.append(img)
            keeps.append((img.min(axis=1) >= -tol) & (img.max(axis=1) > tol))
            keys.append(np.round(img / DEDUP_GRID).astype(np.int64))
        new_coords: list[np.ndarray] = []
        new_parents: list[int] = []
        new_letters: list[int] = []
        new_seeds: list[int] = []
        claimed: set[bytes] = set()
        for row in range(base_coords.shape[0]):
            for letter in range(n):
                if not keeps[letter][row]:
                    continue
                key = keys[letter][row].tobytes()
                if key in slice_.lookup or key in claimed:
                    continue
                claimed.add(key)
                new_coords.append(images[letter][row])
                new_parents.append(int(frontier[row]))
                new_letters.append(letter)
                new_seeds.append(int(slice_._seeds[frontier[row]]))
        if not new_coords:
            break
        if len(slice_) + len(new_coords) > max_roots:
            raise SliceLimitError(
                f"root count would exceed the cap of {max_roots} at depth {depth}"
            )
        start = len(slice_)
        slice_._append(
            np.array(new_coords),
            np.full(len(new_coords), depth, dtype=np.int32),
            np.array(new_parents, dtype=np.int64),
            np.array(new_letters, dtype=np.int32),
            np.array(new_seeds, dtype=np.int32),
        )
        frontier = np.arange(start, len(slice_))
    return slice_


@dataclass(frozen=True)
class InversionSet:
    """N(w) together with whether the word was reduced."""

    roots: tuple[np.ndarray, ...]
    reduced: bool

    def __len__(self) -> int:
        return len(self.roots)


def inversion_set(d: CoxeterDatum, word: Iterable[int]) -> InversionSet:
    """Positive roots sent negative by ``word``, built along its prefixes.

    Appending a letter ``s = r_a`` to ``w`` either inserts the simple root
    ``a`` (when ``a`` is not yet an inversion) or cancels it; the rest of
    the set is reflected by ``s``.  The word is reduced iff no cancellation
    ever happens, in which case ``len(N(w))`` equals the word length.
    """
    current: list[np.ndarray] = []
    reduced = True
    for letter in word:
        alpha = d.simple_root(letter)
        kept: list[np.ndarray] = []
        cancelled = False
        for x in current:
            if abs(x[letter] - 1.0) <= d.tolerance and np.max(
                np.abs(x - alpha)
            ) <= d.tolerance:
                cancelled = True
                continue
            kept.append(simple_reflect(d, letter, x))
        if cancelled:
            reduced = False
            current = kept
        else:
            current = kept + [alpha]
    return InversionSet(tuple(current), reduced)


def support(x: Root | Sequence[float], tolerance: float = 1e-9) -> tuple[int, ...]:
    """Indices of the simple roots appearing in ``x`` with nonzero coefficient."""
    if isinstance(x, Root):
        return x.support(tolerance)
    coords = np.asarray(x, dtype=float)
    return tuple(int(i) for i in np.nonzero(np.abs(coords) > tolerance)[0])


def full_support_root(
    d: CoxeterDatum,
    start: int | None = None,
    order: Sequence[int] | None = None,
) -> Root:
    """A positive root supported on every simple root, built inductively.

    Starting from one simple root, repeatedly pick a simple root outside
    the current support pairing strictly negatively with some supported
    one, and reflect by it; each step grows the support by exactly one.
    Requires a connected Coxeter graph.  ``start`` picks the seed simple
    root and ``order`` a preferred sequence of reflection choices; defaults
    are the smallest admissible indices.
    """
    from .datum import is_connected

    if not is_connected(d, range(d.rank)):
        raise ValueError("full-support root needs a connected Coxeter graph")

    seed = 0 if start is None else int(start)
    coords = d.simple_root(seed)
    word: list[int] = []
    preferred = [int(i) for i in order] if order is not None else []
    while True:
        supp = set(support(coords, d.tolerance))
        if len(supp) == d.rank:
            break
        candidates = [
            beta
            for beta in range(d.rank)
            if beta not in supp
            and any(d.gram[beta, gamma] < -d.tolerance for gamma in supp)
        ]
        choice = None
        for beta in preferred:
            if beta in candidates:
                choice = beta
                break
        if choice is None:
            choice = min(candidates)
        coords = simple_reflect(d, choice, coords)
        word.insert(0, choice)
    return Root(coords=coords, sign=1, depth=len(word), witness=tuple(word), seed=seed)
