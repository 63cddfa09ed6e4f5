"""Coxeter datum: bond labels, Gram matrix and the Coxeter graph.

A datum is described by a rank ``n`` and a symmetric table of bond labels
``m[i][j]``.  Finite labels ``m >= 2`` contribute a Gram entry
``-cos(pi/m)``; infinite bonds carry an explicit real value ``c <= -1``.
The simple roots are always realized as the standard basis of R^n, so the
positive cone condition holds by construction.

Datum file format (line oriented, ``#`` starts a comment)::

    rank <n>
    bond <i> <j> <m>        # integer m >= 2 (m == 2 is a redundant no-op)
    bond <i> <j> inf [c]    # infinite bond, optional real c <= -1 (default -1)
    name <i> <label>        # optional display name for a simple root

Unlisted pairs have ``m = 2`` (orthogonal simple roots).  Indices are
0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DatumError

DEFAULT_TOLERANCE = 1e-9

Bond = tuple  # (i, j, m) with m an int >= 2, or (i, j, "inf") / (i, j, "inf", c)


@dataclass(frozen=True, eq=False)
class CoxeterDatum:
    """Immutable numerical realization of a Coxeter system.

    ``labels[i][j]`` is the bond label (``inf`` encoded as ``math.inf``),
    ``gram`` the bilinear form on the standard basis.  All operations in
    this package are pure functions of a datum, so instances are safe to
    share between threads.
    """

    rank: int
    labels: np.ndarray
    gram: np.ndarray
    names: tuple[str, ...]
    tolerance: float = DEFAULT_TOLERANCE

    def name(self, i: int) -> str:
        return self.names[i]

    def simple_root(self, i: int) -> np.ndarray:
        e = np.zeros(self.rank)
        e[i] = 1.0
        return e

    def bilinear(self, u: Sequence[float], v: Sequence[float]) -> float:
        return bilinear(self, u, v)


def _default_names(rank: int) -> tuple[str, ...]:
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    if rank <= len(alphabet):
        return tuple(alphabet[:rank])
    return tuple(f"x{i}" for i in range(rank))


def coxeter_datum(
    rank: int,
    bonds: Iterable[Bond] = (),
    names: Sequence[str] | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CoxeterDatum:
    """Build and validate a datum from a bond list.

    Each bond is ``(i, j, m)`` with an integer ``m >= 2``, or
    ``(i, j, "inf")`` / ``(i, j, "inf", c)`` for an infinite bond with
    Gram value ``c <= -1`` (default -1).
    """
    if rank < 1:
        raise DatumError(f"rank must be a positive integer, got {rank}")
    if tolerance <= 0:
        raise DatumError("tolerance must be positive")

    labels = np.full((rank, rank), 2.0)
    np.fill_diagonal(labels, 1.0)
    gram = np.eye(rank)
    seen: set[tuple[int, int]] = set()

    for bond in bonds:
        if len(bond) not in (3, 4):
            raise DatumError(f"malformed bond {bond!r}")
        i, j = int(bond[0]), int(bond[1])
        if not (0 <= i < rank and 0 <= j < rank) or i == j:
            raise DatumError(f"bond indices out of range: {bond!r}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DatumError(f"duplicate bond between {i} and {j}")
        seen.add(key)
        m = bond[2]
        if m in ("inf", math.inf):
            c = float(bond[3]) if len(bond) == 4 else -1.0
            if c > -1.0:
                raise DatumError(
                    f"infinite bond ({i},{j}) needs a Gram value <= -1, got {c}"
                )
            labels[i, j] = labels[j, i] = math.inf
            gram[i, j] = gram[j, i] = c
        else:
            if len(bond) == 4:
                raise DatumError(f"finite bond {bond!r} does not take a Gram value")
            m = int(m)
            if m < 2:
                raise DatumError(f"bond label must be >= 2, got {m}")
            labels[i, j] = labels[j, i] = float(m)
            gram[i, j] = gram[j, i] = -math.cos(math.pi / m)

    resolved = tuple(names) if names is not None else _default_names(rank)
    if len(resolved) != rank:
        raise DatumError("names must list one label per simple root")

    labels.setflags(write=False)
    gram.setflags(write=False)
    return CoxeterDatum(rank, labels, gram, resolved, tolerance)


def parse_datum(text: str, tolerance: float = DEFAULT_TOLERANCE) -> CoxeterDatum:
    """Parse the datum file format into a validated CoxeterDatum."""
    rank: int | None = None
    bonds: list[Bond] = []
    names: dict[int, str] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0].lower()
        try:
            if kind == "rank":
                if rank is not None:
                    raise DatumError("rank declared twice")
                rank = int(parts[1])
            elif kind == "bond":
                if rank is None:
                    raise DatumError("bond before rank declaration")
                i, j = int(parts[1]), int(parts[2])
                if parts[3].lower() in ("inf", "infinity", "oo"):
                    if len(parts) == 5:
                        bonds.append((i, j, "inf", float(parts[4])))
                    elif len(parts) == 4:
                        bonds.append((i, j, "inf"))
                    else:
                        raise DatumError("too many fields on bond line")
                else:
                    if len(parts) != 4:
                        raise DatumError("finite bond takes exactly one label")
                    bonds.append((i, j, int(parts[3])))
            elif kind == "name":
                names[int(parts[1])] = parts[2]
            else:
                raise DatumError(f"unknown directive {parts[0]!r}")
        except DatumError:
            raise
        except (IndexError, ValueError) as exc:
            raise DatumError(f"line {lineno}: cannot parse {raw!r}") from exc

    if rank is None:
        raise DatumError("missing rank declaration")
    for i in names:
        if not 0 <= i < rank:
            raise DatumError(f"name index {i} out of range")

    resolved = list(_default_names(rank))
    for i, label in names.items():
        resolved[i] = label
    return coxeter_datum(rank, bonds, resolved, tolerance)


def load_datum(path, tolerance: float = DEFAULT_TOLERANCE) -> CoxeterDatum:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_datum(fh.read(), tolerance)


def bilinear(d: CoxeterDatum, u: Sequence[float], v: Sequence[float]) -> float:
    """The symmetric bilinear form u^T . gram . v."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (d.rank,) or v.shape != (d.rank,):
        raise ValueError(
            f"expected vectors of length {d.rank}, got {u.shape} and {v.shape}"
        )
    return float(u @ d.gram @ v)


def graph_components(
    d: CoxeterDatum, members: Iterable[int]
) -> list[tuple[int, ...]]:
    """Connected components of the Coxeter graph restricted to ``members``.

    Two vertices are adjacent iff their Gram entry is nonzero within the
    datum tolerance.  Components are returned sorted by smallest member,
    each as a sorted tuple.
    """
    members = sorted(set(int(i) for i in members))
    for i in members:
        if not 0 <= i < d.rank:
            raise ValueError(f"simple root index {i} out of range")
    unvisited = set(members)
    components: list[tuple[int, ...]] = []
    while unvisited:
        start = min(unvisited)
        component = {start}
        frontier = [start]
        unvisited.discard(start)
        while frontier:
            i = frontier.pop()
            for j in list(unvisited):
                if abs(d.gram[i, j]) > d.tolerance:
                    unvisited.discard(j)
                    component.add(j)
                    frontier.append(j)
        components.append(tuple(sorted(component)))
    components.sort(key=lambda c: c[0])
    return components


def is_connected(d: CoxeterDatum, members: Iterable[int]) -> bool:
    members = list(members)
    if not members:
        return False
    return len(graph_components(d, members)) == 1
