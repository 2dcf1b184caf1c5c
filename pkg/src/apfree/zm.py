"""Exact arithmetic on Z_m^d and brute-force three-term progression search.

Points are plain tuples of residues. A :class:`SiteSet` is an immutable,
lexicographically sorted, duplicate-free collection of such tuples that
carries its modulus and dimension, so every operation can check that the
points it combines live in the same group.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

GridPoint = Tuple[int, ...]
Triple = Tuple[GridPoint, GridPoint, GridPoint]

# Dense membership tables are used only up to this many cells.
DENSE_TABLE_BUDGET = 1 << 24


class InputError(ValueError):
    """Malformed or mutually inconsistent input."""


class BudgetError(RuntimeError):
    """A requested enumeration or scan exceeds the configured budget."""


def _check_modulus(m: int) -> None:
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise InputError(f"modulus must be a positive integer, got {m!r}")


def make_point(m: int, coords: Iterable[int]) -> GridPoint:
    """Reduce ``coords`` modulo ``m`` and return them as a point."""
    _check_modulus(m)
    return tuple(int(c) % m for c in coords)


def _check_same(m: int, *points: Sequence[int]) -> None:
    _check_modulus(m)
    d = len(points[0])
    for p in points:
        if len(p) != d:
            raise InputError(f"dimension mismatch: {len(p)} vs {d}")
        for c in p:
            if not 0 <= c < m:
                raise InputError(f"coordinate {c} not reduced modulo {m}")


def add(m: int, x: GridPoint, y: GridPoint) -> GridPoint:
    return tuple((a + b) % m for a, b in zip(x, y))


def double(m: int, x: GridPoint) -> GridPoint:
    return tuple((2 * a) % m for a in x)


def reflect(m: int, y: GridPoint, x: GridPoint) -> GridPoint:
    """Return ``2y - x``, the third term of the progression starting x, y."""
    return tuple((2 * b - a) % m for a, b in zip(x, y))


def is_three_term_progression(m: int, x: GridPoint, y: GridPoint, z: GridPoint) -> bool:
    _check_same(m, x, y, z)
    if x == y or y == z or x == z:
        return False
    return all((a - 2 * b + c) % m == 0 for a, b, c in zip(x, y, z))


def is_cousin(m: int, x: GridPoint, y: GridPoint) -> bool:
    """True iff ``2x == 2y`` coordinatewise; for odd ``m`` this means ``x == y``."""
    _check_same(m, x, y)
    return double(m, x) == double(m, y)


@dataclass(frozen=True)
class SiteSet:
    """A finite subset of Z_m^d with exact membership lookup."""

    m: int
    d: int
    points: Tuple[GridPoint, ...]
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_modulus(self.m)
        if not isinstance(self.d, int) or self.d < 0:
            raise InputError(f"dimension must be a non-negative integer, got {self.d!r}")
        pts = tuple(tuple(int(c) for c in p) for p in self.points)
        for p in pts:
            if len(p) != self.d:
                raise InputError(f"point {p} does not have dimension {self.d}")
            for c in p:
                if not 0 <= c < self.m:
                    raise InputError(f"coordinate {c} of {p} not in [0, {self.m})")
        if list(pts) != sorted(set(pts)):
            raise InputError("points must be sorted lexicographically without duplicates")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_index", frozenset(pts))

    @classmethod
    def from_points(cls, m: int, d: int, points: Iterable[Iterable[int]]) -> "SiteSet":
        """Reduce, deduplicate and sort arbitrary coordinate lists."""
        _check_modulus(m)
        pts = {make_point(m, p) for p in points}
        return cls(m, d, tuple(sorted(pts)))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[GridPoint]:
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self._index

    def without(self, removed: Iterable[GridPoint]) -> "SiteSet":
        gone = set(map(tuple, removed))
        return SiteSet(self.m, self.d, tuple(p for p in self.points if p not in gone))

    def subset(self, keep: Iterable[GridPoint]) -> "SiteSet":
        return SiteSet.from_points(self.m, self.d, [p for p in keep if tuple(p) in self._index])

    def to_dict(self) -> dict:
        return {"m": self.m, "d": self.d, "points": [list(p) for p in self.points]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, obj: dict) -> "SiteSet":
        try:
            m, d, raw = obj["m"], obj["d"], obj["points"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"SiteSet JSON missing field: {exc}") from None
        if not isinstance(raw, list):
            raise InputError("'points' must be a list")
        return cls(m, d, tuple(tuple(p) for p in raw))

    @classmethod
    def from_json(cls, text: str) -> "SiteSet":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        return cls.from_dict(obj)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.int64).reshape(len(self.points), self.d)


def full_space(m: int, d: int) -> SiteSet:
    import itertools

    return SiteSet(m, d, tuple(itertools.product(range(m), repeat=d)))


class _KeyIndex:
    """Integer-keyed membership for a sorted point array.

    Keys are mixed-radix encodings with the first coordinate most
    significant, so lexicographic point order equals key order. A dense
    boolean table is used when m**d is small enough, otherwise a sorted
    key array with binary search.
    """

    def __init__(self, pts: np.ndarray, m: int, dense_budget: int = DENSE_TABLE_BUDGET):
        d = pts.shape[1]
        self.m = m
        self.weights = np.array([m ** (d - 1 - i) for i in range(d)], dtype=np.int64)
        self.keys = pts @ self.weights
        cells = m ** d
        self.table = None
        if cells <= dense_budget:
            self.table = np.zeros(cells, dtype=bool)
            self.table[self.keys] = True

    def encode(self, arr: np.ndarray) -> np.ndarray:
        return arr @ self.weights

    def contains(self, keys: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return self.table[keys]
        pos = np.searchsorted(self.keys, keys)
        pos[pos == len(self.keys)] = 0
        return self.keys[pos] == keys


def _scan(A: SiteSet):
    """Yield (x_index, y_indices) for every x, where each y gives a progression x, y, 2y-x."""
    m = A.m
    if len(A) < 3 or m == 1:
        return
    if m ** A.d < (1 << 62):
        pts = A.as_array()
        idx = _KeyIndex(pts, m)
        twice = 2 * pts
        for i in range(len(pts)):
            z = (twice - pts[i]) % m
            zkeys = idx.encode(z)
            hit = idx.contains(zkeys)
            hit[i] = False
            hit &= zkeys != idx.keys[i]
            js = np.flatnonzero(hit)
            if js.size:
                yield i, js
    else:
        members = A._index
        pts = A.points
        for i, x in enumerate(pts):
            js = [
                j
                for j, y in enumerate(pts)
                if j != i and (z := reflect(m, y, x)) != x and z in members
            ]
            if js:
                yield i, np.asarray(js)


def find_three_term_progression(A: SiteSet) -> Optional[Triple]:
    """Return the lexicographically least progression (x, y, z) in ``A``, or None.

    Scans ordered pairs (x, y) with x != y, setting z = 2y - x. The case
    z == x (x and y cousins, even m) is rejected; z == y cannot occur.
    """
    for i, js in _scan(A):
        x = A.points[i]
        y = A.points[int(js[0])]
        return x, y, reflect(A.m, y, x)
    return None


def count_three_term_progressions(A: SiteSet) -> int:
    """Number of progressions in ``A`` counted as unordered {x, z} with middle y."""
    total = sum(len(js) for _, js in _scan(A))
    # each progression is found as (x, y) and (z, y)
    return total // 2


def brute_force_progressions(A: SiteSet) -> list:
    """All ordered triples in A^3 that form a progression. Cubic; test oracle only."""
    m = A.m
    return [
        (x, y, z)
        for x in A.points
        for y in A.points
        for z in A.points
        if is_three_term_progression(m, x, y, z)
    ]
