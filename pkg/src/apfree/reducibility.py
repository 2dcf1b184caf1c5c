"""Non-mid-points, peeling, and reducibility certificates.

A point y of S is a non-mid-point when no two distinct x, z in S satisfy
x + z = 2y. Repeatedly deleting non-mid-points either empties S (S is
reducible) or gets stuck on a core where every point is a midpoint. The
stuck cores are closed under union, so the terminal core does not depend
on the order of deletions.
"""
from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .geometry import UnitPoint, g, in_T, phi, reduce_mod1
from .zm import DENSE_TABLE_BUDGET, GridPoint, InputError, SiteSet, reflect

ORACLE_MAX_SIZE = 20

STRATEGIES = ("lexicographic", "sorted_potential", "random", "relaxed")


class PreconditionError(InputError):
    pass


class CertificateError(RuntimeError):
    """A peel step that should be legal turned out not to be."""


class MidpointIndex:
    """Per-point counts of unordered pairs {x, z}, x != z, with x + z = 2y.

    Pair sums are tallied in a histogram keyed by the mixed-radix code of
    x + z; the count of y is the tally at the code of 2y, so cousins share
    a count. Deleting p subtracts the sums p + z over the remaining z.
    """

    def __init__(self, S: SiteSet):
        self.m, self.d = S.m, S.d
        self.points: Tuple[GridPoint, ...] = S.points
        self._pos = {p: i for i, p in enumerate(self.points)}
        self._arr = S.as_array()
        self.weights = np.array([self.m ** (self.d - 1 - i) for i in range(self.d)], dtype=np.int64)
        self.alive = np.ones(len(self.points), dtype=bool)
        self.dbl = (2 * self._arr % self.m) @ self.weights if len(self.points) else np.zeros(0, np.int64)
        cells = self.m ** self.d
        self._dense = cells <= DENSE_TABLE_BUDGET
        self.hist = np.zeros(cells, dtype=np.int64) if self._dense else Counter()
        for i in range(len(self.points) - 1):
            self._tally(i, np.arange(i + 1, len(self.points)), +1)

    def _tally(self, i: int, js: np.ndarray, sign: int) -> None:
        if js.size == 0:
            return
        keys = ((self._arr[i] + self._arr[js]) % self.m) @ self.weights
        if self._dense:
            np.add.at(self.hist, keys, sign)
        else:
            for k in keys.tolist():
                self.hist[k] += sign

    def __len__(self) -> int:
        return int(self.alive.sum())

    def __contains__(self, p) -> bool:
        i = self._pos.get(tuple(p))
        return i is not None and bool(self.alive[i])

    def current(self) -> List[GridPoint]:
        return [p for p, a in zip(self.points, self.alive) if a]

    def counts(self) -> np.ndarray:
        """Representation counts aligned with ``self.points`` (dead entries meaningless)."""
        if self._dense:
            return self.hist[self.dbl]
        return np.array([self.hist[k] for k in self.dbl.tolist()], dtype=np.int64)

    def count(self, p) -> int:
        i = self._pos[tuple(p)]
        if not self.alive[i]:
            raise KeyError(p)
        k = int(self.dbl[i])
        return int(self.hist[k])

    def zero_indices(self) -> np.ndarray:
        return np.flatnonzero(self.alive & (self.counts() == 0))

    def remove(self, p) -> None:
        i = self._pos[tuple(p)]
        if not self.alive[i]:
            raise KeyError(p)
        self.alive[i] = False
        self._tally(i, np.flatnonzero(self.alive), -1)

    def recount(self) -> Dict[GridPoint, int]:
        """From-scratch counts for the live points, by direct pair enumeration."""
        return representation_counts(SiteSet(self.m, self.d, tuple(self.current())))


def representation_counts(S: SiteSet) -> Dict[GridPoint, int]:
    """Brute-force count of unordered distinct pairs {x, z} with x + z = 2y, per y."""
    m = S.m
    out = {y: 0 for y in S}
    for x, z in itertools.combinations(S.points, 2):
        s = tuple((a + b) % m for a, b in zip(x, z))
        for y in S.points:
            if tuple((2 * c) % m for c in y) == s:
                out[y] += 1
    return out


def non_mid_points(S: SiteSet) -> SiteSet:
    if len(S) == 0:
        return S
    idx = MidpointIndex(S)
    return SiteSet(S.m, S.d, tuple(S.points[i] for i in idx.zero_indices()))


def end_point_counts(S: SiteSet) -> Dict[GridPoint, int]:
    """For each y, the number of progressions y, w, 2w - y inside S (y an end term)."""
    out = {}
    for y in S.points:
        out[y] = sum(
            1
            for w in S.points
            if w != y and (z := reflect(S.m, w, y)) != y and z in S
        )
    return out


@dataclass
class PeelCertificate:
    m: int
    d: int
    strategy: str
    removed: List[GridPoint]
    core: List[GridPoint]
    seed: Optional[int] = None
    context: dict = field(default_factory=dict)

    @property
    def reducible(self) -> bool:
        return not self.core

    def original(self) -> SiteSet:
        return SiteSet.from_points(self.m, self.d, list(self.removed) + list(self.core))

    def to_dict(self) -> dict:
        out = {
            "strategy": self.strategy,
            "seed": self.seed,
            "m": self.m,
            "d": self.d,
            "removed": [list(p) for p in self.removed],
            "core": [list(p) for p in self.core],
        }
        if self.context:
            out["context"] = self.context
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, obj: dict) -> "PeelCertificate":
        try:
            return cls(
                m=int(obj["m"]),
                d=int(obj["d"]),
                strategy=str(obj["strategy"]),
                removed=[tuple(int(c) for c in p) for p in obj["removed"]],
                core=[tuple(int(c) for c in p) for p in obj["core"]],
                seed=obj.get("seed"),
                context=obj.get("context") or {},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc!r}") from None


def _potential_key(m: int, alpha, beta):
    def key(p):
        u = phi(m, alpha, beta, p)
        return (u.a + u.b, g(u.a), u.a, u.b)

    return key


def greedy_peel(
    S: SiteSet,
    strategy: str = "lexicographic",
    seed: Optional[int] = None,
    alpha=None,
    beta=None,
) -> PeelCertificate:
    """Peel non-mid-points until none is left.

    ``lexicographic`` always removes the least current non-mid-point;
    ``random`` picks uniformly among them with a seeded generator;
    ``sorted_potential`` needs ``alpha`` and ``beta`` such that phi maps S
    into T, and removes points in increasing (a+b, g(a), a, b) order of
    their images, checking each one is a non-mid-point at its turn.
    """
    if strategy == "relaxed":
        return relaxed_peel(S)
    if strategy not in ("lexicographic", "random", "sorted_potential"):
        raise InputError(f"unknown strategy {strategy!r}")
    removed: List[GridPoint] = []
    context = {}
    if len(S) == 0:
        return PeelCertificate(S.m, S.d, strategy, [], [], seed)
    idx = MidpointIndex(S)

    if strategy == "sorted_potential":
        if alpha is None or beta is None or S.d != 2:
            raise PreconditionError("sorted_potential needs alpha, beta and a set in Z_m^2")
        alpha, beta = Fraction(alpha), Fraction(beta)
        outside = [p for p in S if not in_T(phi(S.m, alpha, beta, p))]
        if outside:
            raise PreconditionError(f"phi image of {outside[0]} is not in T")
        for p in sorted(S.points, key=_potential_key(S.m, alpha, beta)):
            if idx.count(p) != 0:
                raise CertificateError(f"{p} is a midpoint when its turn comes")
            idx.remove(p)
            removed.append(p)
        context = {"alpha": f"{alpha.numerator}/{alpha.denominator}",
                   "beta": f"{beta.numerator}/{beta.denominator}"}
        return PeelCertificate(S.m, S.d, strategy, removed, [], None, context)

    rng = random.Random(seed) if strategy == "random" else None
    while True:
        zeros = idx.zero_indices()
        if zeros.size == 0:
            break
        i = int(zeros[0]) if rng is None else int(rng.choice(zeros.tolist()))
        p = idx.points[i]
        idx.remove(p)
        removed.append(p)
    return PeelCertificate(S.m, S.d, strategy, removed, idx.current(), seed if rng else None)


def is_reducible(S: SiteSet) -> bool:
    return greedy_peel(S).reducible


def terminal_core(S: SiteSet) -> SiteSet:
    return SiteSet(S.m, S.d, tuple(greedy_peel(S).core))


def relaxed_peel(S: SiteSet) -> PeelCertificate:
    """Peel points that are not a middle term, or not an end term, of any progression.

    Middle-term removals are preferred; ties go to the least point.
    Experimental: a relaxed certificate does not license lifting.
    """
    current = S
    removed: List[GridPoint] = []
    while len(current):
        nm = non_mid_points(current)
        if len(nm):
            p = nm.points[0]
        else:
            ends = end_point_counts(current)
            free = [y for y in current.points if ends[y] == 0]
            if not free:
                break
            p = free[0]
        removed.append(p)
        current = current.without([p])
    return PeelCertificate(S.m, S.d, "relaxed", removed, list(current.points))


def verify_certificate(cert: PeelCertificate) -> Tuple[bool, str]:
    """Replay a certificate. Returns (ok, reason)."""
    all_pts = list(cert.removed) + list(cert.core)
    if len(set(all_pts)) != len(all_pts):
        return False, "duplicate points in certificate"
    try:
        S = cert.original()
    except InputError as exc:
        return False, str(exc)
    if len(S) != len(all_pts):
        return False, "points not reduced modulo m"
    relaxed = cert.strategy == "relaxed"
    if not relaxed and cert.strategy not in ("lexicographic", "random", "sorted_potential"):
        return False, f"unknown strategy {cert.strategy!r}"
    idx = MidpointIndex(S)
    for step, p in enumerate(cert.removed):
        if idx.count(p) == 0:
            idx.remove(p)
            continue
        if relaxed:
            cur = SiteSet(S.m, S.d, tuple(idx.current()))
            if end_point_counts(cur)[p] == 0:
                idx.remove(p)
                continue
        return False, f"step {step}: {list(p)} is not removable"
    if cert.core:
        counts = idx.counts()
        cur = SiteSet(S.m, S.d, tuple(idx.current()))
        ends = end_point_counts(cur) if relaxed else None
        for i in np.flatnonzero(idx.alive):
            p = idx.points[i]
            if counts[i] == 0 or (relaxed and ends[p] == 0):
                return False, f"core point {list(p)} is still removable"
    return True, "ok"


def exhaustive_reducibility_oracle(S: SiteSet, max_size: int = ORACLE_MAX_SIZE) -> bool:
    """Check every non-empty subset for a non-mid-point, straight from the definition.

    Subsets are bitmasks over the points of S. For each y, the pairs
    {x, z} with x + z = 2y become masks; y is a non-mid-point of a subset
    U containing it iff no such pair mask lies inside U.
    """
    k = len(S)
    if k > max_size:
        raise InputError(f"oracle refuses |S| = {k} > {max_size} (2^|S| subsets)")
    if k == 0:
        return True
    m = S.m
    pts = S.points
    doubled = [tuple((2 * c) % m for c in p) for p in pts]
    pair_masks: List[List[int]] = [[] for _ in range(k)]
    for i, j in itertools.combinations(range(k), 2):
        s = tuple((a + b) % m for a, b in zip(pts[i], pts[j]))
        for y in range(k):
            if doubled[y] == s:
                pair_masks[y].append((1 << i) | (1 << j))
    subsets = np.arange(1, 1 << k, dtype=np.int64)
    has_free = np.zeros(subsets.shape, dtype=bool)
    for y in range(k):
        free = (subsets >> y) & 1 == 1
        for pm in pair_masks[y]:
            free &= (subsets & pm) != pm
        has_free |= free
    return bool(has_free.all())


# Mod-1 midpoints on the torus.

def unit_non_mid_points(P: Sequence[UnitPoint]) -> List[UnitPoint]:
    """Members y of P with no distinct x, z in P such that 2y = x + z mod 1."""
    pts = list(dict.fromkeys(P))
    sums = set()
    for x, z in itertools.combinations(pts, 2):
        sums.add((reduce_mod1(x[0] + z[0]), reduce_mod1(x[1] + z[1])))
    return [y for y in pts if (reduce_mod1(2 * y[0]), reduce_mod1(2 * y[1])) not in sums]


def select_mu_nu_point(P: Sequence[UnitPoint]) -> UnitPoint:
    """The point minimizing (a + b, g(a)), ties broken by (a, b).

    For a finite non-empty subset of T this point is a mod-1 non-mid-point.
    """
    P = list(P)
    if not P:
        raise PreconditionError("select_mu_nu_point needs a non-empty set")
    for p in P:
        if not in_T(p):
            raise PreconditionError(f"{p} is not in T")
    return min(P, key=lambda p: (p[0] + p[1], g(p[0]), p[0], p[1]))
