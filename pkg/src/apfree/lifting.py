"""Balanced-tuple lifting of a reducible block into Z_m^n.

Given a reducible S in Z_m^d and a repetition count l, the lifted set
consists of all sequences (w_1, ..., w_{l|S|}) of block points in which
every point of S occurs exactly l times, flattened into Z_m^{n'} with
n' = d * |S| * l and padded with zeros up to the target dimension n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .reducibility import PeelCertificate, greedy_peel, verify_certificate
from .zm import BudgetError, GridPoint, InputError, SiteSet, find_three_term_progression

# Rational upper bound on e^2 = 7.389..., so bounds built with it stay valid.
E_SQUARED_WITNESS = Fraction(361, 48)

DEFAULT_ENUM_BUDGET = 10**6
DEFAULT_PAIR_BUDGET = 10**12


class UncertifiedBlockError(InputError):
    pass


def lift_size(S_size: int, ell: int) -> int:
    """The multinomial (ell*|S|)! / (ell!)^|S|."""
    if S_size < 1 or ell < 1:
        raise InputError("lift_size needs |S| >= 1 and ell >= 1")
    return math.factorial(ell * S_size) // math.factorial(ell) ** S_size


@dataclass(frozen=True)
class LiftBounds:
    size: int
    crude: Fraction
    # careful bound |S|^(l|S|) / (e^2 l)^((|S|-1)/2), with e^2 replaced by the witness
    careful_squared: Fraction
    careful: Fraction  # exact when |S| is odd, otherwise a rational lower bound
    careful_exact: bool


def lift_bounds(S_size: int, ell: int, d: int = 1) -> LiftBounds:
    if S_size < 1:
        raise InputError("bounds need |S| >= 1")
    if ell < 1 or d < 1:
        raise InputError("ell and d must be positive")
    s = S_size
    size = lift_size(s, ell)
    crude = Fraction(s ** (ell * s), (ell * s + 1) ** s)
    base = E_SQUARED_WITNESS * ell
    squared = Fraction(s ** (2 * ell * s)) / base ** (s - 1)
    if (s - 1) % 2 == 0:
        careful = Fraction(s ** (ell * s)) / base ** ((s - 1) // 2)
        exact = True
    else:
        p, q = squared.numerator, squared.denominator
        careful = Fraction(math.isqrt(p * q), q)
        exact = False
    if size < crude:
        raise ArithmeticError(f"multinomial {size} below crude bound {crude}")
    if size * size < squared:
        raise ArithmeticError(f"multinomial {size} below careful bound")
    return LiftBounds(size, crude, squared, careful, exact)


@dataclass
class LiftSpec:
    S: SiteSet
    ell: int
    n: Optional[int] = None
    certificate: Optional[PeelCertificate] = None
    override: bool = False

    def __post_init__(self):
        if self.ell < 1:
            raise InputError("ell must be a positive integer")
        if len(self.S) < 1:
            raise InputError("cannot lift an empty block")
        if self.n is None:
            self.n = self.n_prime
        if self.n < self.n_prime:
            raise InputError(f"n = {self.n} is smaller than d*|S|*ell = {self.n_prime}")

    @property
    def n_prime(self) -> int:
        return self.S.d * len(self.S) * self.ell

    @property
    def padding(self) -> int:
        return self.n - self.n_prime

    @property
    def size(self) -> int:
        return lift_size(len(self.S), self.ell)


def check_certified(spec: LiftSpec) -> PeelCertificate:
    """Return a strict certificate with empty core for spec.S, or refuse."""
    cert = spec.certificate
    if cert is None:
        cert = greedy_peel(spec.S)
    else:
        ok, why = verify_certificate(cert)
        if not ok:
            raise UncertifiedBlockError(f"certificate does not replay: {why}")
        if cert.original() != spec.S:
            raise UncertifiedBlockError("certificate is for a different set")
    if spec.override:
        return cert
    if cert.strategy == "relaxed":
        raise UncertifiedBlockError("relaxed certificates do not license lifting")
    if cert.core:
        raise UncertifiedBlockError(f"block is not reducible (core of size {len(cert.core)})")
    return cert


def balanced_sequences(k: int, ell: int) -> Iterator[Tuple[int, ...]]:
    """Every sequence using each of 0..k-1 exactly ell times, in lexicographic order."""
    counts = [ell] * k
    seq: List[int] = []
    total = k * ell

    def rec():
        if len(seq) == total:
            yield tuple(seq)
            return
        for i in range(k):
            if counts[i]:
                counts[i] -= 1
                seq.append(i)
                yield from rec()
                seq.pop()
                counts[i] += 1

    return rec()


def enumerate_lift(spec: LiftSpec, budget: int = DEFAULT_ENUM_BUDGET) -> Iterator[GridPoint]:
    size = spec.size
    if size > budget:
        raise BudgetError(f"lift has {size} points, budget is {budget}")
    check_certified(spec)
    blocks = spec.S.points
    pad = (0,) * spec.padding
    for seq in balanced_sequences(len(blocks), spec.ell):
        vec: Tuple[int, ...] = ()
        for i in seq:
            vec += blocks[i]
        yield vec + pad


def lifted_set(spec: LiftSpec, budget: int = DEFAULT_ENUM_BUDGET) -> SiteSet:
    return SiteSet.from_points(spec.S.m, spec.n, enumerate_lift(spec, budget))


@dataclass
class LiftReport:
    m: int
    d: int
    block_size: int
    ell: int
    n: int
    n_prime: int
    padding: int
    size: int
    bounds: Optional[LiftBounds]
    progression: Optional[Tuple[GridPoint, GridPoint, GridPoint]]

    @property
    def progression_free(self) -> bool:
        return self.progression is None

    def to_dict(self) -> dict:
        out = {
            "m": self.m,
            "d": self.d,
            "block_size": self.block_size,
            "ell": self.ell,
            "n": self.n,
            "n_prime": self.n_prime,
            "padding": self.padding,
            "size": self.size,
            "progression_free": self.progression_free,
            "witness": [list(p) for p in self.progression] if self.progression else None,
        }
        if self.bounds is not None:
            out["crude_bound"] = f"{self.bounds.crude.numerator}/{self.bounds.crude.denominator}"
            out["careful_bound"] = f"{self.bounds.careful.numerator}/{self.bounds.careful.denominator}"
            out["careful_bound_exact"] = self.bounds.careful_exact
        return out


def certify_lift(
    spec: LiftSpec,
    budget: int = DEFAULT_ENUM_BUDGET,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> LiftReport:
    size = spec.size
    if size * size > pair_budget:
        raise BudgetError(f"{size}^2 pair checks exceed budget {pair_budget}")
    A = lifted_set(spec, budget)
    if len(A) != size:
        raise RuntimeError(f"enumerated {len(A)} vectors, expected {size}")
    bounds = lift_bounds(len(spec.S), spec.ell, spec.S.d) if len(spec.S) else None
    return LiftReport(
        m=spec.S.m,
        d=spec.S.d,
        block_size=len(spec.S),
        ell=spec.ell,
        n=spec.n,
        n_prime=spec.n_prime,
        padding=spec.padding,
        size=size,
        bounds=bounds,
        progression=find_three_term_progression(A),
    )


def format_vectors(points: Sequence[Sequence[int]]) -> str:
    return "".join(" ".join(map(str, p)) + "\n" for p in points)


def parse_vectors(text: str, m: int) -> SiteSet:
    """Read the line-per-vector text format back into a SiteSet."""
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows:
        raise InputError("no vectors in input")
    d = len(rows[0])
    try:
        pts = [tuple(int(c) for c in r) for r in rows]
    except ValueError as exc:
        raise InputError(f"bad vector line: {exc}") from None
    if any(len(p) != d for p in pts):
        raise InputError("vectors of differing length")
    if any(not 0 <= c < m for p in pts for c in p):
        raise InputError(f"coordinates must lie in [0, {m})")
    if len(set(pts)) != len(pts):
        raise InputError("duplicate vectors")
    return SiteSet(m, d, tuple(sorted(pts)))
