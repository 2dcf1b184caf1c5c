"""Exhaustive checks of the structural properties of T on rational grids.

Points with denominator D are written as integer numerators over
N = 2D, so mod-1 midpoints (denominator 2D) stay on the same integer
lattice and every comparison is exact integer arithmetic. Membership in
T is taken from the Fraction-based definition, not from the vectorized
kernel.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List

import numpy as np

from .geometry import in_T, in_T1

DEFAULT_DENOMINATORS = (12, 24, 60, 120)


@dataclass
class FactResult:
    name: str
    denominator: int
    checked: int
    violations: int
    example: tuple = ()

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "fact": self.name,
            "denominator": self.denominator,
            "checked": self.checked,
            "violations": self.violations,
        }


def _membership_table(N: int):
    in_t = np.zeros((N, N), dtype=bool)
    in_t1 = np.zeros((N, N), dtype=bool)
    for i in range(N):
        a = Fraction(i, N)
        for j in range(N):
            p = (a, Fraction(j, N))
            if in_T(p):
                in_t[i, j] = True
                in_t1[i, j] = in_T1(p)
    return in_t, in_t1


class _Grid:
    def __init__(self, D: int):
        self.D = D
        self.N = N = 2 * D
        self.in_t, self.in_t1 = _membership_table(N)
        ii, jj = np.nonzero(self.in_t[::2, ::2])
        self.A = 2 * ii.astype(np.int64)
        self.B = 2 * jj.astype(np.int64)
        self.is_t1 = self.in_t1[self.A, self.B]

    def g(self, A):
        return np.where(2 * A < self.N, A, A - self.N // 2)


def _simple(grid: _Grid) -> List[FactResult]:
    N, A, B = grid.N, grid.A, grid.B
    S = A + B
    bad_i = ~((12 * S >= 7 * N) & (3 * S <= 4 * N))
    res = [FactResult("sum_range", grid.D, len(A), int(bad_i.sum()))]
    t1, t2 = grid.is_t1, ~grid.is_t1
    checked = bad = 0
    for s in np.unique(S):
        a1 = A[t1 & (S == s)]
        a2 = A[t2 & (S == s)]
        if len(a1) and len(a2):
            checked += len(a1) * len(a2)
            bad += int((a1[:, None] + a2[None, :] >= N).sum())
    res.append(FactResult("t1_t2_same_sum", grid.D, checked, bad))
    return res


def _pairwise(grid: _Grid) -> List[FactResult]:
    N, A, B = grid.N, grid.A, grid.B
    k = len(A)
    S = A + B
    G = grid.g(A)
    mid_checked = mid_bad = 0
    ap_checked = ap_bad = 0
    g_checked = g_bad = 0
    for i in range(k):
        # unordered pairs for the midpoint fact
        sa = A[i] + A[i:]
        ss = S[i] + S[i:]
        mid_checked += len(sa)
        mid_bad += int((3 * ss > 8 * N).sum())
        mid_bad += int(((sa >= N) & (12 * ss >= 26 * N)).sum())
        # ordered pairs (x, z) with every y such that 2y = x + z mod 1
        az, bz = A, B
        sx, sz = S[i], S
        for ha in (0, N // 2):
            ay = ((A[i] + az) // 2 + ha) % N
            for hb in (0, N // 2):
                by = ((B[i] + bz) // 2 + hb) % N
                hit = grid.in_t[ay, by]
                if not hit.any():
                    continue
                ys = ay + by
                ap_checked += int(hit.sum())
                ap_bad += int((hit & (2 * ys < sx + sz)).sum())
                same = hit & (sz == sx)
                if same.any():
                    gy = grid.g(ay[same])
                    gx, gz = G[i], G[same]
                    g_checked += int(same.sum())
                    g_bad += int((2 * gy < gx + gz).sum())
                    eq = (gy == gx) & (gz == gx)
                    g_bad += int((eq & ((az[same] != A[i]) | (bz[same] != B[i]))).sum())
    return [
        FactResult("midpoint_sum", grid.D, mid_checked, mid_bad),
        FactResult("ap_sum", grid.D, ap_checked, ap_bad),
        FactResult("g_property", grid.D, g_checked, g_bad),
    ]


def check_facts(denominators: Iterable[int] = DEFAULT_DENOMINATORS) -> List[FactResult]:
    """Run every fact on each grid and return one result per (fact, denominator)."""
    out: List[FactResult] = []
    for D in denominators:
        grid = _Grid(D)
        out.extend(_simple(grid))
        out.extend(_pairwise(grid))
    return out


def summarize(results: List[FactResult]) -> Dict[str, int]:
    totals: Dict[str, int] = {}
    for r in results:
        totals[r.name] = totals.get(r.name, 0) + r.violations
    return totals
