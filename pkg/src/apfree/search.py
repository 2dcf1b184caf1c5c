"""Parameter search over (alpha, beta), baseline blocks, and comparison tables.

The count c(alpha, beta) = |phi^{-1}(T)| is piecewise constant. Its jumps
happen when an image point crosses a boundary line of T; in the
(alpha, beta) plane those are lines alpha = k/(2m), beta = k/(2m),
alpha + beta = k/(12m) and 2 alpha + beta = k/(12m) for integers k. The
count is also periodic with period 1/m in each parameter (shifting alpha
by 1/m relabels q), so only [0, 1/m)^2 needs to be searched.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .geometry import format_rational, phi_preimage_T, preimage_count_scaled
from .zm import InputError, SiteSet

DEFAULT_REFINE_DEPTH = 4


def threshold(m: int) -> Fraction:
    return Fraction(7 * m * m, 24)


def threshold_count(m: int) -> int:
    """Least integer count c with 24c >= 7m^2."""
    return -(-7 * m * m // 24)


@dataclass
class SearchResult:
    m: int
    alpha: Fraction
    beta: Fraction
    count: int
    step: Fraction
    levels: int
    exhaustive: bool
    wall_time: float
    success: bool = field(init=False)

    def __post_init__(self):
        self.success = 24 * self.count >= 7 * self.m * self.m

    @property
    def threshold(self) -> Fraction:
        return threshold(self.m)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "alpha": format_rational(self.alpha),
            "beta": format_rational(self.beta),
            "count": self.count,
            "threshold": format_rational(self.threshold),
            "success": self.success,
            "grid": {
                "step": format_rational(self.step),
                "levels": self.levels,
                "exhaustive": self.exhaustive,
            },
            "wall_time": round(self.wall_time, 6),
        }


def _level_grid(m: int, step: Fraction) -> Tuple[np.ndarray, int]:
    """Numerators over a common denominator for the midpoints (2j+1)*step/2 in [0, 1/m)."""
    cells = Fraction(1, m) / step
    if cells.denominator != 1:
        raise InputError(f"step {step} must divide 1/{m}")
    den = math.lcm(2 * step.denominator, m)
    scale = den // (2 * step.denominator)
    nums = step.numerator * scale * (2 * np.arange(int(cells), dtype=np.int64) + 1)
    return nums, den


def grid_search_alpha_beta(
    m: int,
    step=None,
    exhaustive: bool = False,
    max_refine: int = DEFAULT_REFINE_DEPTH,
) -> SearchResult:
    """Search cell midpoints of a rational grid for (alpha, beta) with 24|phi^{-1}(T)| >= 7m^2.

    The default step is 1/(24m). Without ``exhaustive`` the search stops at
    the lexicographically first grid point reaching the threshold;
    otherwise it returns the least maximizer. If a level misses the
    threshold the step is halved, at most ``max_refine`` times; a result
    with ``success == False`` is returned when that budget runs out.
    """
    if not isinstance(m, int) or m < 1:
        raise InputError(f"m must be a positive integer, got {m!r}")
    start = time.perf_counter()
    step = Fraction(1, 24 * m) if step is None else Fraction(step)
    if step <= 0:
        raise InputError("step must be positive")
    target = threshold_count(m)
    best: Optional[Tuple[int, Fraction, Fraction]] = None
    level = 0
    while True:
        nums, den = _level_grid(m, step)
        for i, a_num in enumerate(nums):
            row = preimage_count_scaled(m, [a_num], nums, den)[0]
            j = int(np.argmax(row))
            c = int(row[j])
            if best is None or c > best[0]:
                best = (c, Fraction(int(a_num), den), Fraction(int(nums[j]), den))
            if not exhaustive and c >= target:
                break
        if best[0] >= target or level >= max_refine:
            break
        step /= 2
        level += 1
    count, alpha, beta = best
    recount = len(phi_preimage_T(m, alpha, beta))
    if recount != count:
        raise RuntimeError(f"vectorized count {count} != exact recount {recount} at ({alpha}, {beta})")
    return SearchResult(
        m, alpha, beta, count, step, level + 1, exhaustive, time.perf_counter() - start
    )


# Exact sweep of the breakpoint arrangement; an independent check on the grid search.

def arrangement_cells(m: int) -> Iterator[Tuple[Fraction, Fraction, Fraction, Fraction]]:
    """Yield (alpha, beta, d_alpha, d_beta) for a representative of every cell in [0, 1/m)^2.

    alpha runs over midpoints of the strips between multiples of 1/(24m),
    which contain every vertex abscissa of the arrangement. Inside a strip
    the lines are ordered the same way, so the beta breakpoints
    k/(12m) - c*alpha (c = 0, 1, 2) at the strip midpoint give one
    representative per cell.
    """
    period = Fraction(1, m)
    width = Fraction(1, 24 * m)
    for i in range(24):
        alpha = width * i + width / 2
        cuts = {Fraction(0), period}
        for c in (0, 1, 2):
            for k in range(12):
                v = Fraction(k, 12 * m) - c * alpha
                cuts.add(v - period * math.floor(v / period))
        ys = sorted(cuts)
        for lo, hi in zip(ys, ys[1:]):
            yield alpha, (lo + hi) / 2, width, hi - lo


def arrangement_average(m: int) -> Fraction:
    """Exact mean of |phi^{-1}(T)| over (alpha, beta) uniform on the torus.

    For fixed alpha the count is a step function of beta, so its beta
    integral is an exact sum; that integral is linear in alpha on each
    strip, so evaluating it at strip midpoints integrates exactly.
    """
    total = Fraction(0)
    for alpha, beta, da, db in arrangement_cells(m):
        total += da * db * len(phi_preimage_T(m, alpha, beta))
    return total * m * m


def arrangement_max(m: int) -> Tuple[int, Fraction, Fraction]:
    best = (-1, Fraction(0), Fraction(0))
    for alpha, beta, _, _ in arrangement_cells(m):
        c = len(phi_preimage_T(m, alpha, beta))
        if c > best[0]:
            best = (c, alpha, beta)
    return best


# Baseline blocks.

def box_set(m: int) -> SiteSet:
    """{0, ..., floor(m/2)}^2, of size floor((m+2)/2)^2."""
    if m < 1:
        raise InputError("m must be positive")
    h = m // 2
    return SiteSet(m, 2, tuple((q, r) for q in range(h + 1) for r in range(h + 1)))


def salem_spencer_digits(m: int) -> SiteSet:
    """The one-dimensional block {0, ..., (m-1)/2} of Z_m for odd m."""
    if m < 1 or m % 2 == 0:
        raise InputError(f"digit block needs an odd modulus, got {m}")
    return SiteSet(m, 1, tuple((i,) for i in range((m - 1) // 2 + 1)))


# Comparison table.

TABLE_COLUMNS = (
    "m", "box_size", "threshold", "searched_count", "alpha", "beta",
    "constant", "beats_box",
)


def bounds_table(m_max: int, m_min: int = 2, exhaustive: bool = True) -> List[dict]:
    if m_max < 2:
        raise InputError("m_max must be at least 2")
    rows = []
    for m in range(max(1, m_min), m_max + 1):
        res = grid_search_alpha_beta(m, exhaustive=exhaustive)
        box = ((m + 2) // 2) ** 2
        rows.append({
            "m": m,
            "box_size": box,
            "threshold": format_rational(threshold(m)),
            "searched_count": res.count,
            "alpha": format_rational(res.alpha),
            "beta": format_rational(res.beta),
            "constant": f"{math.sqrt(res.count) / m:.6f}",
            "beats_box": res.count > box,
        })
    return rows


def table_csv(rows: List[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: str(row[k]).lower() if isinstance(row[k], bool) else row[k]
                         for k in TABLE_COLUMNS})
    return buf.getvalue()


def table_json(rows: List[dict]) -> str:
    return json.dumps({"columns": list(TABLE_COLUMNS), "rows": rows}, separators=(",", ":"))
