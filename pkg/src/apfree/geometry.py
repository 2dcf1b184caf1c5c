"""Exact rational geometry on the unit torus [0, 1)^2.

Everything that decides membership uses :class:`fractions.Fraction`, or
integer numerators over a common denominator in the vectorized kernels.
Floating point only appears when drawing SVG.

The region T is the union of two pieces:

* T1: points with a in [0, 1/2) and either b in [1/2, 1) with
  7/12 <= a + b <= 4/3, or b in [0, 1/2) with a + b > 5/6;
* T2: points with a in [1/2, 1), b in [0, 1/2), 7/12 <= a + b < 5/6 and
  2a + b < 3/2.

It has area 7/24, and any finite subset of it contains a point that is
not the mod-1 midpoint of two other members.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

from .zm import GridPoint, InputError, SiteSet

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")

HALF = Fraction(1, 2)


def parse_rational(text) -> Fraction:
    """Parse an integer or ``"p/q"`` string. Decimal notation is rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    match = _RATIONAL_RE.match(str(text))
    if not match:
        raise InputError(f"not a rational of the form p/q: {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise InputError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


def reduce_mod1(r) -> Fraction:
    r = Fraction(r)
    return r - (r.numerator // r.denominator)


class UnitPoint(NamedTuple):
    a: Fraction
    b: Fraction

    @classmethod
    def make(cls, a, b) -> "UnitPoint":
        a, b = Fraction(a), Fraction(b)
        if not (0 <= a < 1 and 0 <= b < 1):
            raise InputError(f"({a}, {b}) is not in [0,1)^2")
        return cls(a, b)

    def __str__(self) -> str:
        return f"({self.a}, {self.b})"


def g(t) -> Fraction:
    """Fold [0, 1) onto [0, 1/2); invariant under doubling mod 1."""
    t = Fraction(t)
    if not 0 <= t < 1:
        raise InputError(f"g is defined on [0, 1), got {t}")
    return t if t < HALF else t - HALF


# Definition of the region, verbatim.

def in_T1(p) -> bool:
    a, b = p
    if not 0 <= a < HALF:
        return False
    s = a + b
    if HALF <= b < 1:
        return Fraction(7, 12) <= s <= Fraction(4, 3)
    if 0 <= b < HALF:
        return s > Fraction(5, 6)
    return False


def in_T2(p) -> bool:
    a, b = p
    if not (HALF <= a < 1 and 0 <= b < HALF):
        return False
    s = a + b
    return Fraction(7, 12) <= s < Fraction(5, 6) and 2 * a + b < Fraction(3, 2)


def in_T(p) -> bool:
    return in_T1(p) or in_T2(p)


def in_T_scaled(A, B, N: int):
    """Vectorized membership for points (A/N, B/N) with integer arrays 0 <= A, B < N.

    Every threshold is cleared of denominators, so the test is exact for
    any positive integer N.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    S = A + B
    left = 2 * A < N
    upper = 2 * B >= N
    t1 = left & (
        (upper & (12 * S >= 7 * N) & (3 * S <= 4 * N)) | (~upper & (6 * S > 5 * N))
    )
    t2 = ~left & ~upper & (12 * S >= 7 * N) & (6 * S < 5 * N) & (2 * (2 * A + B) < 3 * N)
    return t1 | t2


# Polygon description of the same region, as drawn in the usual figure.
# Each edge i runs from vertex i to vertex i+1; flags say whether the open
# edge segment and each vertex belong to the region.

@dataclass(frozen=True)
class Polygon:
    name: str
    vertices: Tuple[Tuple[Fraction, Fraction], ...]
    edge_closed: Tuple[bool, ...]
    vertex_closed: Tuple[bool, ...]

    def edges(self):
        n = len(self.vertices)
        for i in range(n):
            yield self.vertices[i], self.vertices[(i + 1) % n], self.edge_closed[i]


def _pts(*pairs) -> Tuple[Tuple[Fraction, Fraction], ...]:
    return tuple((Fraction(a), Fraction(b)) for a, b in pairs)


T1_POLYGON = Polygon(
    "T1",
    _pts(("0", "1"), ("0", "7/12"), ("1/12", "1/2"), ("1/3", "1/2"),
         ("1/2", "1/3"), ("1/2", "5/6"), ("1/3", "1")),
    (True, True, True, False, False, True, False),
    (False, True, True, True, False, False, False),
)

T2_POLYGON = Polygon(
    "T2",
    _pts(("1/2", "1/3"), ("1/2", "1/12"), ("7/12", "0"), ("3/4", "0"), ("2/3", "1/6")),
    (True, True, True, False, False),
    (False, True, True, False, False),
)


def shoelace_area(vertices: Sequence[Tuple[Fraction, Fraction]]) -> Fraction:
    n = len(vertices)
    twice = sum(
        vertices[i][0] * vertices[(i + 1) % n][1] - vertices[(i + 1) % n][0] * vertices[i][1]
        for i in range(n)
    )
    return abs(Fraction(twice)) / 2


def _on_segment(p, u, v) -> bool:
    (px, py), (ux, uy), (vx, vy) = p, u, v
    if (vx - ux) * (py - uy) - (vy - uy) * (px - ux) != 0:
        return False
    return min(ux, vx) <= px <= max(ux, vx) and min(uy, vy) <= py <= max(uy, vy)


def in_polygon(poly: Polygon, p) -> bool:
    """Exact membership honouring the open/closed flags of edges and vertices."""
    p = (Fraction(p[0]), Fraction(p[1]))
    for i, v in enumerate(poly.vertices):
        if p == v:
            return poly.vertex_closed[i]
    for u, v, closed in poly.edges():
        if _on_segment(p, u, v):
            return closed
    # strict interior: even-odd crossing count along a horizontal ray
    px, py = p
    inside = False
    for (ux, uy), (vx, vy), _ in poly.edges():
        if (uy > py) != (vy > py):
            x_cross = ux + (py - uy) * (vx - ux) / (vy - uy)
            if x_cross > px:
                inside = not inside
    return inside


def in_T_polygons(p) -> bool:
    return in_polygon(T1_POLYGON, p) or in_polygon(T2_POLYGON, p)


class AreaReport(NamedTuple):
    T1: Fraction
    T2: Fraction
    total: Fraction


def area_T() -> AreaReport:
    """Exact area of T by the shoelace formula over the two vertex lists."""
    t1 = shoelace_area(T1_POLYGON.vertices)
    t2 = shoelace_area(T2_POLYGON.vertices)
    return AreaReport(t1, t2, t1 + t2)


# Inequality-system integration, an independent route to the same areas.
# A piece is a list of constraints (ca, cb, k) meaning ca*a + cb*b <= k;
# strictness does not affect area.

def _F(x) -> Fraction:
    return Fraction(x)


_BOX_LEFT = [(-1, 0, 0), (1, 0, _F("1/2"))]
_BOX_RIGHT = [(-1, 0, _F("-1/2")), (1, 0, 1)]
_BOX_LOW = [(0, -1, 0), (0, 1, _F("1/2"))]
_BOX_HIGH = [(0, -1, _F("-1/2")), (0, 1, 1)]

T_PIECES = {
    "T1": [
        _BOX_LEFT + _BOX_HIGH + [(-1, -1, _F("-7/12")), (1, 1, _F("4/3"))],
        _BOX_LEFT + _BOX_LOW + [(-1, -1, _F("-5/6"))],
    ],
    "T2": [
        _BOX_RIGHT + _BOX_LOW
        + [(-1, -1, _F("-7/12")), (1, 1, _F("5/6")), (2, 1, _F("3/2"))],
    ],
}


def _slice_length(piece, a: Fraction) -> Fraction:
    lo, hi = Fraction(-10), Fraction(10)
    for ca, cb, k in piece:
        if cb == 0:
            if ca * a > k:
                return Fraction(0)
        elif cb > 0:
            hi = min(hi, (k - ca * a) / cb)
        else:
            lo = max(lo, (k - ca * a) / cb)
    return max(Fraction(0), hi - lo)


def integrate_piece(piece) -> Fraction:
    """Integrate the b-slice length over a in [0, 1].

    The slice length is piecewise linear in a with kinks only where two
    bounding lines meet, so the midpoint rule on the pieces between those
    abscissae is exact.
    """
    cuts = {Fraction(0), Fraction(1)}
    lines = [(Fraction(ca), Fraction(cb), Fraction(k)) for ca, cb, k in piece]
    for ca, cb, k in lines:
        if cb == 0 and ca != 0:
            cuts.add(k / ca)
    for i, (ca1, cb1, k1) in enumerate(lines):
        for ca2, cb2, k2 in lines[i + 1:]:
            if cb1 == 0 or cb2 == 0:
                continue
            # b = (k1 - ca1 a)/cb1 = (k2 - ca2 a)/cb2
            den = ca1 * cb2 - ca2 * cb1
            if den != 0:
                cuts.add((k1 * cb2 - k2 * cb1) / den)
    xs = sorted(c for c in cuts if 0 <= c <= 1)
    return sum(
        ((v - u) * _slice_length(piece, (u + v) / 2) for u, v in zip(xs, xs[1:])),
        Fraction(0),
    )


def area_T_by_integration() -> AreaReport:
    t1 = sum((integrate_piece(p) for p in T_PIECES["T1"]), Fraction(0))
    t2 = sum((integrate_piece(p) for p in T_PIECES["T2"]), Fraction(0))
    return AreaReport(t1, t2, t1 + t2)


# The map from Z_m^2 to the torus.

def phi(m: int, alpha, beta, p: Sequence[int]) -> UnitPoint:
    if len(p) != 2:
        raise InputError(f"phi needs a point of Z_m^2, got dimension {len(p)}")
    q, r = p
    return UnitPoint(
        reduce_mod1(Fraction(alpha) + Fraction(q % m, m)),
        reduce_mod1(Fraction(beta) + Fraction(r % m, m)),
    )


def phi_image(m: int, alpha, beta, points: Iterable[GridPoint]) -> List[UnitPoint]:
    return [phi(m, alpha, beta, p) for p in points]


def phi_preimage_T(m: int, alpha, beta) -> SiteSet:
    """All (q, r) in Z_m^2 whose image under phi lies in T, by exact per-point tests."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    pts = [
        (q, r)
        for q in range(m)
        for r in range(m)
        if in_T(phi(m, alpha, beta, (q, r)))
    ]
    return SiteSet(m, 2, tuple(pts))


def preimage_count_scaled(m: int, alpha_num, beta_num, den: int):
    """|phi^{-1}(T)| for alpha = alpha_num/den, beta = beta_num/den, vectorized.

    ``alpha_num`` and ``beta_num`` may be 1-d integer arrays; the result has
    shape (len(alpha_num), len(beta_num)). ``den`` must be a multiple of m.
    """
    if den % m:
        raise InputError(f"denominator {den} must be a multiple of m={m}")
    step = den // m
    al = np.atleast_1d(np.asarray(alpha_num, dtype=np.int64))
    be = np.atleast_1d(np.asarray(beta_num, dtype=np.int64))
    shifts = step * np.arange(m, dtype=np.int64)
    A = (al[:, None] + shifts[None, :]) % den  # (n_alpha, m)
    B = (be[:, None] + shifts[None, :]) % den  # (n_beta, m)
    counts = np.zeros((len(al), len(be)), dtype=np.int64)
    for i in range(len(al)):
        mask = in_T_scaled(A[i][None, :, None], B[:, None, :], den)  # (n_beta, m, m)
        counts[i] = mask.sum(axis=(1, 2))
    return counts


# SVG rendering (floating point is fine here: it carries no semantics).

def region_svg(size: int = 480, points: Sequence[UnitPoint] = ()) -> str:
    pad = 20
    scale = size

    def xy(p):
        return pad + float(p[0]) * scale, pad + (1 - float(p[1])) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * pad}" '
        f'height="{size + 2 * pad}" viewBox="0 0 {size + 2 * pad} {size + 2 * pad}">',
        f'<rect x="{pad}" y="{pad}" width="{size}" height="{size}" fill="none" stroke="#999"/>',
    ]
    for poly in (T1_POLYGON, T2_POLYGON):
        coords = " ".join("%.3f,%.3f" % xy(v) for v in poly.vertices)
        parts.append(f'<polygon points="{coords}" fill="#9ab8f0" fill-opacity="0.5" stroke="none"/>')
        for u, v, closed in poly.edges():
            (x1, y1), (x2, y2) = xy(u), xy(v)
            dash = "" if closed else ' stroke-dasharray="3,3"'
            parts.append(
                f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
                f'stroke="#1f4fbf" stroke-width="1.5"{dash}/>'
            )
    for p in points:
        x, y = xy(p)
        parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="2" fill="#c0392b"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
