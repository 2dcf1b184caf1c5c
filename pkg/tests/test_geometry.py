from fractions import Fraction as F

import numpy as np
import pytest

from apfree.geometry import (
    T1_POLYGON,
    T2_POLYGON,
    UnitPoint,
    area_T,
    area_T_by_integration,
    g,
    in_T,
    in_T1,
    in_T2,
    in_T_polygons,
    in_T_scaled,
    parse_rational,
    phi,
    phi_preimage_T,
    preimage_count_scaled,
    reduce_mod1,
    region_svg,
)
from apfree.zm import InputError


def test_reduce_mod1():
    assert reduce_mod1(F(7, 6)) == F(1, 6)
    assert reduce_mod1(F(-1, 3)) == F(2, 3)
    assert reduce_mod1(0) == 0
    assert reduce_mod1(F(-2)) == 0


def test_parse_rational_rejects_decimals():
    assert parse_rational("1/576") == F(1, 576)
    assert parse_rational("-3") == F(-3)
    for bad in ("0.5", "1/0", "x", "1e3"):
        with pytest.raises(InputError):
            parse_rational(bad)


@pytest.mark.parametrize(
    "point, t1, t",
    [
        ((F(1, 4), F(3, 4)), True, True),
        ((F(2, 3), F(1, 6)), False, False),
        ((F(1, 12), F(1, 2)), True, True),
        ((F(1, 2), F(5, 6)), False, False),
        ((F(1, 3), F(1, 2)), True, True),
        ((F(1, 2), F(1, 12)), False, True),
        ((F(3, 4), F(0)), False, False),
        ((F(7, 12), F(0)), False, True),
        ((F(0), F(7, 12)), True, True),
        ((F(5, 12), F(5, 12)), False, False),
        ((F(5, 12), F(11, 24)), True, True),
    ],
)
def test_membership_examples(point, t1, t):
    assert in_T1(point) == t1
    assert in_T(point) == t


def test_area_exact():
    a = area_T()
    assert a.total == F(7, 24)
    assert a.T1 == F(71, 288)
    assert a.T2 == F(13, 288)
    assert area_T_by_integration() == a


def test_polygons_match_inequalities():
    grid = {F(i, D) for D in (12, 24, 36, 60) for i in range(D)}
    special = {v for poly in (T1_POLYGON, T2_POLYGON) for vertex in poly.vertices for v in vertex}
    coords = sorted(grid | {c for c in special if c < 1})
    for a in coords:
        for b in coords:
            assert in_T((a, b)) == in_T_polygons((a, b)), (a, b)


def test_scaled_kernel_matches_fractions():
    for N in (7, 24, 48, 97):
        A, B = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
        fast = in_T_scaled(A, B, N)
        for i in range(N):
            for j in range(N):
                assert fast[i, j] == in_T((F(i, N), F(j, N)))


def test_g():
    assert g(F(1, 4)) == F(1, 4)
    assert g(F(3, 4)) == F(1, 4)
    assert g(F(1, 2)) == 0
    with pytest.raises(InputError):
        g(F(1))
    with pytest.raises(InputError):
        g(F(-1, 3))


def test_g_is_invariant_under_doubling():
    pts = [F(i, 48) for i in range(48)]
    for t in pts:
        for u in pts:
            if reduce_mod1(2 * t) == reduce_mod1(2 * u):
                assert g(t) == g(u)


def test_phi_examples():
    assert phi(3, 0, 0, (2, 2)) == (F(2, 3), F(2, 3))
    assert phi(3, F(1, 2), 0, (2, 0)) == (F(1, 6), F(0))
    assert phi(2, F(1, 24), F(1, 24), (1, 0)) == (F(13, 24), F(1, 24))
    with pytest.raises(InputError):
        phi(3, 0, 0, (1,))


def test_phi_is_injective():
    for m in (1, 2, 5, 8):
        for alpha, beta in ((0, 0), (F(5, 7), F(-3, 11)), (F(13, 2), F(1, 3))):
            images = {phi(m, alpha, beta, (q, r)) for q in range(m) for r in range(m)}
            assert len(images) == m * m
            assert all(0 <= p.a < 1 and 0 <= p.b < 1 for p in images)


def _preimage_oracle(m, alpha, beta):
    # direct definition with no reuse of phi: reduce each coordinate by hand
    out = []
    for q in range(m):
        for r in range(m):
            a = alpha + F(q, m)
            b = beta + F(r, m)
            a -= a.numerator // a.denominator
            b -= b.numerator // b.denominator
            if in_T1((a, b)) or in_T2((a, b)):
                out.append((q, r))
    return out


def test_preimage_examples():
    assert phi_preimage_T(2, F(1, 24), F(1, 24)).points == ((0, 1), (1, 0))
    assert phi_preimage_T(1, F(1, 4), F(3, 4)).points == ((0, 0),)
    S = phi_preimage_T(12, F(1, 288), F(1, 288))
    assert list(S.points) == _preimage_oracle(12, F(1, 288), F(1, 288))
    assert len(S) == 43 and len(S) >= 42


def test_vectorized_count_matches_exact_preimage():
    for m in (1, 2, 3, 7, 12):
        den = 48 * m
        nums = np.array([0, 1, 5, 17, den // 2, den - 1])
        counts = preimage_count_scaled(m, nums, nums, den)
        for i, a in enumerate(nums):
            for j, b in enumerate(nums):
                assert counts[i, j] == len(_preimage_oracle(m, F(int(a), den), F(int(b), den)))


def test_unit_point_validation():
    UnitPoint.make(0, F(1, 2))
    with pytest.raises(InputError):
        UnitPoint.make(1, 0)


def test_svg_marks_open_and_closed_edges():
    svg = region_svg()
    assert svg.startswith("<svg")
    assert svg.count("<line") == len(T1_POLYGON.vertices) + len(T2_POLYGON.vertices)
    open_edges = sum(not c for c in T1_POLYGON.edge_closed + T2_POLYGON.edge_closed)
    assert svg.count("stroke-dasharray") == open_edges
