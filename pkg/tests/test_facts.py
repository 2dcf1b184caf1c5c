from fractions import Fraction as F

from apfree import facts
from apfree.facts import check_facts, summarize


def test_facts_hold_on_small_grids():
    results = check_facts([12, 24])
    assert {r.name for r in results} == {
        "sum_range", "t1_t2_same_sum", "midpoint_sum", "ap_sum", "g_property",
    }
    assert all(r.checked > 0 for r in results)
    assert all(r.violations == 0 for r in results)


def test_checker_detects_a_bad_region(monkeypatch):
    # the lower-left quadrant has points with a + b below 7/12
    monkeypatch.setattr(facts, "in_T", lambda p: p[0] < F(1, 2) and p[1] < F(1, 2))
    monkeypatch.setattr(facts, "in_T1", lambda p: True)
    assert summarize(check_facts([12]))["sum_range"] > 0
    # on the whole square, wrapped midpoints break the progression-sum inequality
    monkeypatch.setattr(facts, "in_T", lambda p: True)
    totals = summarize(check_facts([12]))
    assert totals["ap_sum"] > 0 and totals["midpoint_sum"] > 0


def test_ap_sum_counts_include_degenerate_pairs():
    # x = z with y = x is always a solution of 2y = x + z
    (ap,) = [r for r in check_facts([12]) if r.name == "ap_sum"]
    (rng,) = [r for r in check_facts([12]) if r.name == "sum_range"]
    assert ap.checked >= rng.checked
