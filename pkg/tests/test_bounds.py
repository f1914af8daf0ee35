from __future__ import annotations

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubeiso import bounds
from cubeiso.core import VertexFamily, edges_within
from cubeiso.constructions import subcube
from cubeiso.errors import InvalidInput, OutOfHypothesis

E = math.e


@pytest.mark.parametrize("m, n, expected", [(2, 4, 1), (256, 16, 8), (16, 4, 4)])
def test_ell(m, n, expected):
    assert bounds.ell(m, n) == expected


@pytest.mark.parametrize("m, n", [(1, 4), (17, 4), (2, 1)])
def test_ell_domain(m, n):
    with pytest.raises(InvalidInput):
        bounds.ell(m, n)


@pytest.mark.parametrize("m, n, expected", [(9, 8, 3), (16, 256, 1), (4, 4, 2)])
def test_ell_prime(m, n, expected):
    assert bounds.ell_prime(m, n) == expected


@pytest.mark.parametrize("m, n", [(1, 4), (16, 4), (32, 4)])
def test_ell_prime_hypothesis(m, n):
    with pytest.raises(OutOfHypothesis):
        bounds.ell_prime(m, n)


def test_beta_examples():
    assert bounds.beta(256, 16) == 11
    assert bounds.beta(9, 8) == 4
    for n in (2, 5, 9, 16):
        assert bounds.beta(1 << n, n) == n


def test_beta_prime_examples():
    assert bounds.beta_prime(9, 8) == 7
    assert bounds.beta_prime(4, 4) == 4
    assert bounds.beta_prime(16, 256) == 64


def test_distance_two_bound():
    assert bounds.bound_thm21(9, 8).bound == 216
    assert bounds.bound_thm21(16, 256).bound == 4096
    assert bounds.bound_thm21(4, 4).bound == 32
    with pytest.raises(OutOfHypothesis):
        bounds.bound_thm21(16, 4)


def test_even_bound():
    assert bounds.bound_thm12(256, 16, 1).bound == pytest.approx((8 * E) ** 2 * 128 * 256, rel=1e-12)
    assert bounds.bound_thm12(256, 16, 1).bound == pytest.approx(1.5497e7, rel=1e-4)
    assert bounds.bound_thm12(2, 2, 1).bound == pytest.approx((8 * E) ** 2 * 2 * 2, rel=1e-12)
    assert bounds.bound_thm12(9, 8, 1).bound == pytest.approx((8 * E) ** 2 * 24 * 9, rel=1e-12)
    assert bounds.bound_thm12(9, 8, 1).bound == pytest.approx(1.0213e5, rel=1e-3)
    with pytest.raises(OutOfHypothesis):
        bounds.bound_thm12(3, 8, 2)
    with pytest.raises(OutOfHypothesis):
        bounds.bound_thm12(32, 4, 1)


def test_odd_bound():
    assert bounds.bound_thm13(256, 16, 1).bound == pytest.approx((16 * E / 3) ** 3 * 128 * 256 * 8, rel=1e-12)
    assert bounds.bound_thm13(256, 16, 1).bound == pytest.approx(7.98e8, rel=1e-2)
    assert bounds.bound_thm13(4, 4, 1).bound == pytest.approx((16 * E / 3) ** 3 * 8 * 4 * 2, rel=1e-12)
    assert bounds.bound_thm13(9, 8, 1).bound == pytest.approx((16 * E / 3) ** 3 * 24 * 9 * math.log2(9), rel=1e-12)


def test_huge_parameters_stay_finite_or_infinite_without_error():
    report = bounds.bound_thm12(1 << 4000, 4096, 300)
    assert report.bound > 0


def test_layer_bound():
    assert bounds.bound_kw(10, 6).bound == 180
    assert bounds.bound_kw(1, 9).bound == 0
    assert bounds.bound_kw(20, 6).bound == 6 * bounds.ell_prime(20, 6) * 20


def test_trivial_bound():
    assert bounds.bound_trivial(8, 4, 2) == 40
    assert bounds.bound_trivial(1, 5, 2) == 15 / 2
    assert bounds.bound_trivial(16, 4, 4) == 120
    with pytest.raises(InvalidInput):
        bounds.bound_trivial(4, 3, 4)


def test_half_space_value():
    assert bounds.kkl_exact(4, 2) == 24
    assert bounds.kkl_exact(3, 1) == 4
    for n in range(2, 13):
        half = subcube(n, n - 1)
        for r in range(1, n + 1):
            assert bounds.kkl_exact(n, r) == edges_within(half, r)
    with pytest.raises(InvalidInput):
        bounds.kkl_exact(4, 5)


def test_kleitman_threshold():
    assert bounds.kleitman_threshold(10, 4) == 56
    assert bounds.kleitman_threshold(4, 2) == 5
    with pytest.raises(InvalidInput):
        bounds.kleitman_threshold(10, 3)
    with pytest.raises(InvalidInput):
        bounds.kleitman_threshold(3, 4)


def test_single_distance_bound():
    assert bounds.remark_e1_bound(1) == 0
    assert bounds.remark_e1_bound(4) == 8
    assert bounds.remark_e1_bound(8) == 24


def test_rank_cap():
    assert bounds.norm_bound_check(VertexFamily.from_sets(3, [set(), {1}, {2}, {1, 2}]))
    assert bounds.norm_bound_check(VertexFamily.from_sets(2, [set(), {1}]))
    with pytest.raises(OutOfHypothesis):
        bounds.norm_bound_check(VertexFamily.from_sets(3, [set(), {2}]))
    with pytest.raises(OutOfHypothesis):
        bounds.norm_bound_check(VertexFamily.from_sets(3, [set()]))


def test_rank_cap_on_all_lcds_of_q5():
    from cubeiso.solver import enumerate_all_lcds

    for A in enumerate_all_lcds(5):
        if 2 <= len(A) < 32:
            assert bounds.norm_bound_check(A), A.to_json()


def test_per_class_bound_examples():
    lead = 4 * math.sqrt(2) * E
    assert bounds.lemma_ba_bound(1, 1, 9, 8, "ell_y_le") == pytest.approx(8 * E**2 * 24 * 9, rel=1e-12)
    assert bounds.lemma_ba_bound(1, 1, 9, 8, "ell_y_le") == pytest.approx(1.277e4, rel=1e-3)
    assert bounds.lemma_ba_bound(1, 0, 9, 8, "ell_y_le") == pytest.approx(lead * math.log2(9) * 9, rel=1e-12)
    assert bounds.lemma_ba_bound(1, 1, 9, 8, "ell_y_gt") == pytest.approx(8 * E**2 * 12 * 9, rel=1e-12)
    assert bounds.lemma_ba_bound(2, 0, 9, 8, "ell_y_gt") == 0
    assert bounds.lemma_ba_bound(2, 1, 9, 8, "ell_y_gt") == pytest.approx((lead / 3) ** 3 * 24 * 3 * 9, rel=1e-12)


def test_per_class_bound_errors():
    with pytest.raises(InvalidInput):
        bounds.lemma_ba_bound(1, 2, 9, 8, "ell_y_le")
    with pytest.raises(InvalidInput):
        bounds.lemma_ba_bound(1, 0, 9, 8, "sideways")
    with pytest.raises(OutOfHypothesis):
        bounds.lemma_ba_bound(4, 3, 9, 8, "ell_y_le")
    with pytest.raises(OutOfHypothesis):
        bounds.lemma_ba_bound(0, 0, 9, 8, "ell_y_le")


def test_arithmetic_facts_examples():
    assert all(bounds.prop31_check(256, 16))
    assert all(bounds.prop31_check(2, 2))
    assert bounds.finishing_monotonicity_check(256, 16, 3)
    assert bounds.finishing_monotonicity_check(4, 4, 1)
    assert bounds.finishing_monotonicity_check(9, 8, 3)
    with pytest.raises(OutOfHypothesis):
        bounds.finishing_monotonicity_check(9, 8, 4)


def test_report_serialization():
    report = bounds.bound_thm21(9, 8)
    data = json.loads(report.to_json())
    assert data["bound"] == 216 and data["ell_prime"] == 3 and data["beta_prime"] == 7
    assert report.csv_row() == ["thm21", 8, 9, 2, "", 3, "", 7, 216]


def test_theorem_bounds_lists_applicable_ones():
    assert set(bounds.theorem_bounds(16, 8, 3)) == {"trivial", "pairs", "thm13"}
    assert set(bounds.theorem_bounds(16, 8, 2)) == {"trivial", "pairs", "thm21", "thm12"}
    assert set(bounds.theorem_bounds(5, 8, 1)) == {"trivial", "pairs", "e1"}


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 64).flatmap(lambda n: st.tuples(st.just(n), st.integers(2, (1 << n) - 1))))
def test_ell_ordering(case):
    n, m = case
    assert 1 <= bounds.ell_prime(m, n) <= bounds.ell(m, n) <= bounds.floor_log2(m)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 4096).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_powers_of_two_do_not_drift(case):
    # with m = 2^a the floor term is exactly a, whatever float log2 returns
    n, a = case
    m = 1 << a
    assert bounds.ell(m, n) <= a
    denom = math.log2(n) - math.log2(a)
    if denom <= 1e-12:
        assert bounds.ell(m, n) == a
