from __future__ import annotations

import itertools
import json
from math import comb

import pytest

from cubeiso import bounds, solver
from cubeiso.compression import is_down_set, is_left_compressed
from cubeiso.constructions import hamming_ball, initial_segment, subcube
from cubeiso.core import VertexFamily, edges_within
from cubeiso.errors import BackendDisagreement, InvalidInput, ResourceLimit
from cubeiso.solver import SolverBudget


def brute_force(n: int, m: int, r: int) -> tuple[int, set[tuple[int, ...]]]:
    """Maximum and all optimal m-subsets, straight from itertools."""
    best, found = -1, set()
    for combo in itertools.combinations(range(1 << n), m):
        e = edges_within(VertexFamily._trusted(n, combo), r)
        if e > best:
            best, found = e, {combo}
        elif e == best:
            found.add(combo)
    return best, found


def brute_lcds(n: int) -> set[tuple[int, ...]]:
    out = set()
    for mask in range(1 << (1 << n)):
        A = VertexFamily._trusted(n, [x for x in range(1 << n) if mask >> x & 1])
        if is_down_set(A) and is_left_compressed(A):
            out.add(A.members)
    return out


class TestExhaustive:
    def test_size_five(self):
        result = solver.solve_exhaustive(4, 5, 2)
        assert result.value == 10 and len(result.witnesses) == 16

    def test_singletons(self):
        result = solver.solve_exhaustive(5, 1, 3)
        assert result.value == 0
        assert [w.members for w in result.witnesses] == [(x,) for x in range(32)]

    def test_empty_and_full(self):
        assert solver.solve_exhaustive(3, 0, 1).witnesses == [VertexFamily(3, ())]
        full = solver.solve_exhaustive(3, 8, 2)
        assert full.value == 24 and full.witnesses == [VertexFamily.full(3)]

    @pytest.mark.parametrize("n, m, r", [(4, 7, 2), (3, 5, 1), (3, 3, 2), (4, 10, 3), (4, 9, 1)])
    def test_witnesses_complete_against_itertools(self, n, m, r):
        best, found = brute_force(n, m, r)
        result = solver.solve_exhaustive(n, m, r)
        assert result.value == best
        assert {w.members for w in result.witnesses} == found

    def test_witnesses_canonically_sorted(self):
        result = solver.solve_exhaustive(4, 6, 2)
        keys = [w.members for w in result.witnesses]
        assert keys == sorted(keys)

    def test_budget(self):
        with pytest.raises(ResourceLimit, match="compressed"):
            solver.solve_exhaustive(5, 10, 2)
        assert solver.solve_exhaustive(6, 2, 1).value == 1
        assert solver.solve_exhaustive(6, 63, 1).value == 6 * 32 - 6


class TestCompressed:
    def test_examples(self):
        assert solver.solve_compressed(4, 8, 2).value == 24
        result = solver.solve_compressed(3, 4, 1)
        assert result.value == 4 and subcube(3, 2) in result.witnesses
        assert solver.solve_compressed(5, 16, 2).value == 80

    def test_witnesses_are_lcds(self):
        for w in solver.solve_compressed(5, 11, 3).witnesses:
            assert is_down_set(w) and is_left_compressed(w) and len(w) == 11

    def test_budget(self):
        with pytest.raises(ResourceLimit):
            solver.solve_compressed(9, 10, 2)

    def test_invalid(self):
        with pytest.raises(InvalidInput):
            solver.solve_compressed(3, 9, 1)
        with pytest.raises(InvalidInput):
            solver.solve_compressed(3, 4, 4)


def test_backends_agree_on_q4():
    for m in range(17):
        for r in range(1, 5):
            assert solver.solve_exhaustive(4, m, r).value == solver.solve_compressed(4, m, r).value, (m, r)


def test_values_monotone_and_sandwiched():
    for n in (3, 4, 5):
        table = {(m, r): solver.solve(n, m, r).value for m in range((1 << n) + 1) for r in range(1, n + 1)}
        for (m, r), value in table.items():
            if m + 1 <= 1 << n:
                assert table[(m + 1, r)] >= value
            if r + 1 <= n:
                assert table[(m, r + 1)] >= value
            lower = edges_within(initial_segment(n, m), r)
            k = max((k for k in range(n + 1) if len(hamming_ball(n, k)) <= m), default=0)
            lower = max(lower, edges_within(hamming_ball(n, k), r))
            upper = min(bounds.theorem_bounds(m, n, r).values())
            assert lower <= value <= upper, (n, m, r)


def test_half_space_values():
    for n in (3, 4, 5):
        for r in range(1, n + 1):
            assert solver.solve(n, 1 << (n - 1), r).value == bounds.kkl_exact(n, r)


def test_lcds_enumeration_matches_predicates():
    for n in range(1, 5):
        enumerated = [A.members for A in solver.enumerate_all_lcds(n)]
        assert len(enumerated) == len(set(enumerated))
        assert set(enumerated) == brute_lcds(n)


def test_lcds_counts_and_examples():
    assert [len(list(solver.enumerate_all_lcds(n))) for n in range(1, 7)] == [3, 5, 10, 27, 119, 1173]
    assert [A.members for A in solver.enumerate_lcds(2, 2)] == [(0, 1)]
    assert [A.members for A in solver.enumerate_lcds(3, 2)] == [(0, 1)]
    assert [A.members for A in solver.enumerate_lcds(4, 0)] == [()]


def test_down_set_count_is_dedekind_number():
    assert len(list(solver.enumerate_down_sets(5))) == 7581


def test_harper_small():
    for n in (2, 3, 4):
        assert solver.verify_harper_small(n)
    with pytest.raises(ResourceLimit):
        solver.verify_harper_small(5)


def test_workers_do_not_change_results():
    for backend, n, m, r in (("exhaustive", 4, 7, 2), ("compressed", 5, 13, 2)):
        one = solver.solve(n, m, r, backend=backend, workers=1)
        two = solver.solve(n, m, r, backend=backend, workers=2)
        assert one.to_json() == two.to_json()


def test_cross_check_and_disagreement(monkeypatch):
    assert solver.solve(4, 6, 2, cross_check=True).value == brute_force(4, 6, 2)[0] == 13

    real = solver.solve_compressed

    def wrong(*args, **kwargs):
        result = real(*args, **kwargs)
        result.value -= 1
        return result

    monkeypatch.setattr(solver, "solve_compressed", wrong)
    with pytest.raises(BackendDisagreement):
        solver.solve(4, 6, 2, cross_check=True)


def test_json_excludes_timing_by_default():
    result = solver.solve(3, 3, 1)
    data = json.loads(result.to_json())
    assert "wall_time" not in data and data["witness_count"] == len(result.witnesses)
    assert "wall_time" in json.loads(result.to_json(timing=True))


class TestBudget:
    def test_env_can_only_raise(self):
        budget = SolverBudget.from_env({"CUBEISO_BUDGET": "compressed_max_n=9, exhaustive_max_n=1"})
        assert budget.compressed_max_n == 9
        assert budget.exhaustive_max_n == SolverBudget().exhaustive_max_n

    @pytest.mark.parametrize("raw", ["bogus=3", "compressed_max_n", "compressed_max_n=x"])
    def test_env_rejects_garbage(self, raw):
        with pytest.raises(InvalidInput):
            SolverBudget.from_env({"CUBEISO_BUDGET": raw})

    def test_small_side_cap(self):
        budget = SolverBudget()
        assert budget.allows_exhaustive(7, 3)
        assert not budget.allows_exhaustive(12, 3)
        assert budget.allows_exhaustive(11, 2)


def test_kleitman_cliques_below_threshold():
    for n, r in ((3, 2), (5, 2), (5, 4)):
        t = bounds.kleitman_threshold(n, r)
        assert solver.solve(n, t, r).value == comb(t, 2)
        assert solver.solve(n, t + 1, r).value < comb(t + 1, 2)
