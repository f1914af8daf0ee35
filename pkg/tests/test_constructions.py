from __future__ import annotations

from math import comb

import pytest

from cubeiso.constructions import (
    ConstructionSpec,
    ball_edges,
    binary_order_value,
    hamming_ball,
    initial_segment,
    kw_layer,
    kw_star,
    odd_tight,
    odd_tight_edges,
    subcube,
)
from cubeiso.core import Vertex, VertexFamily, edges_within
from cubeiso.errors import InvalidInput


def sets_of(A: VertexFamily) -> set[frozenset[int]]:
    return set(A.as_sets())


def test_binary_order_values():
    assert binary_order_value(Vertex.from_set(set(), 3)) == 0
    assert binary_order_value(Vertex.from_set({1}, 3)) == 1
    assert binary_order_value(Vertex.from_set({1, 2}, 3)) == 3


def test_initial_segments():
    assert sets_of(initial_segment(3, 4)) == {frozenset(), frozenset({1}), frozenset({2}), frozenset({1, 2})}
    assert len(initial_segment(5, 0)) == 0
    assert sets_of(initial_segment(3, 3)) == {frozenset(), frozenset({1}), frozenset({2})}
    with pytest.raises(InvalidInput):
        initial_segment(3, 9)


def test_subcubes():
    assert subcube(4, 0).members == (0,)
    assert all(4 not in s for s in sets_of(subcube(4, 3))) and len(subcube(4, 3)) == 8
    with pytest.raises(InvalidInput):
        subcube(3, 4)


def test_balls():
    assert hamming_ball(4, 0).members == (0,)
    assert len(hamming_ball(4, 1)) == 5
    assert edges_within(hamming_ball(8, 1), 2) == 36
    with pytest.raises(InvalidInput):
        hamming_ball(3, 4)


def test_odd_tight():
    assert odd_tight(4, 1) == hamming_ball(4, 1)
    assert odd_tight(6, 0).members == (0,)
    # subsets of {1,2}, plus one of {3,4,5} added to a subset of weight < 2
    A = odd_tight(5, 2)
    assert len(A) == 4 + 3 * 3
    for s in sets_of(A):
        assert len(s) <= 2 and len(s & {3, 4, 5}) <= 1


def test_layers_and_stars():
    assert kw_layer(4, 0).members == (0,)
    assert len(kw_layer(4, 2)) == 6
    assert len(kw_layer(6, 3)) == 20
    assert sets_of(kw_star(6, 3, 3)) == {frozenset({1, 2, 3})}
    assert len(kw_star(6, 3, 1)) == comb(5, 2)
    with pytest.raises(InvalidInput):
        kw_star(6, 2, 3)
    with pytest.raises(InvalidInput):
        kw_star(6, 3, 0)


def test_spec_builds_each_kind():
    assert ConstructionSpec("subcube", 4, (2,)).build() == subcube(4, 2)
    assert ConstructionSpec("kw-star", 5, (2, 1)).build() == kw_star(5, 2, 1)
    with pytest.raises(InvalidInput):
        ConstructionSpec("sphere", 4, (1,))
    with pytest.raises(InvalidInput):
        ConstructionSpec("kw-star", 4, (1,))


@pytest.mark.parametrize("n", range(1, 9))
def test_closed_form_counts_match_enumeration(n):
    for k in range(n + 1):
        ball, tight = hamming_ball(n, k), odd_tight(n, k)
        for r in range(1, n + 1):
            assert ball_edges(n, k, r) == edges_within(ball, r)
            assert odd_tight_edges(n, k, r) == edges_within(tight, r)
