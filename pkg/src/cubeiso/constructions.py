"""Named families used as extremal or near-extremal examples.

Besides the constructors, this module carries closed-form edge counts for
Hamming balls and the odd-distance tight family.  Those let the tightness
tables reach n = 20, where counting pairs one by one is out of reach; the
test suite checks them against :func:`cubeiso.core.edges_within`.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from cubeiso.core import Vertex, VertexFamily
from cubeiso.errors import InvalidInput

KINDS = ("initial-segment", "subcube", "hamming-ball", "odd-tight", "kw-layer", "kw-star")


def binary_order_value(x: Vertex) -> int:
    # bit i-1 carries weight 2^(i-1), so the pattern already is the value
    return x.bits


def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")


def _check_upto_n(name: str, value: int, n: int) -> None:
    if not 0 <= value <= n:
        raise InvalidInput(f"{name} must satisfy 0 <= {name} <= n = {n}, got {value}")


def _patterns_of_weight(coords: range | list[int], k: int):
    for chosen in combinations(coords, k):
        bits = 0
        for c in chosen:
            bits |= 1 << c
        yield bits


def initial_segment(n: int, m: int) -> VertexFamily:
    _check_n(n)
    if not 0 <= m <= 1 << n:
        raise InvalidInput(f"m must satisfy 0 <= m <= 2^n = {1 << n}, got {m}")
    return VertexFamily._trusted(n, range(m))


def subcube(n: int, d: int) -> VertexFamily:
    """The 2^d vertices supported on coordinates 1..d."""
    _check_n(n)
    _check_upto_n("d", d, n)
    return VertexFamily._trusted(n, range(1 << d))


def hamming_ball(n: int, k: int) -> VertexFamily:
    _check_n(n)
    _check_upto_n("k", k, n)
    members = [b for w in range(k + 1) for b in _patterns_of_weight(range(n), w)]
    return VertexFamily._trusted(n, members)


def odd_tight(n: int, k: int) -> VertexFamily:
    """Vertices of weight <= k with at most one coordinate above k."""
    _check_n(n)
    _check_upto_n("k", k, n)
    low = [b for w in range(k + 1) for b in _patterns_of_weight(range(k), w)]
    members = list(low)
    for c in range(k, n):
        top = 1 << c
        members.extend(b | top for b in low if b.bit_count() < k)
    return VertexFamily._trusted(n, members)


def kw_layer(n: int, k: int) -> VertexFamily:
    _check_n(n)
    _check_upto_n("k", k, n)
    return VertexFamily._trusted(n, _patterns_of_weight(range(n), k))


def kw_star(n: int, k: int, s: int) -> VertexFamily:
    """All k-sets containing {1, ..., s}."""
    _check_n(n)
    if not 1 <= s <= k <= n:
        raise InvalidInput(f"kw-star needs 1 <= s <= k <= n, got n={n}, k={k}, s={s}")
    core = (1 << s) - 1
    return VertexFamily._trusted(n, (core | b for b in _patterns_of_weight(range(s, n), k - s)))


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    n: int
    params: tuple[int, ...] = ()

    _ARITY = {
        "initial-segment": 1,
        "subcube": 1,
        "hamming-ball": 1,
        "odd-tight": 1,
        "kw-layer": 1,
        "kw-star": 2,
    }

    def __post_init__(self) -> None:
        if self.kind not in self._ARITY:
            raise InvalidInput(f"unknown construction {self.kind!r}; expected one of {', '.join(KINDS)}")
        if len(self.params) != self._ARITY[self.kind]:
            raise InvalidInput(f"{self.kind} takes {self._ARITY[self.kind]} parameter(s), got {len(self.params)}")
        if any(p < 0 for p in self.params):
            raise InvalidInput("construction parameters must be nonnegative")

    def build(self) -> VertexFamily:
        p = self.params
        if self.kind == "initial-segment":
            return initial_segment(self.n, p[0])
        if self.kind == "subcube":
            return subcube(self.n, p[0])
        if self.kind == "hamming-ball":
            return hamming_ball(self.n, p[0])
        if self.kind == "odd-tight":
            return odd_tight(self.n, p[0])
        if self.kind == "kw-layer":
            return kw_layer(self.n, p[0])
        return kw_star(self.n, p[0], p[1])


def ball_edges(n: int, k: int, r: int) -> int:
    """``edges_within(hamming_ball(n, k), r)`` without enumerating pairs."""
    _check_n(n)
    _check_upto_n("k", k, n)
    if not 1 <= r <= n:
        raise InvalidInput(f"r must satisfy 1 <= r <= n, got {r}")
    ordered = 0
    for w in range(k + 1):
        # neighbours of a weight-w member: drop i of its elements, add j new ones
        per_vertex = 0
        for i in range(w + 1):
            for j in range(n - w + 1):
                if 1 <= i + j <= r and w - i + j <= k:
                    per_vertex += comb(w, i) * comb(n - w, j)
        ordered += comb(n, w) * per_vertex
    return ordered // 2


def odd_tight_edges(n: int, k: int, r: int) -> int:
    """``edges_within(odd_tight(n, k), r)`` without enumerating pairs.

    A member splits into a low part inside [k] and at most one high
    coordinate.  Changing the high part costs distance 0 (kept), 1 (added or
    removed) or 2 (swapped for another high coordinate).
    """
    _check_n(n)
    _check_upto_n("k", k, n)
    if not 1 <= r <= n:
        raise InvalidInput(f"r must satisfy 1 <= r <= n, got {r}")
    high = n - k
    ordered = 0
    for s in (0, 1):
        if s and not high:
            continue
        for w in range(k + 1 - s):
            count_x = comb(k, w) * (high if s else 1)
            # (distance of the high change, new high size, multiplicity)
            if s:
                high_moves = [(0, 1, 1), (1, 0, 1), (2, 1, high - 1)]
            else:
                high_moves = [(0, 0, 1), (1, 1, high)]
            per_vertex = 0
            for dh, s2, mult in high_moves:
                if mult <= 0:
                    continue
                for i in range(w + 1):
                    for j in range(k - w + 1):
                        d = i + j + dh
                        if d < 1 or d > r or w - i + j + s2 > k:
                            continue
                        per_vertex += comb(w, i) * comb(k - w, j) * mult
            ordered += count_x * per_vertex
    return ordered // 2
