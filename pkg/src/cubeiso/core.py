"""Vertices, vertex families and edge counting in the powered hypercube Q_n^r.

A vertex of {0,1}^n is stored as an unsigned integer whose bit ``i - 1``
holds coordinate ``i``.  With this convention the binary ordering of vertices
is plain integer ordering, and the set view of a vertex (the coordinates equal
to one) is its list of set bits shifted up by one.

Families keep their members as a sorted tuple of such integers.  Everything
here is a pure function of immutable inputs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Mapping

import numpy as np

from cubeiso.errors import InvalidInput

# Families at or below this size are counted with a plain Python double loop;
# larger ones go through the vectorised weight-bucketed counter.
SMALL_FAMILY = 64

_CHUNK = 2048
# uint64 vectorisation only covers patterns that fit in a machine word
_NUMPY_DIM = 64


def popcount(x: int) -> int:
    return x.bit_count()


def bits_to_set(bits: int) -> frozenset[int]:
    """Set view of a bit pattern: coordinate ``i`` is present iff bit ``i-1`` is set."""
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return frozenset(out)


def set_to_bits(elements: Iterable[int], dim: int) -> int:
    bits = 0
    for i in elements:
        if not 1 <= i <= dim:
            raise InvalidInput(f"coordinate {i} outside [1, {dim}]")
        bits |= 1 << (i - 1)
    return bits


@dataclass(frozen=True, order=True)
class Vertex:
    """One element of {0,1}^n."""

    bits: int
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InvalidInput(f"dimension must be positive, got {self.dim}")
        if self.bits < 0 or self.bits >> self.dim:
            raise InvalidInput(f"bit pattern {self.bits:#x} does not fit in {self.dim} coordinates")

    @classmethod
    def from_set(cls, elements: Iterable[int], dim: int) -> "Vertex":
        return cls(set_to_bits(elements, dim), dim)

    @classmethod
    def from_string(cls, text: str) -> "Vertex":
        """Parse ``"0110"``; character ``i - 1`` is coordinate ``i``."""
        if not text or set(text) - {"0", "1"}:
            raise InvalidInput(f"not a 0/1 string: {text!r}")
        bits = 0
        for pos, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << pos
        return cls(bits, len(text))

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def as_set(self) -> frozenset[int]:
        return bits_to_set(self.bits)

    def to_string(self) -> str:
        return vertex_string(self.bits, self.dim)


def vertex_string(bits: int, dim: int) -> str:
    return "".join("1" if bits >> i & 1 else "0" for i in range(dim))


@dataclass(frozen=True)
class VertexFamily:
    """A duplicate-free set of vertices of {0,1}^n, canonically sorted.

    ``members`` holds raw bit patterns in ascending order, so iteration yields
    ints; use :meth:`vertices` for :class:`Vertex` objects.
    """

    dim: int
    members: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InvalidInput(f"dimension must be positive, got {self.dim}")
        raw = []
        for v in self.members:
            if isinstance(v, Vertex):
                if v.dim != self.dim:
                    raise InvalidInput(f"vertex of dimension {v.dim} in a family of dimension {self.dim}")
                v = v.bits
            if v < 0 or v >> self.dim:
                raise InvalidInput(f"bit pattern {v:#x} does not fit in {self.dim} coordinates")
            raw.append(v)
        ordered = tuple(sorted(raw))
        if len(set(ordered)) != len(ordered):
            raise InvalidInput("duplicate vertex in family")
        object.__setattr__(self, "members", ordered)

    @classmethod
    def _trusted(cls, dim: int, members: Iterable[int]) -> "VertexFamily":
        """Build from members already known to be valid and distinct (sorting still applied)."""
        fam = object.__new__(cls)
        object.__setattr__(fam, "dim", dim)
        object.__setattr__(fam, "members", tuple(sorted(members)))
        return fam

    @classmethod
    def from_sets(cls, dim: int, sets: Iterable[Iterable[int]]) -> "VertexFamily":
        return cls(dim, tuple(set_to_bits(s, dim) for s in sets))

    @classmethod
    def from_strings(cls, strings: Iterable[str], dim: int | None = None) -> "VertexFamily":
        strings = list(strings)
        verts = [Vertex.from_string(s) for s in strings]
        if dim is None:
            if not verts:
                raise InvalidInput("cannot infer the dimension of an empty family")
            dim = verts[0].dim
        for s, v in zip(strings, verts):
            if v.dim != dim:
                raise InvalidInput(f"vertex string {s!r} has length {v.dim}, expected {dim}")
        return cls(dim, tuple(v.bits for v in verts))

    @classmethod
    def full(cls, dim: int) -> "VertexFamily":
        return cls._trusted(dim, range(1 << dim))

    @cached_property
    def index(self) -> frozenset[int]:
        return frozenset(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, Vertex):
            return item.dim == self.dim and item.bits in self.index
        return item in self.index

    def vertices(self) -> list[Vertex]:
        return [Vertex(v, self.dim) for v in self.members]

    def as_sets(self) -> list[frozenset[int]]:
        return [bits_to_set(v) for v in self.members]

    def to_dict(self) -> dict:
        return {"n": self.dim, "vertices": [vertex_string(v, self.dim) for v in self.members]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "VertexFamily":
        try:
            n = data["n"]
            strings = data["vertices"]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"family JSON needs 'n' and 'vertices': {exc}") from None
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InvalidInput(f"'n' must be a positive integer, got {n!r}")
        if not isinstance(strings, list) or not all(isinstance(s, str) for s in strings):
            raise InvalidInput("'vertices' must be a list of 0/1 strings")
        return cls.from_strings(strings, n)

    @classmethod
    def from_json(cls, text: str) -> "VertexFamily":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"malformed family JSON: {exc}") from None
        return cls.from_dict(data)


@dataclass(frozen=True, order=True)
class PairClass:
    """Type of an unordered pair {x, y}: ``b = |x \\ y|``, ``a = |y \\ x|`` with b >= a."""

    b: int
    a: int

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < self.a:
            raise InvalidInput(f"pair class needs b >= a >= 0, got ({self.b}, {self.a})")

    @property
    def distance(self) -> int:
        return self.b + self.a


@dataclass(frozen=True)
class EdgeDecomposition:
    rmax: int
    counts: dict[PairClass, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.rmax < 1:
            raise InvalidInput(f"rmax must be positive, got {self.rmax}")
        for key, count in self.counts.items():
            if not 1 <= key.distance <= self.rmax or count < 0:
                raise InvalidInput(f"class ({key.b}, {key.a}) with count {count} does not fit rmax={self.rmax}")

    def total(self) -> int:
        return sum(self.counts.values())

    def get(self, b: int, a: int) -> int:
        return self.counts.get(PairClass(b, a), 0)

    def to_dict(self) -> dict:
        return {
            "rmax": self.rmax,
            "counts": [{"b": k.b, "a": k.a, "count": v} for k, v in sorted(self.counts.items())],
        }


def _check_r(r: int, dim: int, name: str = "r") -> None:
    if not 1 <= r <= dim:
        raise InvalidInput(f"{name} must satisfy 1 <= {name} <= n = {dim}, got {r}")


def hamming_distance(x: Vertex, y: Vertex) -> int:
    if x.dim != y.dim:
        raise InvalidInput(f"dimension mismatch: {x.dim} vs {y.dim}")
    return (x.bits ^ y.bits).bit_count()


def degree(n: int, r: int) -> int:
    """Degree of every vertex of Q_n^r."""
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    _check_r(r, n)
    return sum(comb(n, j) for j in range(1, r + 1))


def count_pairs_allpairs(members: tuple[int, ...] | list[int], r: int) -> int:
    """Pairs at distance 1..r by checking every pair."""
    total = 0
    for i, x in enumerate(members):
        for y in members[i + 1:]:
            if (x ^ y).bit_count() <= r:
                total += 1
    return total


def _as_array(members) -> np.ndarray:
    return np.fromiter(members, dtype=np.uint64, count=len(members))


def count_pairs_bucketed(members: tuple[int, ...] | list[int], r: int) -> int:
    """Pairs at distance 1..r, comparing only weight classes at most r apart.

    Vertices of weights w and w' are at distance at least |w - w'|, so every
    other pair of buckets can be skipped.
    """
    if len(members) < 2:
        return 0
    arr = _as_array(members)
    weights = np.bitwise_count(arr)
    buckets = {int(w): arr[weights == w] for w in np.unique(weights)}
    total = 0
    for w, xs in buckets.items():
        for w2 in range(w, w + r + 1):
            ys = buckets.get(w2)
            if ys is None:
                continue
            hits = 0
            for start in range(0, len(xs), _CHUNK):
                d = np.bitwise_count(xs[start:start + _CHUNK, None] ^ ys[None, :])
                hits += int(np.count_nonzero((d >= 1) & (d <= r)))
            # same-bucket pairs were seen in both orders
            total += hits // 2 if w2 == w else hits
    return total


def edges_within(A: VertexFamily, r: int) -> int:
    """Number of edges of Q_n^r induced by ``A``."""
    _check_r(r, A.dim)
    if len(A) <= SMALL_FAMILY or A.dim > _NUMPY_DIM:
        return count_pairs_allpairs(A.members, r)
    return count_pairs_bucketed(A.members, r)


def distance_profile(A: VertexFamily) -> list[int]:
    """``profile[d]`` is the number of unordered pairs of ``A`` at distance ``d`` (index 0 unused).

    ``edges_within(A, r) == sum(profile[1:r + 1])`` for every r.
    """
    n = A.dim
    m = len(A)
    profile = [0] * (n + 1)
    if m < 2:
        return profile
    if n > _NUMPY_DIM or m <= SMALL_FAMILY:
        members = A.members
        for i, x in enumerate(members):
            for y in members[i + 1:]:
                profile[(x ^ y).bit_count()] += 1
        return profile
    arr = _as_array(A.members)
    cols = np.arange(m)
    rows = max(1, (1 << 22) // m)
    acc = np.zeros(n + 1, dtype=np.int64)
    for start in range(0, m, rows):
        block = arr[start:start + rows]
        d = np.bitwise_count(block[:, None] ^ arr[None, :])
        later = cols[None, :] > np.arange(start, start + len(block))[:, None]
        acc += np.bincount(d[later], minlength=n + 1)[: n + 1]
    return [int(c) for c in acc]


@lru_cache(maxsize=None)
def flip_masks_py(n: int, r: int) -> tuple[int, ...]:
    """All nonzero patterns of weight at most r, i.e. the offsets to the neighbours of a vertex."""
    masks = []
    for j in range(1, r + 1):
        for coords in combinations(range(n), j):
            m = 0
            for c in coords:
                m |= 1 << c
            masks.append(m)
    return tuple(masks)


@lru_cache(maxsize=None)
def flip_masks(n: int, r: int) -> np.ndarray:
    return np.array(flip_masks_py(n, r), dtype=np.uint64)


def edge_boundary(A: VertexFamily, r: int) -> int:
    """Number of Q_n^r edges with exactly one end in ``A``.

    Counted directly by walking every neighbour of every member, so it is an
    independent route from :func:`edges_within` and the regularity identity.
    """
    _check_r(r, A.dim)
    if not len(A):
        return 0
    if A.dim > _NUMPY_DIM:
        index = A.index
        return sum(1 for x in A.members for f in flip_masks_py(A.dim, r) if x ^ f not in index)
    arr = _as_array(A.members)  # already sorted
    flips = flip_masks(A.dim, r)
    outside = 0
    rows = max(1, (1 << 20) // max(1, len(flips)))
    for start in range(0, len(arr), rows):
        nbrs = (arr[start:start + rows, None] ^ flips[None, :]).ravel()
        pos = np.searchsorted(arr, nbrs)
        pos[pos == len(arr)] = 0
        outside += int(np.count_nonzero(arr[pos] != nbrs))
    return outside


def check_regularity_identity(A: VertexFamily, r: int) -> bool:
    """``2 e(A) + |boundary(A)| == degree(n, r) * |A|``."""
    return 2 * edges_within(A, r) + edge_boundary(A, r) == degree(A.dim, r) * len(A)


def pair_class(x: int, y: int) -> PairClass:
    b = (x & ~y).bit_count()
    a = (y & ~x).bit_count()
    return PairClass(b, a) if b >= a else PairClass(a, b)


def edge_decomposition(A: VertexFamily, rmax: int) -> EdgeDecomposition:
    """Split the induced pairs at distance 1..rmax by their (b, a) class."""
    _check_r(rmax, A.dim, "rmax")
    counts: dict[tuple[int, int], int] = {}
    members = A.members
    for i, x in enumerate(members):
        for y in members[i + 1:]:
            b = (x & ~y).bit_count()
            a = (y & ~x).bit_count()
            if b + a <= rmax:
                key = (b, a) if b >= a else (a, b)
                counts[key] = counts.get(key, 0) + 1
    return EdgeDecomposition(rmax, {PairClass(b, a): c for (b, a), c in sorted(counts.items())})
