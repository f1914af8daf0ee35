"""Down- and left-compressions, their fixpoint, ranks and large-element counts.

``D_i`` replaces each member x containing i by x - {i} when that set is not
already present; ``C_ij`` (i < j) replaces x with x & {i, j} = {j} by
x + {i} - {j} under the same rule.  Both are injective on the moved members,
so family size is preserved, and both lower the rank sum by a positive
amount per moved member, which bounds the number of proper steps.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from cubeiso.core import Vertex, VertexFamily, edges_within
from cubeiso.errors import InvalidInput


def rank_bits(bits: int) -> int:
    total = 0
    i = 1
    while bits:
        if bits & 1:
            total += i
        bits >>= 1
        i += 1
    return total


def rank(x: Vertex) -> int:
    """Sum of the coordinates present in x."""
    return rank_bits(x.bits)


def rank_sum(A: VertexFamily) -> int:
    return sum(rank_bits(x) for x in A.members)


def is_down_set(A: VertexFamily) -> bool:
    index = A.index
    for x in A.members:
        rest = x
        while rest:
            low = rest & -rest
            if x ^ low not in index:
                return False
            rest ^= low
    return True


def is_left_compressed(A: VertexFamily) -> bool:
    index = A.index
    n = A.dim
    for x in A.members:
        for j in range(1, n):
            if not x >> j & 1:
                continue
            for i in range(j):
                if not x >> i & 1 and (x ^ (1 << j)) | (1 << i) not in index:
                    return False
    return True


def _check_coord(c: int, n: int, name: str) -> None:
    if not 1 <= c <= n:
        raise InvalidInput(f"coordinate {name}={c} outside [1, {n}]")


def _left_compress(A: VertexFamily, i: int, j: int) -> tuple[VertexFamily, int]:
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    index = A.index
    out = []
    moved = 0
    for x in A.members:
        if x & bj and not x & bi:
            y = x ^ bj | bi
            if y not in index:
                out.append(y)
                moved += 1
                continue
        out.append(x)
    return (VertexFamily._trusted(A.dim, out) if moved else A), moved


def _down_compress(A: VertexFamily, i: int) -> tuple[VertexFamily, int]:
    bi = 1 << (i - 1)
    index = A.index
    out = []
    moved = 0
    for x in A.members:
        if x & bi and x ^ bi not in index:
            out.append(x ^ bi)
            moved += 1
        else:
            out.append(x)
    return (VertexFamily._trusted(A.dim, out) if moved else A), moved


def left_compress_step(A: VertexFamily, i: int, j: int) -> VertexFamily:
    _check_coord(i, A.dim, "i")
    _check_coord(j, A.dim, "j")
    if i >= j:
        raise InvalidInput(f"left compression needs i < j, got i={i}, j={j}")
    return _left_compress(A, i, j)[0]


def down_compress_step(A: VertexFamily, i: int) -> VertexFamily:
    _check_coord(i, A.dim, "i")
    return _down_compress(A, i)[0]


@dataclass(frozen=True)
class CompressionStep:
    operator: str
    rank_sum_before: int
    rank_sum_after: int
    edges_before: int
    edges_after: int


@dataclass
class CompressionTrace:
    r: int
    steps: list[CompressionStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(asdict(s)) + "\n" for s in self.steps)


def normalize(A: VertexFamily, r: int) -> tuple[VertexFamily, CompressionTrace]:
    """Compress ``A`` to a left-compressed down-set of the same size.

    Each pass applies D_n, ..., D_1 and then every C_ij in lexicographic
    (i, j) order; passes repeat until one changes nothing.  Only steps that
    move at least one member are recorded, each with the rank sum and the
    number of Q_n^r edges before and after.
    """
    n = A.dim
    if not 1 <= r <= n:
        raise InvalidInput(f"r must satisfy 1 <= r <= n = {n}, got {r}")
    trace = CompressionTrace(r)
    if not len(A):
        return A, trace
    ops: list[tuple[str, tuple[int, ...]]] = [("down", (i,)) for i in range(n, 0, -1)]
    ops += [("left", (i, j)) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    current = A
    current_rank = rank_sum(A)
    current_edges = edges_within(A, r)
    changed = True
    while changed:
        changed = False
        for kind, args in ops:
            if kind == "down":
                nxt, moved = _down_compress(current, *args)
            else:
                nxt, moved = _left_compress(current, *args)
            if not moved:
                continue
            changed = True
            nxt_rank = rank_sum(nxt)
            nxt_edges = edges_within(nxt, r)
            label = f"{kind}({','.join(map(str, args))})"
            trace.steps.append(CompressionStep(label, current_rank, nxt_rank, current_edges, nxt_edges))
            current, current_rank, current_edges = nxt, nxt_rank, nxt_edges
    return current, trace


def ell_x(x: Vertex, beta: int) -> int:
    """Number of coordinates of x strictly greater than ``beta``."""
    if not 0 <= beta <= x.dim:
        raise InvalidInput(f"beta must satisfy 0 <= beta <= n = {x.dim}, got {beta}")
    return (x.bits >> beta).bit_count()


def split_edge_decomposition(A: VertexFamily, rmax: int, beta: int) -> dict[tuple[int, int], tuple[int, int]]:
    """Per (b, a) class, the pair counts split by how the large-element counts compare.

    Each pair {x, y} is oriented so that |x \\ y| = b >= a = |y \\ x|; the
    first count takes pairs with ``ell_x(y) <= ell_x(x)``, the second those
    with ``ell_x(y) > ell_x(x)``.  When b == a both orientations qualify and
    the pair is oriented to land in the first count.
    """
    if not 1 <= rmax <= A.dim:
        raise InvalidInput(f"rmax must satisfy 1 <= rmax <= n = {A.dim}, got {rmax}")
    counts: dict[tuple[int, int], list[int]] = {}
    members = A.members
    large = [(x >> beta).bit_count() for x in members]
    for i, x in enumerate(members):
        for k in range(i + 1, len(members)):
            y = members[k]
            b = (x & ~y).bit_count()
            a = (y & ~x).bit_count()
            if b + a > rmax:
                continue
            lx, ly = large[i], large[k]
            if b < a or (b == a and lx < ly):
                b, a, lx, ly = a, b, ly, lx
            slot = counts.setdefault((b, a), [0, 0])
            slot[0 if ly <= lx else 1] += 1
    return {key: (v[0], v[1]) for key, v in sorted(counts.items())}
