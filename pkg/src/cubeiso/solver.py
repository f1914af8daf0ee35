"""Exact computation of D(m, n, r) at desk scale.

Both backends walk order ideals of a poset on the vertices of {0,1}^n with
one depth-first engine.  Positions are a linear extension of the poset and
an ideal is built by appending positions in increasing order, each allowed
only once all its predecessors are present; every ideal of a given size is
reached exactly once.

* exhaustive: the empty poset, so the ideals are all m-subsets.
* compressed: the poset generated by deleting one element and by moving an
  element j to j - 1 when j - 1 is absent.  Its ideals are exactly the
  left-compressed down-sets.

Branches are cut only when an optimistic completion is strictly below the
best value seen, so every optimum survives and witness lists are complete
for the space searched.
"""
from __future__ import annotations

import json
import os
import time
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from math import comb

from cubeiso.core import VertexFamily, degree, edge_boundary, flip_masks_py
from cubeiso.constructions import initial_segment
from cubeiso.errors import BackendDisagreement, InvalidInput, ResourceLimit

BACKENDS = ("exhaustive", "compressed")
BUDGET_ENV = "CUBEISO_BUDGET"


@dataclass(frozen=True)
class SolverBudget:
    """Search limits.  ``from_env`` may raise these, never lower them."""

    exhaustive_max_n: int = 4
    # beyond exhaustive_max_n, sizes within this distance of 0 or 2^n are
    # still searched exhaustively, provided the subset count stays below the cap
    exhaustive_small_side: int = 3
    exhaustive_max_subsets: int = 3_000_000
    compressed_max_n: int = 8

    @classmethod
    def from_env(cls, environ: dict[str, str] | None = None) -> SolverBudget:
        environ = os.environ if environ is None else environ
        raw = environ.get(BUDGET_ENV, "").strip()
        budget = cls()
        if not raw:
            return budget
        known = {f.name for f in fields(cls)}
        updates = {}
        for item in raw.replace(";", ",").split(","):
            item = item.strip()
            if not item:
                continue
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise InvalidInput(f"{BUDGET_ENV}: expected key=value with key in {sorted(known)}, got {item!r}")
            try:
                number = int(value)
            except ValueError:
                raise InvalidInput(f"{BUDGET_ENV}: {key} must be an integer, got {value!r}") from None
            updates[key] = max(number, getattr(budget, key))
        return replace(budget, **updates)

    def allows_exhaustive(self, n: int, m: int) -> bool:
        if n <= self.exhaustive_max_n:
            return True
        side = min(m, (1 << n) - m)
        return side <= self.exhaustive_small_side and comb(1 << n, side) <= self.exhaustive_max_subsets

    def allows_compressed(self, n: int) -> bool:
        return n <= self.compressed_max_n


@dataclass
class SolveResult:
    n: int
    m: int
    r: int
    value: int
    witnesses: list[VertexFamily]
    backend: str
    witness_complete: bool = True
    wall_time: float | None = field(default=None, compare=False)

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "n": self.n,
            "m": self.m,
            "r": self.r,
            "value": self.value,
            "backend": self.backend,
            "witness_complete": self.witness_complete,
            "witness_count": len(self.witnesses),
            "witnesses": [w.to_dict() for w in self.witnesses],
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing))


@dataclass(frozen=True)
class _Universe:
    n: int
    r: int
    bits: tuple[int, ...]
    preds: tuple[int, ...]
    nbrs: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.bits)


def _order(n: int, kind: str) -> list[int]:
    vertices = range(1 << n)
    if kind == "subsets":
        return list(vertices)
    if kind == "down":
        return sorted(vertices, key=lambda x: (x.bit_count(), x))
    # deletion lowers the rank by the coordinate, a unit left shift by one
    from cubeiso.compression import rank_bits

    return sorted(vertices, key=lambda x: (rank_bits(x), x))


def _pred_vertices(x: int, n: int, kind: str) -> list[int]:
    if kind == "subsets":
        return []
    out = []
    rest = x
    while rest:
        low = rest & -rest
        out.append(x ^ low)
        rest ^= low
    if kind == "compressed":
        for j in range(1, n):
            if x >> j & 1 and not x >> (j - 1) & 1:
                out.append(x ^ (1 << j) ^ (1 << (j - 1)))
    return out


def _universe(n: int, r: int, kind: str) -> _Universe:
    bits = _order(n, kind)
    where = {x: p for p, x in enumerate(bits)}
    masks = flip_masks_py(n, r) if r else ()
    preds = []
    nbrs = []
    for x in bits:
        pm = 0
        for y in _pred_vertices(x, n, kind):
            pm |= 1 << where[y]
        preds.append(pm)
        nm = 0
        for f in masks:
            nm |= 1 << where[x ^ f]
        nbrs.append(nm)
    return _Universe(n, r, tuple(bits), tuple(preds), tuple(nbrs))


@dataclass
class _Prefix:
    chosen: tuple[int, ...]
    ideal: int
    edges: int


def _children(u: _Universe, prefix: _Prefix, m: int) -> Iterator[_Prefix]:
    last = prefix.chosen[-1] if prefix.chosen else -1
    need = m - len(prefix.chosen)
    J = prefix.ideal
    for p in range(last + 1, u.size - need + 1):
        if u.preds[p] & ~J:
            continue
        gain = (u.nbrs[p] & J).bit_count()
        yield _Prefix(prefix.chosen + (p,), J | 1 << p, prefix.edges + gain)


def _frontier(u: _Universe, m: int, target: int) -> list[_Prefix]:
    """Breadth-first expansion of the search tree until it has ``target`` nodes."""
    level = [_Prefix((), 0, 0)]
    depth = 0
    while depth < m and len(level) < target:
        level = [c for pre in level for c in _children(u, pre, m)]
        depth += 1
    return level


def _search(u: _Universe, m: int, starts: list[_Prefix]) -> tuple[int, list[tuple[int, ...]]]:
    """Best edge count over ideals of size m extending ``starts``, with all optima."""
    deg = degree(u.n, u.r) if u.r else 0
    # cap[s]: most edges q = m - s further vertices can add to an ideal of size s
    cap = [sum(min(s + i, deg) for i in range(m - s)) for s in range(m + 1)]
    preds, nbrs, size = u.preds, u.nbrs, u.size
    best = -1
    found: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def rec(J: int, last: int, s: int, e: int) -> None:
        nonlocal best
        if s == m:
            if e > best:
                best = e
                found.clear()
            if e == best:
                found.append(tuple(chosen))
            return
        if e + cap[s] < best:
            return
        rest = cap[s + 1]
        for p in range(last + 1, size - (m - s) + 1):
            if preds[p] & ~J:
                continue
            gain = (nbrs[p] & J).bit_count()
            if e + gain + rest < best:
                continue
            chosen.append(p)
            rec(J | 1 << p, p, s + 1, e + gain)
            chosen.pop()

    for start in starts:
        chosen[:] = start.chosen
        last = start.chosen[-1] if start.chosen else -1
        rec(start.ideal, last, len(start.chosen), start.edges)
    return best, found


def _search_task(args: tuple[_Universe, int, list[_Prefix]]) -> tuple[int, list[tuple[int, ...]]]:
    return _search(*args)


def _run(u: _Universe, m: int, workers: int) -> tuple[int, list[tuple[int, ...]]]:
    if workers <= 1 or m == 0:
        return _search(u, m, [_Prefix((), 0, 0)])
    starts = _frontier(u, m, 8 * workers)
    chunks = [starts[i::workers] for i in range(workers)]
    chunks = [c for c in chunks if c]
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(_search_task, [(u, m, c) for c in chunks]))
    best = max((b for b, _ in parts), default=-1)
    found = [w for b, ws in parts if b == best for w in ws]
    return best, found


def _witness_families(u: _Universe, found: list[tuple[int, ...]], complement: bool) -> list[VertexFamily]:
    full = set(range(1 << u.n)) if complement else None
    out = []
    for positions in found:
        members = [u.bits[p] for p in positions]
        if complement:
            members = sorted(full.difference(members))
        out.append(VertexFamily._trusted(u.n, members))
    out.sort(key=lambda A: A.members)
    return out


def _check_args(n: int, m: int, r: int) -> None:
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    if not 1 <= r <= n:
        raise InvalidInput(f"r must satisfy 1 <= r <= n = {n}, got {r}")
    if not 0 <= m <= 1 << n:
        raise InvalidInput(f"m must satisfy 0 <= m <= 2^n = {1 << n}, got {m}")


def solve_exhaustive(
    n: int, m: int, r: int, budget: SolverBudget | None = None, workers: int = 1
) -> SolveResult:
    """D(m, n, r) and every optimal m-subset of {0,1}^n.

    Sizes above 2^(n-1) are searched through complements: with N = 2^n and
    d = degree(n, r), e(A) = e(complement) + d * (2m - N) / 2.
    """
    _check_args(n, m, r)
    budget = budget or SolverBudget.from_env()
    if not budget.allows_exhaustive(n, m):
        raise ResourceLimit(
            f"exhaustive search over C(2^{n}, {m}) subsets exceeds the budget; "
            "use the compressed backend or raise it via " + BUDGET_ENV
        )
    start = time.perf_counter()
    total = 1 << n
    complement = m > total - m
    size = total - m if complement else m
    u = _universe(n, r, "subsets")
    best, found = _run(u, size, workers)
    value = best + degree(n, r) * (2 * m - total) // 2 if complement else best
    witnesses = _witness_families(u, found, complement)
    return SolveResult(n, m, r, value, witnesses, "exhaustive", True, time.perf_counter() - start)


def solve_compressed(
    n: int, m: int, r: int, budget: SolverBudget | None = None, workers: int = 1
) -> SolveResult:
    """Best edge count over left-compressed down-sets of size m, with all optima there."""
    _check_args(n, m, r)
    budget = budget or SolverBudget.from_env()
    if not budget.allows_compressed(n):
        raise ResourceLimit(f"compressed search at n={n} exceeds the budget (n <= {budget.compressed_max_n})")
    start = time.perf_counter()
    u = _universe(n, r, "compressed")
    best, found = _run(u, m, workers)
    witnesses = _witness_families(u, found, False)
    return SolveResult(n, m, r, best, witnesses, "compressed", True, time.perf_counter() - start)


def solve(
    n: int,
    m: int,
    r: int,
    backend: str = "auto",
    cross_check: bool = False,
    budget: SolverBudget | None = None,
    workers: int = 1,
) -> SolveResult:
    """Dispatch to a backend; ``auto`` prefers exhaustive when its budget allows.

    With ``cross_check`` both backends run whenever both budgets allow, and a
    value mismatch raises :class:`BackendDisagreement` carrying both results.
    """
    budget = budget or SolverBudget.from_env()
    if backend not in BACKENDS + ("auto",):
        raise InvalidInput(f"backend must be one of {BACKENDS + ('auto',)}, got {backend!r}")
    if backend == "auto":
        backend = "exhaustive" if budget.allows_exhaustive(n, m) else "compressed"
    solver = solve_exhaustive if backend == "exhaustive" else solve_compressed
    result = solver(n, m, r, budget, workers)
    if cross_check and budget.allows_exhaustive(n, m) and budget.allows_compressed(n):
        other_solver = solve_compressed if backend == "exhaustive" else solve_exhaustive
        other = other_solver(n, m, r, budget, workers)
        if other.value != result.value:
            raise BackendDisagreement(
                f"D({m},{n},{r}): {result.backend} found {result.value}, {other.backend} found "
                f"{other.value}; witnesses {result.to_json()} vs {other.to_json()}"
            )
    return result


def _check_enum_n(n: int, budget: SolverBudget | None) -> None:
    budget = budget or SolverBudget.from_env()
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    if not budget.allows_compressed(n):
        raise ResourceLimit(f"enumeration at n={n} exceeds the budget (n <= {budget.compressed_max_n})")


def _ideals(u: _Universe, sizes: range) -> Iterator[VertexFamily]:
    for m in sizes:
        stack = [_Prefix((), 0, 0)]
        while stack:
            pre = stack.pop()
            if len(pre.chosen) == m:
                yield VertexFamily._trusted(u.n, [u.bits[p] for p in pre.chosen])
                continue
            stack.extend(reversed(list(_children(u, pre, m))))


def enumerate_lcds(n: int, m: int, budget: SolverBudget | None = None) -> Iterator[VertexFamily]:
    """Every left-compressed down-set of {0,1}^n with m members, each once."""
    _check_enum_n(n, budget)
    if not 0 <= m <= 1 << n:
        raise InvalidInput(f"m must satisfy 0 <= m <= 2^n, got {m}")
    return _ideals(_universe(n, 0, "compressed"), range(m, m + 1))


def enumerate_all_lcds(n: int, budget: SolverBudget | None = None) -> Iterator[VertexFamily]:
    """Every left-compressed down-set of {0,1}^n, by size."""
    _check_enum_n(n, budget)
    return _ideals(_universe(n, 0, "compressed"), range((1 << n) + 1))


def enumerate_down_sets(n: int, budget: SolverBudget | None = None) -> Iterator[VertexFamily]:
    """Every down-set of {0,1}^n, by size (7581 of them at n = 5)."""
    _check_enum_n(n, budget)
    if n > 5:
        raise ResourceLimit(f"enumerating all down-sets is limited to n <= 5, got {n}")
    return _ideals(_universe(n, 0, "down"), range((1 << n) + 1))


def verify_harper_small(n: int, budget: SolverBudget | None = None) -> bool:
    """Whether initial segments minimize the Q_n edge boundary at every size.

    The minimum is taken over every subset of {0,1}^n, counting boundary
    edges directly from adjacency rather than through the solver.
    """
    budget = budget or SolverBudget.from_env()
    if n < 1:
        raise InvalidInput(f"n must be positive, got {n}")
    if n > budget.exhaustive_max_n:
        raise ResourceLimit(f"Harper check enumerates all 2^(2^{n}) subsets; limited to n <= {budget.exhaustive_max_n}")
    total = 1 << n
    nbr = [sum(1 << (x ^ (1 << i)) for i in range(n)) for x in range(total)]
    best = [None] * (total + 1)
    for mask in range(1 << total):
        size = mask.bit_count()
        boundary = 0
        rest = mask
        while rest:
            low = rest & -rest
            boundary += (nbr[low.bit_length() - 1] & ~mask).bit_count()
            rest ^= low
        if best[size] is None or boundary < best[size]:
            best[size] = boundary
    return all(edge_boundary(initial_segment(n, m), 1) == best[m] for m in range(total + 1))
